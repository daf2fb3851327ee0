#include "ebc/cardinal_series.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <numeric>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace ebc {

namespace {

// FFTW planning is not thread-safe, execution is. Plans are created once per
// size with FFTW_ESTIMATE | FFTW_UNALIGNED so the chosen codelets never depend
// on timing or buffer alignment, which keeps results bit-reproducible.
struct RealFftPlans {
    fftw_plan forward;
    fftw_plan inverse;
};

RealFftPlans plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, RealFftPlans> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) {
        return it->second;
    }
    std::vector<double> real(n);
    std::vector<std::complex<double>> spec(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    RealFftPlans plans{fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c, flags),
                       fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(), flags)};
    if (plans.forward == nullptr || plans.inverse == nullptr) {
        throw std::runtime_error("fftw plan creation failed");
    }
    cache.emplace(n, plans);
    return plans;
}

void forward_fft(std::size_t n, std::vector<double>& in, std::vector<std::complex<double>>& out) {
    out.resize(n / 2 + 1);
    fftw_execute_dft_r2c(plans_for(n).forward, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse_fft(std::size_t n, std::vector<std::complex<double>>& in, std::vector<double>& out) {
    out.resize(n);
    fftw_execute_dft_c2r(plans_for(n).inverse, reinterpret_cast<fftw_complex*>(in.data()), out.data());
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) {
        p <<= 1;
    }
    return p;
}

} // namespace

double sinc(double x) {
    if (x == 0.0) {
        return 1.0;
    }
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

CardinalSeries::CardinalSeries(std::size_t n_coeffs, std::int64_t origin, std::int64_t num, std::int64_t den,
                               std::size_t n_out)
    : n_coeffs_(n_coeffs), origin_(origin), num_(num), den_(den), n_out_(n_out) {
    if (num <= 0 || den <= 0) {
        throw std::invalid_argument("cardinal series lattice step must be positive");
    }
    const std::int64_t g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
    if (n_out_ == 0 || n_coeffs_ == 0) {
        return;
    }

    m_first_ = origin_;
    const std::int64_t x_last_scaled = origin_ * den_ + static_cast<std::int64_t>(n_out_ - 1) * num_;
    const std::int64_t m_last = floor_div(x_last_scaled, den_);
    m_span_ = static_cast<std::size_t>(m_last - m_first_ + 1);
    fft_size_ = next_pow2(m_span_ + n_coeffs_ - 1);

    // Residues that actually occur on the lattice.
    std::vector<bool> used(static_cast<std::size_t>(den_), false);
    for (std::size_t n = 0; n < n_out_ && n < static_cast<std::size_t>(den_); ++n) {
        const std::int64_t x = origin_ * den_ + static_cast<std::int64_t>(n) * num_;
        used[static_cast<std::size_t>(x - floor_div(x, den_) * den_)] = true;
    }

    const std::size_t L = fft_size_;
    kernels_.resize(static_cast<std::size_t>(den_));
    std::vector<double> h(L);
    for (std::int64_t r = 1; r < den_; ++r) {
        if (!used[static_cast<std::size_t>(r)]) {
            continue;
        }
        const double frac = static_cast<double>(r) / static_cast<double>(den_);
        // sin(pi frac)/pi and the 1/L of the unnormalized inverse FFT are folded in.
        const double scale = std::sin(std::numbers::pi * frac) / (std::numbers::pi * static_cast<double>(L));
        for (std::size_t i = 0; i < L; ++i) {
            const std::int64_t j = i < m_span_ ? static_cast<std::int64_t>(i)
                                               : static_cast<std::int64_t>(i) - static_cast<std::int64_t>(L);
            h[i] = scale / (static_cast<double>(m_first_ + j) + frac);
        }
        forward_fft(L, h, kernels_[static_cast<std::size_t>(r)]);
    }
}

std::vector<double> CardinalSeries::evaluate(std::span<const double> coeffs) const {
    if (coeffs.size() != n_coeffs_) {
        throw std::invalid_argument("cardinal series: coefficient count mismatch");
    }
    std::vector<double> y(n_out_, 0.0);
    if (n_out_ == 0 || n_coeffs_ == 0) {
        return y;
    }
    const std::size_t L = fft_size_;

    // Alternating-sign coefficients: sinc(m + f - k) = (-1)^(m-k) sin(pi f) / (pi (m - k + f)).
    std::vector<double> buf(L, 0.0);
    for (std::size_t k = 0; k < n_coeffs_; ++k) {
        buf[k] = (k & 1U) ? -coeffs[k] : coeffs[k];
    }
    std::vector<std::complex<double>> coeff_spec;
    forward_fft(L, buf, coeff_spec);

    std::vector<std::complex<double>> prod(L / 2 + 1);
    std::vector<double> conv(L);
    const std::int64_t step = num_;
    for (std::int64_t r = 0; r < den_; ++r) {
        // First output index n with residue r, then every den-th one.
        std::int64_t n0 = -1;
        for (std::int64_t n = 0; n < den_ && n < static_cast<std::int64_t>(n_out_); ++n) {
            const std::int64_t x = origin_ * den_ + n * step;
            if (x - floor_div(x, den_) * den_ == r) {
                n0 = n;
                break;
            }
        }
        if (n0 < 0) {
            continue;
        }
        if (r == 0) {
            // Integer abscissae hit the coefficients exactly.
            for (std::int64_t n = n0; n < static_cast<std::int64_t>(n_out_); n += den_) {
                const std::int64_t m = floor_div(origin_ * den_ + n * step, den_);
                if (m >= 0 && m < static_cast<std::int64_t>(n_coeffs_)) {
                    y[static_cast<std::size_t>(n)] = coeffs[static_cast<std::size_t>(m)];
                }
            }
            continue;
        }
        const auto& kernel = kernels_[static_cast<std::size_t>(r)];
        for (std::size_t i = 0; i < prod.size(); ++i) {
            prod[i] = coeff_spec[i] * kernel[i];
        }
        inverse_fft(L, prod, conv);
        for (std::int64_t n = n0; n < static_cast<std::int64_t>(n_out_); n += den_) {
            const std::int64_t m = floor_div(origin_ * den_ + n * step, den_);
            const double z = conv[static_cast<std::size_t>(m - m_first_)];
            y[static_cast<std::size_t>(n)] = (m & 1) ? -z : z;
        }
    }
    return y;
}

std::vector<double> cardinal_series_direct(std::span<const double> coeffs, std::span<const double> x) {
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            acc += coeffs[k] * sinc(x[n] - static_cast<double>(k));
        }
        y[n] = acc;
    }
    return y;
}

} // namespace ebc
