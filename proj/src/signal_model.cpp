#include "ebc/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace ebc {

BandwidthProfile BandwidthProfile::with_mean(double w_mean) {
    if (!(w_mean > 250.0 && w_mean < 1000.0)) {
        throw std::invalid_argument("mean instantaneous bandwidth must lie in (250, 1000) Hz, got " +
                                    std::to_string(w_mean));
    }
    BandwidthProfile p;
    p.w_mean = w_mean;
    return p;
}

double BandwidthProfile::offset() const { return (4.0 / 3.0) * (w_mean - w_max / 4.0); }

double BandwidthProfile::amplitude() const { return w_max - offset(); }

double inst_bandwidth(const BandwidthProfile& profile, double t) {
    const double d = t - profile.center;
    return profile.offset() + profile.amplitude() * std::exp(-d * d / (2.0 * profile.sigma * profile.sigma));
}

double warp(const BandwidthProfile& profile, double t) {
    const double scale = profile.sigma * std::numbers::sqrt2;
    const double gauss_area = profile.sigma * std::sqrt(std::numbers::pi / 2.0);
    return profile.offset() * t +
           profile.amplitude() * gauss_area *
               (std::erf((t - profile.center) / scale) - std::erf(-profile.center / scale));
}

double derivative_bound(const BandwidthProfile& profile, double t, double s_max) {
    return 2.0 * std::numbers::pi * s_max * inst_bandwidth(profile, t);
}

std::size_t coefficient_count(const BandwidthProfile& profile) {
    return static_cast<std::size_t>(std::llround(2.0 * warp(profile, profile.duration)));
}

namespace {

std::shared_ptr<const CardinalSeries> lattice_for(std::size_t n_coeffs) {
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const CardinalSeries>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n_coeffs];
    if (!slot) {
        const auto P = VbwSignal::kOversampling;
        const auto n_out = static_cast<std::size_t>((static_cast<std::int64_t>(n_coeffs) + 2 * VbwSignal::kMargin) * P + 1);
        slot = std::make_shared<const CardinalSeries>(n_coeffs, -VbwSignal::kMargin, 1, P, n_out);
    }
    return slot;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

VbwSignal::VbwSignal(BandwidthProfile profile, std::vector<double> amplitudes, double s_max, std::uint64_t seed,
                     int draws)
    : profile_(profile), amplitudes_(std::move(amplitudes)), s_max_(s_max), seed_(seed), draws_(draws) {
    if (amplitudes_.empty()) {
        table_ = std::make_shared<const std::vector<double>>();
        return;
    }
    table_ = std::make_shared<const std::vector<double>>(lattice_for(amplitudes_.size())->evaluate(amplitudes_));
}

double VbwSignal::interpolate(double x) const {
    const auto& tab = *table_;
    if (tab.empty()) {
        return 0.0;
    }
    const double u = (x + static_cast<double>(kMargin)) * static_cast<double>(kOversampling);
    const double fl = std::floor(u);
    auto i = static_cast<std::ptrdiff_t>(fl);
    const auto last = static_cast<std::ptrdiff_t>(tab.size()) - 3;
    if (i < 1 || i > last) {
        throw std::out_of_range("VbwSignal evaluated outside its support");
    }
    const double f = u - fl;
    if (f == 0.0) {
        return tab[static_cast<std::size_t>(i)];
    }
    const double fm1 = f - 1.0;
    const double fm2 = f - 2.0;
    const double fp1 = f + 1.0;
    const double w0 = -f * fm1 * fm2 / 6.0;
    const double w1 = fp1 * fm1 * fm2 / 2.0;
    const double w2 = -fp1 * f * fm2 / 2.0;
    const double w3 = fp1 * f * fm1 / 6.0;
    const auto k = static_cast<std::size_t>(i);
    return w0 * tab[k - 1] + w1 * tab[k] + w2 * tab[k + 1] + w3 * tab[k + 2];
}

double VbwSignal::operator()(double t) const { return interpolate(2.0 * warp(profile_, t)); }

void VbwSignal::evaluate(std::span<const double> t, std::span<double> out) const {
    if (t.size() != out.size()) {
        throw std::invalid_argument("VbwSignal::evaluate: size mismatch");
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
        out[i] = interpolate(2.0 * warp(profile_, t[i]));
    }
}

double VbwSignal::exact(double t) const {
    const double x = 2.0 * warp(profile_, t);
    double acc = 0.0;
    for (std::size_t n = 0; n < amplitudes_.size(); ++n) {
        acc += amplitudes_[n] * sinc(x - static_cast<double>(n));
    }
    return acc;
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ (index * 0xD1B54A32D192ED03ULL));
}

DenseTrace eval_trace(const VbwSignal& signal, double rate) {
    const auto n = static_cast<std::size_t>(std::llround(rate * signal.duration()));
    DenseTrace trace{rate, std::vector<double>(n), 0.0};
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = static_cast<double>(k) / rate;
    }
    signal.evaluate(t, trace.values);
    return trace;
}

DenseTrace eval_closed_trace(const VbwSignal& signal, double rate) {
    const auto n = static_cast<std::size_t>(std::llround(rate * signal.duration())) + 1;
    DenseTrace trace{rate, std::vector<double>(n), 0.0};
    std::vector<double> t(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        t[k] = static_cast<double>(k) / rate;
    }
    t[n - 1] = signal.duration();
    signal.evaluate(t, trace.values);
    return trace;
}

Realization synthesize_realization(const BandwidthProfile& profile, std::uint64_t seed,
                                   const SynthesisOptions& options) {
    const std::size_t n_coeffs = coefficient_count(profile);
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> a(n_coeffs);
    for (int draw = 1; draw <= options.max_draws; ++draw) {
        for (auto& v : a) {
            v = normal(engine);
        }
        VbwSignal candidate(profile, a, options.s_max, seed, draw);
        DenseTrace check = eval_closed_trace(candidate, options.check_rate);
        const bool bounded = std::all_of(check.values.begin(), check.values.end(),
                                         [&](double v) { return std::abs(v) <= options.s_max; });
        if (bounded) {
            return Realization{std::move(candidate), std::move(check)};
        }
    }
    throw std::runtime_error("no bounded realization within " + std::to_string(options.max_draws) +
                             " draws (w_mean " + std::to_string(profile.w_mean) + ")");
}

VbwSignal synthesize_vbw(const BandwidthProfile& profile, std::uint64_t seed, const SynthesisOptions& options) {
    return synthesize_realization(profile, seed, options).signal;
}

double bernstein_ratio(const DenseTrace& trace, const BandwidthProfile& profile, double s_max) {
    double worst = 0.0;
    const auto& v = trace.values;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const double ta = trace.t0 + static_cast<double>(k) / trace.rate;
        const double tb = trace.t0 + static_cast<double>(k + 1) / trace.rate;
        // W is unimodal with its peak at the center.
        const double w = (ta <= profile.center && profile.center <= tb)
                             ? profile.w_max
                             : std::max(inst_bandwidth(profile, ta), inst_bandwidth(profile, tb));
        const double bound = 2.0 * std::numbers::pi * s_max * w;
        const double slope = std::abs(v[k + 1] - v[k]) * trace.rate;
        if (bound == 0.0) {
            if (slope > 0.0) {
                return INFINITY;
            }
            continue;
        }
        worst = std::max(worst, slope / bound);
    }
    return worst;
}

} // namespace ebc
