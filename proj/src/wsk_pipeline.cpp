#include "ebc/wsk_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ebc {

WskConfig WskConfig::make(double f_s, int n_bits, double s_max) {
    if (!(f_s > 0.0)) {
        throw std::invalid_argument("sampling rate must be positive");
    }
    if (n_bits < 1 || n_bits > 30) {
        throw std::invalid_argument("bits per sample must be in [1, 30]");
    }
    if (!(s_max > 0.0)) {
        throw std::invalid_argument("quantizer range must be positive");
    }
    return WskConfig{f_s, n_bits, 8, s_max};
}

std::vector<Biquad> butterworth_lowpass(int order, double cutoff, double rate) {
    if (order <= 0 || order % 2 != 0) {
        throw std::invalid_argument("butterworth_lowpass: order must be positive and even");
    }
    if (!(cutoff > 0.0) || !(cutoff < rate / 2.0)) {
        throw std::invalid_argument("butterworth_lowpass: cutoff must lie in (0, rate/2)");
    }
    const double k2 = 2.0 * rate;
    const double omega = k2 * std::tan(std::numbers::pi * cutoff / rate);
    std::vector<Biquad> sections;
    for (int k = 0; k < order / 2; ++k) {
        const double theta = std::numbers::pi / 2.0 + std::numbers::pi * (2.0 * k + 1.0) / (2.0 * order);
        const std::complex<double> s = omega * std::polar(1.0, theta);
        const std::complex<double> z = (k2 + s) / (k2 - s);
        const double a1 = -2.0 * z.real();
        const double a2 = std::norm(z);
        const double g = (1.0 + a1 + a2) / 4.0;
        sections.push_back({g, 2.0 * g, g, a1, a2});
    }
    return sections;
}

double cascade_gain(std::span<const Biquad> sections, double f, double rate) {
    const std::complex<double> zi = std::polar(1.0, -2.0 * std::numbers::pi * f / rate);
    std::complex<double> h = 1.0;
    for (const auto& s : sections) {
        h *= (s.b0 + s.b1 * zi + s.b2 * zi * zi) / (1.0 + s.a1 * zi + s.a2 * zi * zi);
    }
    return std::abs(h);
}

namespace {

void filter_in_place(std::span<const Biquad> sections, std::vector<double>& x) {
    if (x.empty()) {
        return;
    }
    double u = x.front();
    for (const auto& s : sections) {
        // Steady state of the section for constant input u.
        const double y = u * (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
        double z2 = s.b2 * u - s.a2 * y;
        double z1 = s.b1 * u - s.a1 * y + z2;
        for (auto& v : x) {
            const double in = v;
            const double out = s.b0 * in + z1;
            z1 = s.b1 * in - s.a1 * out + z2;
            z2 = s.b2 * in - s.a2 * out;
            v = out;
        }
        u = y;
    }
}

} // namespace

std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x, std::size_t pad) {
    const std::size_t n = x.size();
    if (n == 0) {
        return {};
    }
    pad = std::min(pad, n - 1);
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) {
        ext.push_back(2.0 * x[0] - x[i]);
    }
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) {
        ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);
    }
    filter_in_place(sections, ext);
    std::reverse(ext.begin(), ext.end());
    filter_in_place(sections, ext);
    std::reverse(ext.begin(), ext.end());
    return {ext.begin() + static_cast<std::ptrdiff_t>(pad), ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

DenseTrace antialias(const DenseTrace& trace, double f_s, int order) {
    const double cutoff = f_s / 2.0;
    if (!(cutoff < trace.rate / 2.0)) {
        throw std::invalid_argument("antialias: cutoff " + std::to_string(cutoff) +
                                    " Hz is not below the grid Nyquist frequency");
    }
    const auto sections = butterworth_lowpass(order, cutoff, trace.rate);
    // Long enough for the slowest pole (damping ~ sin(pi / 2N) of the cutoff) to die out.
    const auto pad = static_cast<std::size_t>(std::ceil(16.0 * trace.rate / cutoff));
    return DenseTrace{trace.rate, filtfilt(sections, trace.values, pad), trace.t0};
}

std::vector<double> uniform_sample(const DenseTrace& trace, double f_s) {
    const double duration = static_cast<double>(trace.values.size()) / trace.rate;
    const auto count = static_cast<std::size_t>(std::floor(f_s * duration + 1e-9));
    std::vector<double> out(count);
    const double stride = trace.rate / f_s;
    const double rounded = std::round(stride);
    if (std::abs(stride - rounded) < 1e-9 && rounded >= 1.0) {
        const auto step = static_cast<std::size_t>(rounded);
        for (std::size_t k = 0; k < count; ++k) {
            out[k] = trace.values[k * step];
        }
        return out;
    }
    const std::size_t last = trace.values.size() - 1;
    for (std::size_t k = 0; k < count; ++k) {
        const double pos = static_cast<double>(k) * stride;
        const auto i = std::min(static_cast<std::size_t>(pos), last);
        const double f = pos - static_cast<double>(i);
        out[k] = i < last ? trace.values[i] + f * (trace.values[i + 1] - trace.values[i]) : trace.values[last];
    }
    return out;
}

double quantizer_step(int n_bits, double s_max) { return 2.0 * s_max / std::ldexp(1.0, n_bits); }

std::uint32_t quantize(double x, int n_bits, double s_max) {
    const double q = quantizer_step(n_bits, s_max);
    const double top = std::ldexp(1.0, n_bits) - 1.0;
    const double idx = std::clamp(std::floor((x + s_max) / q), 0.0, top);
    return static_cast<std::uint32_t>(idx);
}

double dequantize(std::uint32_t index, int n_bits, double s_max) {
    return -s_max + (static_cast<double>(index) + 0.5) * quantizer_step(n_bits, s_max);
}

std::vector<double> wsk_analog_samples(const DenseTrace& trace, double f_s, int order) {
    return uniform_sample(antialias(trace, f_s, order), f_s);
}

SymbolStream wsk_encode(const DenseTrace& trace, const WskConfig& config) {
    const auto samples = wsk_analog_samples(trace, config.f_s, config.filter_order);
    SymbolStream stream{config, {}, static_cast<double>(trace.values.size()) / trace.rate};
    stream.indices.reserve(samples.size());
    for (double v : samples) {
        stream.indices.push_back(quantize(v, config.n_bits, config.s_max));
    }
    return stream;
}

double wsk_trace_rate(double f_s, double base_rate) {
    return f_s * std::ceil(base_rate / f_s - 1e-9);
}

void write_symbol_stream(std::ostream& os, const SymbolStream& stream) {
    for (std::size_t i = 0; i < stream.indices.size(); ++i) {
        if (i != 0) {
            os << ',';
        }
        os << stream.indices[i];
    }
    os << '\n';
}

} // namespace ebc
