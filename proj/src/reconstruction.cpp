#include "ebc/reconstruction.hpp"

#include "ebc/cardinal_series.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace ebc {

std::string_view to_string(ReconstructionSource source) {
    return source == ReconstructionSource::Ebc ? "EBC" : "WSK";
}

Reconstruction reconstruct_ebc(const NonuniformSamples& samples, double grid_rate, double duration) {
    const auto n = static_cast<std::size_t>(std::llround(grid_rate * duration));
    Reconstruction rec{grid_rate, std::vector<double>(n, 0.0), ReconstructionSource::Ebc};
    if (samples.empty()) {
        return rec;
    }
    std::size_t j = 0; // samples[j] is the first sample with time > t
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / grid_rate;
        while (j < samples.size() && samples[j].time <= t) {
            ++j;
        }
        if (j == 0) {
            rec.values[k] = samples.front().value;
        } else if (j == samples.size()) {
            rec.values[k] = samples.back().value;
        } else {
            const auto& a = samples[j - 1];
            const auto& b = samples[j];
            const double f = (t - a.time) / (b.time - a.time);
            rec.values[k] = a.value + f * (b.value - a.value);
        }
    }
    return rec;
}

namespace {

bool is_integral(double v) { return v > 0.0 && v < 1e12 && std::floor(v) == v; }

std::shared_ptr<const CardinalSeries> lattice_for(std::size_t n_coeffs, std::int64_t f_s, std::int64_t rate,
                                                  std::size_t n_out) {
    using Key = std::tuple<std::size_t, std::int64_t, std::int64_t, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const CardinalSeries>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[Key{n_coeffs, f_s, rate, n_out}];
    if (!slot) {
        slot = std::make_shared<const CardinalSeries>(n_coeffs, 0, f_s, rate, n_out);
    }
    return slot;
}

} // namespace

std::vector<double> bandlimited_interpolate(std::span<const double> samples, double f_s, double grid_rate,
                                            std::size_t n_out) {
    if (samples.empty()) {
        return std::vector<double>(n_out, 0.0);
    }
    if (is_integral(f_s) && is_integral(grid_rate)) {
        const auto series = lattice_for(samples.size(), static_cast<std::int64_t>(f_s),
                                        static_cast<std::int64_t>(grid_rate), n_out);
        return series->evaluate(samples);
    }
    std::vector<double> x(n_out);
    for (std::size_t k = 0; k < n_out; ++k) {
        x[k] = f_s * static_cast<double>(k) / grid_rate;
    }
    return cardinal_series_direct(samples, x);
}

Reconstruction reconstruct_wsk(const SymbolStream& stream, double grid_rate, double duration) {
    std::vector<double> v(stream.indices.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = dequantize(stream.indices[i], stream.config.n_bits, stream.config.s_max);
    }
    const auto n = static_cast<std::size_t>(std::llround(grid_rate * duration));
    return Reconstruction{grid_rate, bandlimited_interpolate(v, stream.config.f_s, grid_rate, n),
                          ReconstructionSource::Wsk};
}

Reconstruction nyquist_reconstruct_reference(const VbwSignal& signal, double f_s, double grid_rate) {
    const DenseTrace trace = eval_trace(signal, wsk_trace_rate(f_s, grid_rate));
    const auto v = wsk_analog_samples(trace, f_s);
    const auto n = static_cast<std::size_t>(std::llround(grid_rate * signal.duration()));
    return Reconstruction{grid_rate, bandlimited_interpolate(v, f_s, grid_rate, n), ReconstructionSource::Wsk};
}

} // namespace ebc
