#pragma once

#include "ebc/signal_model.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ebc {

/// Uniform-sampling baseline: anti-alias filter, sampler at f_s, N-bit quantizer.
struct WskConfig {
    double f_s = 2000.0;
    int n_bits = 5;
    int filter_order = 8;
    double s_max = 4.0;

    /// f_s = 2 w_max n_os; throws std::invalid_argument for n_bits outside [1, 30]
    /// or non-positive rates.
    static WskConfig make(double f_s, int n_bits, double s_max = 4.0);

    double symbol_rate() const { return static_cast<double>(n_bits) * f_s; }
};

struct SymbolStream {
    WskConfig config;
    std::vector<std::uint32_t> indices;
    double duration = 1.0;
};

/// Direct-form-II-transposed biquad, a0 normalized to one.
struct Biquad {
    double b0, b1, b2, a1, a2;
};

/// Butterworth low-pass as cascaded second-order sections, bilinear transform
/// prewarped at the cutoff. Unit DC gain. Even orders only.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff, double rate);

/// Magnitude of a biquad cascade at frequency f on a grid of the given rate.
double cascade_gain(std::span<const Biquad> sections, double f, double rate);

/// Forward-backward (zero-phase) filtering. The input is extended at both ends
/// by odd reflection and each pass starts from the steady state of its first
/// sample, which suppresses start-up transients.
std::vector<double> filtfilt(std::span<const Biquad> sections, std::span<const double> x, std::size_t pad);

/// Order-8 Butterworth at f_s / 2 applied zero-phase on the trace grid.
/// Throws std::invalid_argument when f_s / 2 is not below the grid Nyquist.
DenseTrace antialias(const DenseTrace& trace, double f_s, int order = 8);

/// Values at k / f_s, k = 0 .. floor(f_s * duration) - 1. Integer-stride
/// decimation when rate / f_s is integral, linear interpolation otherwise.
std::vector<double> uniform_sample(const DenseTrace& trace, double f_s);

/// Mid-rise uniform quantizer over [-s_max, s_max] with saturation.
std::uint32_t quantize(double x, int n_bits, double s_max);
double dequantize(std::uint32_t index, int n_bits, double s_max);
double quantizer_step(int n_bits, double s_max);

/// antialias -> uniform_sample -> quantize.
SymbolStream wsk_encode(const DenseTrace& trace, const WskConfig& config);

/// Unquantized samples after antialias and uniform sampling.
std::vector<double> wsk_analog_samples(const DenseTrace& trace, double f_s, int order = 8);

/// Smallest integer multiple of f_s at or above base_rate; the trace rate used
/// for a given f_s so that sampling is pure decimation.
double wsk_trace_rate(double f_s, double base_rate = 16000.0);

/// Comma-separated indices on one line.
void write_symbol_stream(std::ostream& os, const SymbolStream& stream);

} // namespace ebc
