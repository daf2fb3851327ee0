#pragma once

#include "ebc/signal_model.hpp"
#include "ebc/sod_sampling.hpp"
#include "ebc/wsk_pipeline.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace ebc {

enum class ReconstructionSource { Ebc, Wsk };

std::string_view to_string(ReconstructionSource source);

struct Reconstruction {
    double rate = 16000.0;
    std::vector<double> values;
    ReconstructionSource source = ReconstructionSource::Ebc;
};

/// Piecewise-linear interpolation of the SOD samples onto k / grid_rate,
/// holding the first value before the first sample and the last value after
/// the last one. No samples gives the all-zero estimate.
Reconstruction reconstruct_ebc(const NonuniformSamples& samples, double grid_rate, double duration);

/// Whittaker-Shannon interpolation sum_k v_k sinc(f_s t - k) of the
/// dequantized symbols onto k / grid_rate, summing over every sample.
Reconstruction reconstruct_wsk(const SymbolStream& stream, double grid_rate, double duration);

/// Same interpolation for plain sample values.
std::vector<double> bandlimited_interpolate(std::span<const double> samples, double f_s, double grid_rate,
                                            std::size_t n_out);

/// WSK chain without the quantizer: antialias, sample at f_s, interpolate.
Reconstruction nyquist_reconstruct_reference(const VbwSignal& signal, double f_s, double grid_rate = 16000.0);

} // namespace ebc
