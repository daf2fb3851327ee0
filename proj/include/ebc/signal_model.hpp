#pragma once

#include "ebc/cardinal_series.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace ebc {

/// Offset-Gaussian instantaneous bandwidth W(t) of the test signals:
///
///   W(t) = offset + (w_max - offset) * exp(-(t - center)^2 / (2 sigma^2)),
///   offset = (4/3) (w_mean - w_max / 4).
///
/// With w_max = 1000 Hz and sigma = 0.1 s this is the family used for all
/// experiments; the time average over [0, 1] is w_mean up to the truncated
/// Gaussian tails. Only 250 < w_mean < 1000 keeps W(t) positive.
struct BandwidthProfile {
    double w_mean = 0.0;
    double w_max = 1000.0;
    double sigma = 0.1;
    double center = 0.5;
    double duration = 1.0;

    /// Validated construction; throws std::invalid_argument outside (250, 1000) Hz.
    static BandwidthProfile with_mean(double w_mean);

    double offset() const;
    double amplitude() const;
};

/// W(t) in Hz. Total in t.
double inst_bandwidth(const BandwidthProfile& profile, double t);

/// Warping function gamma(t) = integral_0^t W(t') dt' (so d gamma / dt = W).
/// Closed form via erf. Requires 0 <= t <= duration.
double warp(const BandwidthProfile& profile, double t);

/// Pointwise derivative bound 2 pi s_max W(t) for signals bounded by s_max.
double derivative_bound(const BandwidthProfile& profile, double t, double s_max);

/// Uniformly sampled trace. values[k] is the signal at t0 + k / rate.
struct DenseTrace {
    double rate = 0.0;
    std::vector<double> values;
    double t0 = 0.0;
};

/// A varying-bandwidth signal s(t) = sum_n a_n sinc(2 gamma(t) - n).
///
/// The prototype series is tabulated once, exactly, on a lattice oversampled
/// 64x in warped time, and evaluated at arbitrary t by 4-point Lagrange
/// interpolation of that table (relative error below 1e-6 of the amplitude
/// scale; lattice nodes are reproduced exactly). Immutable after construction.
class VbwSignal {
public:
    static constexpr std::int64_t kOversampling = 64;
    static constexpr std::int64_t kMargin = 4;

    VbwSignal(BandwidthProfile profile, std::vector<double> amplitudes, double s_max = 4.0,
              std::uint64_t seed = 0, int draws = 1);

    double operator()(double t) const;
    void evaluate(std::span<const double> t, std::span<double> out) const;

    /// Exact O(N_a) summation at one instant; slow reference path.
    double exact(double t) const;

    const BandwidthProfile& profile() const { return profile_; }
    const std::vector<double>& amplitudes() const { return amplitudes_; }
    double s_max() const { return s_max_; }
    std::uint64_t seed() const { return seed_; }
    /// Number of coefficient draws consumed before acceptance (1 = first draw accepted).
    int draws() const { return draws_; }
    double duration() const { return profile_.duration; }

private:
    double interpolate(double x) const;

    BandwidthProfile profile_;
    std::vector<double> amplitudes_;
    double s_max_;
    std::uint64_t seed_;
    int draws_;
    std::shared_ptr<const std::vector<double>> table_;
};

/// Number of sinc coefficients used for a profile, round(2 gamma(duration)).
std::size_t coefficient_count(const BandwidthProfile& profile);

/// Mixes a master seed with two stream counters into an independent substream
/// seed (splitmix64 finalizer chain); order-independent by construction.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

struct SynthesisOptions {
    double s_max = 4.0;
    int max_draws = 1000;
    /// Grid on which the amplitude bound is enforced; the default is the SOD
    /// detection grid for 100 levels over [-4, 4] (78 x 16 kHz).
    double check_rate = 1'248'000.0;
};

/// An accepted realization together with the grid it was accepted on
/// (rate check_rate, endpoint t = duration included).
struct Realization {
    VbwSignal signal;
    DenseTrace check_trace;
};

/// Draws i.i.d. N(0, 1) amplitudes from the stream seeded by `seed` and
/// redraws the whole vector until max |s| <= s_max on the check grid.
/// Throws std::runtime_error when max_draws is exhausted.
Realization synthesize_realization(const BandwidthProfile& profile, std::uint64_t seed,
                                   const SynthesisOptions& options = {});
VbwSignal synthesize_vbw(const BandwidthProfile& profile, std::uint64_t seed,
                         const SynthesisOptions& options = {});

/// s(k / rate) for k = 0 .. rate * duration - 1.
DenseTrace eval_trace(const VbwSignal& signal, double rate);

/// Same grid with the closing point t = duration appended.
DenseTrace eval_closed_trace(const VbwSignal& signal, double rate);

/// Largest ratio |s[k+1] - s[k]| * rate / (2 pi s_max max_{[t_k, t_k+1]} W) over the
/// trace. Values <= 1 mean the finite-difference slope respects the bound.
double bernstein_ratio(const DenseTrace& trace, const BandwidthProfile& profile, double s_max);

} // namespace ebc
