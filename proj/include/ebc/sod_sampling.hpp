#pragma once

#include "ebc/signal_model.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace ebc {

/// Equidistant level grid over [-s_max, s_max] with both endpoints included.
struct SodConfig {
    int n_levels = 10;
    double s_max = 4.0;

    /// Throws std::invalid_argument for n_levels < 2 or s_max <= 0.
    static SodConfig with_levels(int n_levels, double s_max = 4.0);

    double delta_l() const { return 2.0 * s_max / static_cast<double>(n_levels - 1); }
    /// Amplitude of level k; level(n_levels - 1) == s_max exactly.
    double level(int k) const { return -s_max + (2.0 * s_max * k) / static_cast<double>(n_levels - 1); }
    /// Nearest level to x, ties resolved toward the lower level, clamped to the grid.
    int nearest_level(double x) const;
};

struct SodEvent {
    double time = 0.0;
    int direction = +1; // +1 up, -1 down
};

/// One-bit event stream. initial_level is side information known to the
/// receiver and does not count as an event.
struct EventStream {
    int initial_level = 0;
    std::vector<SodEvent> events;
    double duration = 1.0;
};

struct NonuniformSample {
    double time = 0.0;
    double value = 0.0;
};
using NonuniformSamples = std::vector<NonuniformSample>;

/// Detection grids never use steps longer than 1 us.
inline constexpr double kMaxDetectionStepInv = 1e6;

/// Detection-grid rate for a level spacing: the smallest multiple of base_rate
/// giving at least four grid steps per worst-case level traversal
/// (step <= delta / (4 * 2 pi s_max w_max)) and a step of at most 1 us.
double detection_rate(double delta_l, double s_max, double w_max, double base_rate = 16000.0);

/// Send-on-delta encoding of a signal sampled on a closed uniform grid
/// (values[i] = s(i / rate), last point at t = duration). Crossing instants are
/// refined by linear inverse interpolation within the grid step.
EventStream sod_encode(std::span<const double> grid_values, double rate, const SodConfig& config);

/// Encodes a varying-bandwidth signal on the detection grid for config.
EventStream sod_encode(const VbwSignal& signal, const SodConfig& config);

/// Encodes an arbitrary callable s(t) on [0, duration] at the given grid rate.
EventStream sod_encode(const std::function<double(double)>& signal, double duration, double rate,
                       const SodConfig& config);

/// Cumulative reconstruction of level amplitudes; throws std::runtime_error
/// when the running level leaves the grid (corrupt stream).
NonuniformSamples events_to_samples(const EventStream& stream, const SodConfig& config);

/// Lower bound on the spacing of consecutive events, delta / (2 pi s_max w_max).
double t_lb(const SodConfig& config, double s_max, double w_max);

/// Smallest gap between consecutive events; nullopt for fewer than two events.
std::optional<double> min_gap(const EventStream& stream);

/// Events per second.
double event_rate(const EventStream& stream);

/// Text form: header "initial_level=<k>" then "time,direction" lines, times
/// with 9 significant digits.
void write_event_stream(std::ostream& os, const EventStream& stream);
EventStream read_event_stream(std::istream& is, double duration = 1.0);

} // namespace ebc
