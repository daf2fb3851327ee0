#pragma once

// Brute-force send-on-delta reference: walks a fine grid and locates each
// crossing on the continuous signal by bisection. Shares no code with the
// library encoder.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oracle {

struct Event {
    double time;
    int direction;
};

struct Result {
    int initial_level = 0;
    std::vector<Event> events;
};

inline double level(int k, int n_levels, double s_max) {
    return -s_max + 2.0 * s_max * k / (n_levels - 1);
}

inline Result sod(const std::function<double(double)>& s, double duration, long fine_steps, int n_levels,
                  double s_max) {
    Result r;
    const double s0 = s(0.0);
    double best = INFINITY;
    for (int k = 0; k < n_levels; ++k) {
        const double d = std::abs(s0 - level(k, n_levels, s_max));
        if (d < best) {
            best = d;
            r.initial_level = k;
        }
    }
    int cur = r.initial_level;
    const double h = duration / static_cast<double>(fine_steps);
    double ta = 0.0;
    for (long i = 1; i <= fine_steps; ++i) {
        const double tb = i == fine_steps ? duration : static_cast<double>(i) * h;
        const double vb = s(tb);
        for (;;) {
            int dir = 0;
            double thr = 0.0;
            if (cur + 1 < n_levels && vb >= level(cur + 1, n_levels, s_max)) {
                dir = +1;
                thr = level(cur + 1, n_levels, s_max);
            } else if (cur > 0 && vb <= level(cur - 1, n_levels, s_max)) {
                dir = -1;
                thr = level(cur - 1, n_levels, s_max);
            } else {
                break;
            }
            double lo = ta;
            double hi = tb;
            for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double v = s(mid);
                if (dir > 0 ? v >= thr : v <= thr) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            r.events.push_back({hi, dir});
            cur += dir;
        }
        ta = tb;
    }
    return r;
}

/// Empty when the streams agree: same initial level, same direction sequence,
/// times within tol. Otherwise a description of the first mismatch.
template <class Stream>
std::optional<std::string> compare(const Result& want, const Stream& got, double tol) {
    if (want.initial_level != got.initial_level) {
        return "initial level " + std::to_string(got.initial_level) + " vs " + std::to_string(want.initial_level);
    }
    if (want.events.size() != got.events.size()) {
        return "event count " + std::to_string(got.events.size()) + " vs " + std::to_string(want.events.size());
    }
    for (std::size_t i = 0; i < want.events.size(); ++i) {
        if (want.events[i].direction != got.events[i].direction) {
            return "direction differs at event " + std::to_string(i);
        }
        if (std::abs(want.events[i].time - got.events[i].time) > tol) {
            return "time differs at event " + std::to_string(i) + ": " + std::to_string(got.events[i].time) + " vs " +
                   std::to_string(want.events[i].time);
        }
    }
    return std::nullopt;
}

/// 3.5 sin(2 pi t) with the phase reduced first so that whole periods give exactly 0.
inline double exact_phase_sine(double t) {
    return 3.5 * std::sin(2.0 * 3.14159265358979323846 * (t - std::floor(t)));
}

inline double ramp(double t) { return 8.0 * t - 4.0; }

} // namespace oracle
