#include "ebc/sod_sampling.hpp"

#include "ebc/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ebc {

SodConfig SodConfig::with_levels(int n_levels, double s_max) {
    if (n_levels < 2) {
        throw std::invalid_argument("SOD needs at least two levels");
    }
    if (!(s_max > 0.0)) {
        throw std::invalid_argument("SOD amplitude range must be positive");
    }
    return SodConfig{n_levels, s_max};
}

int SodConfig::nearest_level(double x) const {
    const double u = (x + s_max) / delta_l();
    const double k = std::ceil(u - 0.5);
    return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(n_levels - 1)));
}

double detection_rate(double delta_l, double s_max, double w_max, double base_rate) {
    const double min_rate = std::max(4.0 * 2.0 * std::numbers::pi * s_max * w_max / delta_l, kMaxDetectionStepInv);
    return base_rate * std::max(1.0, std::ceil(min_rate / base_rate));
}

EventStream sod_encode(std::span<const double> v, double rate, const SodConfig& config) {
    if (v.empty()) {
        throw std::invalid_argument("sod_encode: empty grid");
    }
    EventStream stream;
    stream.duration = static_cast<double>(v.size() - 1) / rate;

    const int top = config.n_levels - 1;
    int ref = config.nearest_level(v[0]);
    stream.initial_level = ref;

    constexpr double inf = std::numeric_limits<double>::infinity();
    auto upper = [&] { return ref < top ? config.level(ref + 1) : inf; };
    auto lower = [&] { return ref > 0 ? config.level(ref - 1) : -inf; };
    double up = upper();
    double down = lower();

    for (std::size_t i = 1; i < v.size(); ++i) {
        const double b = v[i];
        if (b < up && b > down) {
            continue;
        }
        const double a = v[i - 1];
        const double t_prev = static_cast<double>(i - 1) / rate;
        // Several levels may be passed inside one step; emit them in order.
        while (b >= up) {
            const double frac = (up - a) / (b - a);
            stream.events.push_back({t_prev + frac / rate, +1});
            ++ref;
            up = upper();
        }
        while (b <= down) {
            const double frac = (a - down) / (a - b);
            stream.events.push_back({t_prev + frac / rate, -1});
            --ref;
            down = lower();
        }
        up = upper();
        down = lower();
    }
    return stream;
}

EventStream sod_encode(const VbwSignal& signal, const SodConfig& config) {
    const double rate = detection_rate(config.delta_l(), config.s_max, signal.profile().w_max);
    const DenseTrace grid = eval_closed_trace(signal, rate);
    return sod_encode(grid.values, rate, config);
}

EventStream sod_encode(const std::function<double(double)>& signal, double duration, double rate,
                       const SodConfig& config) {
    const auto n = static_cast<std::size_t>(std::llround(rate * duration));
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = signal(static_cast<double>(i) / rate);
    }
    v[n] = signal(duration);
    return sod_encode(v, rate, config);
}

NonuniformSamples events_to_samples(const EventStream& stream, const SodConfig& config) {
    NonuniformSamples out;
    out.reserve(stream.events.size());
    int level = stream.initial_level;
    if (level < 0 || level >= config.n_levels) {
        throw std::runtime_error("event stream: initial level outside the level grid");
    }
    for (const auto& e : stream.events) {
        level += e.direction;
        if (level < 0 || level >= config.n_levels) {
            throw std::runtime_error("event stream: running level leaves the grid at t=" + format_sig(e.time));
        }
        out.push_back({e.time, config.level(level)});
    }
    return out;
}

double t_lb(const SodConfig& config, double s_max, double w_max) {
    return config.delta_l() / (2.0 * std::numbers::pi * s_max * w_max);
}

std::optional<double> min_gap(const EventStream& stream) {
    if (stream.events.size() < 2) {
        return std::nullopt;
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < stream.events.size(); ++i) {
        gap = std::min(gap, stream.events[i].time - stream.events[i - 1].time);
    }
    return gap;
}

double event_rate(const EventStream& stream) {
    return static_cast<double>(stream.events.size()) / stream.duration;
}

void write_event_stream(std::ostream& os, const EventStream& stream) {
    os << "initial_level=" << stream.initial_level << '\n';
    for (const auto& e : stream.events) {
        os << format_sig(e.time) << ',' << (e.direction > 0 ? "1" : "-1") << '\n';
    }
}

EventStream read_event_stream(std::istream& is, double duration) {
    EventStream stream;
    stream.duration = duration;
    std::string line;
    if (!std::getline(is, line) || line.rfind("initial_level=", 0) != 0) {
        throw std::runtime_error("event stream: missing initial_level header");
    }
    stream.initial_level = std::stoi(line.substr(14));
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("event stream: malformed line '" + line + "'");
        }
        const int dir = std::stoi(line.substr(comma + 1));
        if (dir != 1 && dir != -1) {
            throw std::runtime_error("event stream: direction must be 1 or -1");
        }
        stream.events.push_back({std::stod(line.substr(0, comma)), dir});
    }
    return stream;
}

} // namespace ebc
