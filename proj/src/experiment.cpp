#include "ebc/experiment.hpp"

#include "ebc/reconstruction.hpp"
#include "ebc/signal_model.hpp"
#include "ebc/sod_sampling.hpp"
#include "ebc/text_format.hpp"
#include "ebc/wsk_pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ebc {

std::vector<double> SweepConfig::log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
    }
    return out;
}

void SweepConfig::validate() const {
    if (m_realizations < 1) {
        throw std::invalid_argument("m_realizations must be at least 1");
    }
    if (w_mean_list.empty()) {
        throw std::invalid_argument("w_mean_list is empty");
    }
    for (double w : w_mean_list) {
        BandwidthProfile::with_mean(w);
    }
    for (int t : n_os_tenths) {
        if (t < 1 || f_s(t) / 2.0 >= grid_rate / 2.0) {
            throw std::invalid_argument("n_os tenths out of range: " + std::to_string(t));
        }
    }
    for (int b : n_bits_list) {
        WskConfig::make(1.0, b, s_max);
    }
    for (int n : n_levels_list) {
        SodConfig::with_levels(n, s_max);
    }
    for (double t : target_nmse_list) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("target NMSE values must be positive");
        }
    }
    if (!(grid_rate > 0.0) || std::floor(grid_rate) != grid_rate) {
        throw std::invalid_argument("grid_rate must be a positive integer rate");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be at least 1");
    }
}

std::string_view to_string(System system) { return system == System::Ebc ? "EBC" : "WSK"; }

System system_from_string(std::string_view text) {
    if (text == "EBC") {
        return System::Ebc;
    }
    if (text == "WSK") {
        return System::Wsk;
    }
    throw std::invalid_argument("unknown system tag '" + std::string(text) + "'");
}

std::string_view to_string(RowStatus status) {
    switch (status) {
    case RowStatus::Ok:
        return "ok";
    case RowStatus::WskUnattainable:
        return "wsk_unattainable";
    case RowStatus::EbcUnattainable:
        return "ebc_unattainable";
    }
    return "unknown";
}

namespace {

// Everything measured on one realization.
struct ItemResult {
    std::vector<double> ebc_nmse;
    std::vector<double> ebc_rate;
    std::vector<std::optional<double>> ebc_min_gap;
    std::vector<double> wsk_nmse; // [n_os index * n_bits count + bits index]
    double power = 0.0;
    double bernstein = 0.0;
    double min_gap_over_t_lb = std::numeric_limits<double>::infinity();
    std::size_t t_lb_violations = 0;
    int draws = 0;
};

ItemResult run_item(const SweepConfig& cfg, std::size_t w_index, std::size_t m, double check_rate) {
    const double w_mean = cfg.w_mean_list[w_index];
    const auto profile = BandwidthProfile::with_mean(w_mean);
    const std::uint64_t seed = substream_seed(cfg.master_seed, std::bit_cast<std::uint64_t>(w_mean), m);

    SynthesisOptions opts;
    opts.s_max = cfg.s_max;
    opts.check_rate = check_rate;
    Realization real = [&] {
        try {
            return synthesize_realization(profile, seed, opts);
        } catch (const std::exception& e) {
            throw std::runtime_error("synthesis failed for w_mean=" + format_sig(w_mean) + " realization " +
                                     std::to_string(m) + ": " + e.what());
        }
    }();

    ItemResult out;
    out.draws = real.signal.draws();
    const auto n = static_cast<std::size_t>(std::llround(cfg.grid_rate * profile.duration));
    const auto stride = static_cast<std::size_t>(std::llround(check_rate / cfg.grid_rate));
    std::vector<double> reference(n);
    for (std::size_t k = 0; k < n; ++k) {
        reference[k] = real.check_trace.values[k * stride];
    }
    double energy = 0.0;
    for (double v : reference) {
        energy += v * v;
    }
    out.power = energy / static_cast<double>(n);
    out.bernstein = bernstein_ratio(real.check_trace, profile, cfg.s_max);

    auto score = [&](std::span<const double> estimate) {
        const auto e = nmse(reference, estimate, cfg.nmse_form);
        if (!e) {
            throw std::runtime_error("zero-energy reference signal for w_mean=" + format_sig(w_mean));
        }
        return *e;
    };

    for (int levels : cfg.n_levels_list) {
        const auto sod = SodConfig::with_levels(levels, cfg.s_max);
        const EventStream stream = sod_encode(real.check_trace.values, check_rate, sod);
        const auto samples = events_to_samples(stream, sod);
        const auto rec = reconstruct_ebc(samples, cfg.grid_rate, profile.duration);
        out.ebc_nmse.push_back(score(rec.values));
        out.ebc_rate.push_back(event_rate(stream));
        const auto gap = min_gap(stream);
        out.ebc_min_gap.push_back(gap);
        if (gap) {
            const double ratio = *gap / t_lb(sod, cfg.s_max, cfg.w_max);
            out.min_gap_over_t_lb = std::min(out.min_gap_over_t_lb, ratio);
            if (ratio < 1.0 - 1e-6) {
                ++out.t_lb_violations;
            }
        }
    }

    out.wsk_nmse.reserve(cfg.wsk_grid_size());
    for (int tenths : cfg.n_os_tenths) {
        const double f_s = cfg.f_s(tenths);
        const DenseTrace trace = eval_trace(real.signal, wsk_trace_rate(f_s, cfg.grid_rate));
        const auto analog = wsk_analog_samples(trace, f_s);
        std::vector<double> v(analog.size());
        for (int bits : cfg.n_bits_list) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                v[i] = dequantize(quantize(analog[i], bits, cfg.s_max), bits, cfg.s_max);
            }
            const auto est = bandlimited_interpolate(v, f_s, cfg.grid_rate, n);
            out.wsk_nmse.push_back(score(est));
        }
    }
    return out;
}

} // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    double min_delta = std::numeric_limits<double>::infinity();
    for (int levels : cfg.n_levels_list) {
        min_delta = std::min(min_delta, SodConfig::with_levels(levels, cfg.s_max).delta_l());
    }
    const double check_rate = detection_rate(min_delta, cfg.s_max, cfg.w_max, cfg.grid_rate);

    const std::size_t n_w = cfg.w_mean_list.size();
    const auto n_m = static_cast<std::size_t>(cfg.m_realizations);
    std::vector<ItemResult> items(n_w * n_m);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) {
                return;
            }
            try {
                items[i] = run_item(cfg, i / n_m, i % n_m, check_rate);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(items.size());
                return;
            }
        }
    };
    const auto n_threads = static_cast<std::size_t>(std::min<std::size_t>(cfg.workers, items.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    SweepResult result;
    auto& diag = result.diagnostics;
    diag.min_gap_over_t_lb = std::numeric_limits<double>::infinity();
    const double m_count = static_cast<double>(n_m);
    for (std::size_t w = 0; w < n_w; ++w) {
        const double w_mean = cfg.w_mean_list[w];
        double power = 0.0;
        for (std::size_t m = 0; m < n_m; ++m) {
            const auto& it = items[w * n_m + m];
            power += it.power;
            ++diag.signals;
            diag.encodes += it.ebc_nmse.size();
            diag.t_lb_violations += it.t_lb_violations;
            diag.min_gap_over_t_lb = std::min(diag.min_gap_over_t_lb, it.min_gap_over_t_lb);
            diag.max_bernstein_ratio = std::max(diag.max_bernstein_ratio, it.bernstein);
            if (it.bernstein > 1.0 + 1e-3) {
                ++diag.bernstein_violations;
            }
            diag.total_draws += static_cast<std::size_t>(it.draws);
        }
        diag.mean_power.push_back(power / m_count);

        // WSK records grouped by bit depth, ascending rate within each group.
        const std::size_t n_bits_count = cfg.n_bits_list.size();
        for (std::size_t b = 0; b < n_bits_count; ++b) {
            for (std::size_t o = 0; o < cfg.n_os_tenths.size(); ++o) {
                const std::size_t idx = o * n_bits_count + b;
                double acc = 0.0;
                for (std::size_t m = 0; m < n_m; ++m) {
                    acc += items[w * n_m + m].wsk_nmse[idx];
                }
                SweepRecord rec;
                rec.system = System::Wsk;
                rec.w_mean = w_mean;
                rec.n_bits = cfg.n_bits_list[b];
                rec.f_s = cfg.f_s(cfg.n_os_tenths[o]);
                rec.nmse = acc / m_count;
                rec.rate = rec.n_bits * rec.f_s;
                result.records.push_back(rec);
            }
        }
        for (std::size_t l = 0; l < cfg.n_levels_list.size(); ++l) {
            double e = 0.0;
            double r = 0.0;
            double gap = 0.0;
            std::size_t gaps = 0;
            for (std::size_t m = 0; m < n_m; ++m) {
                const auto& it = items[w * n_m + m];
                e += it.ebc_nmse[l];
                r += it.ebc_rate[l];
                if (it.ebc_min_gap[l]) {
                    gap += *it.ebc_min_gap[l];
                    ++gaps;
                }
            }
            SweepRecord rec;
            rec.system = System::Ebc;
            rec.w_mean = w_mean;
            rec.n_levels = cfg.n_levels_list[l];
            rec.delta_l = SodConfig::with_levels(rec.n_levels, cfg.s_max).delta_l();
            rec.nmse = e / m_count;
            rec.rate = r / m_count;
            if (gaps > 0) {
                rec.t_min_mean = gap / static_cast<double>(gaps);
            }
            result.records.push_back(rec);
        }
    }
    return result;
}

namespace {

// Interpolates y at x between (x0, y0) and (x1, y1) in log-log space when all
// quantities are positive, linearly otherwise.
double interp(double x, double x0, double x1, double y0, double y1) {
    if (x0 == x1) {
        return y0;
    }
    if (x > 0 && x0 > 0 && x1 > 0 && y0 > 0 && y1 > 0) {
        const double f = (std::log(x) - std::log(x0)) / (std::log(x1) - std::log(x0));
        return std::exp(std::log(y0) + f * (std::log(y1) - std::log(y0)));
    }
    const double f = (x - x0) / (x1 - x0);
    return y0 + f * (y1 - y0);
}

std::vector<SweepRecord> select(const std::vector<SweepRecord>& records, System system, double w_mean) {
    std::vector<SweepRecord> out;
    for (const auto& r : records) {
        if (r.system == system && r.w_mean == w_mean) {
            out.push_back(r);
        }
    }
    return out;
}

} // namespace

std::optional<WskChoice> wsk_best_at(const std::vector<SweepRecord>& records, double w_mean, double target_nmse) {
    auto wsk = select(records, System::Wsk, w_mean);
    std::stable_sort(wsk.begin(), wsk.end(), [](const SweepRecord& a, const SweepRecord& b) {
        return a.n_bits != b.n_bits ? a.n_bits < b.n_bits : a.rate < b.rate;
    });
    std::optional<WskChoice> best;
    std::size_t begin = 0;
    while (begin < wsk.size()) {
        std::size_t end = begin;
        while (end < wsk.size() && wsk[end].n_bits == wsk[begin].n_bits) {
            ++end;
        }
        for (std::size_t i = begin; i < end; ++i) {
            if (wsk[i].nmse > target_nmse) {
                continue;
            }
            WskChoice c;
            c.n_bits = wsk[i].n_bits;
            if (i == begin || wsk[i].nmse == target_nmse) {
                c.r_symbol = wsk[i].rate;
            } else {
                const auto& lo = wsk[i - 1];
                c.r_symbol = interp(target_nmse, lo.nmse, wsk[i].nmse, lo.rate, wsk[i].rate);
                c.interpolated = true;
            }
            c.f_s = c.r_symbol / c.n_bits;
            if (!best || c.r_symbol < best->r_symbol) {
                best = c;
            }
            break;
        }
        begin = end;
    }
    return best;
}

std::optional<EbcPoint> ebc_at(const std::vector<SweepRecord>& records, double w_mean, double target_nmse) {
    auto ebc = select(records, System::Ebc, w_mean);
    std::stable_sort(ebc.begin(), ebc.end(),
                     [](const SweepRecord& a, const SweepRecord& b) { return a.n_levels < b.n_levels; });
    if (ebc.empty()) {
        return std::nullopt;
    }
    auto knot = [](const SweepRecord& r) { return EbcPoint{r.rate, r.t_min_mean, r.delta_l}; };
    for (std::size_t i = 0; i < ebc.size(); ++i) {
        if (ebc[i].nmse > target_nmse) {
            continue;
        }
        if (ebc[i].nmse == target_nmse) {
            return knot(ebc[i]);
        }
        if (i == 0) {
            return std::nullopt; // coarser than the coarsest level grid
        }
        const auto& a = ebc[i - 1];
        const auto& b = ebc[i];
        EbcPoint p;
        p.r_event = interp(target_nmse, a.nmse, b.nmse, a.rate, b.rate);
        p.delta_l = interp(target_nmse, a.nmse, b.nmse, a.delta_l, b.delta_l);
        if (a.t_min_mean && b.t_min_mean) {
            p.t_min = interp(target_nmse, a.nmse, b.nmse, *a.t_min_mean, *b.t_min_mean);
        }
        return p;
    }
    return std::nullopt;
}

std::vector<ComparisonRow> build_comparison(const std::vector<SweepRecord>& records, const SweepConfig& config) {
    std::vector<ComparisonRow> rows;
    for (double w : config.w_mean_list) {
        for (double target : config.target_nmse_list) {
            ComparisonRow row;
            row.w_mean = w;
            row.target_nmse = target;
            const auto wsk = wsk_best_at(records, w, target);
            const auto ebc = ebc_at(records, w, target);
            if (!wsk) {
                row.status = RowStatus::WskUnattainable;
            } else if (!ebc) {
                row.status = RowStatus::EbcUnattainable;
            }
            row.has_wsk = wsk.has_value();
            row.has_ebc = ebc.has_value();
            if (wsk) {
                row.n_bits = wsk->n_bits;
                row.f_s = wsk->f_s;
                row.r_symbol = wsk->r_symbol;
            }
            if (ebc) {
                row.r_event = ebc->r_event;
                row.t_min = ebc->t_min;
                row.delta_l = ebc->delta_l;
            }
            if (wsk && ebc) {
                const auto fig = efficiency(ebc->r_event, ebc->t_min, ebc->delta_l, wsk->n_bits, wsk->f_s,
                                            config.s_max, config.w_max);
                row.p_rel = fig.p_rel;
                row.b_rel = fig.b_rel;
                row.b_rel_worst = fig.b_rel_worst;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace ebc
