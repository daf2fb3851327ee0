#pragma once

#include "ebc/metrics.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ebc {

/// Monte-Carlo sweep over test-signal profiles and both systems' parameter grids.
struct SweepConfig {
    std::uint64_t master_seed = 1;
    int m_realizations = 100;
    std::vector<double> w_mean_list{325.0, 475.0, 625.0, 775.0, 925.0};
    /// Oversampling factors in tenths: f_s = 2 w_max n_os = 200 * tenths Hz.
    std::vector<int> n_os_tenths{2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    std::vector<int> n_bits_list{3, 4, 5, 6, 7, 8};
    std::vector<int> n_levels_list{10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60, 65, 70, 75, 80, 85, 90, 95, 100};
    std::vector<double> target_nmse_list = log_spaced(1e-3, 1e-1, 25);
    double grid_rate = 16000.0;
    double s_max = 4.0;
    double w_max = 1000.0;
    NmseForm nmse_form = NmseForm::RatioOfSums;
    /// Worker threads; results do not depend on it.
    int workers = 1;

    static std::vector<double> log_spaced(double lo, double hi, int count);

    double f_s(int tenths) const { return 2.0 * w_max * tenths / 10.0; }
    std::size_t wsk_grid_size() const { return n_os_tenths.size() * n_bits_list.size(); }

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;
};

enum class System { Ebc, Wsk };

std::string_view to_string(System system);
System system_from_string(std::string_view text);

/// Ensemble averages for one (system, w_mean, parameter point).
struct SweepRecord {
    System system = System::Ebc;
    double w_mean = 0.0;
    int n_levels = 0;    // EBC
    double delta_l = 0.0; // EBC
    int n_bits = 0;       // WSK
    double f_s = 0.0;     // WSK
    double nmse = 0.0;
    double rate = 0.0;    // r_event or r_symbol
    std::optional<double> t_min_mean; // EBC; mean per-signal minimum event gap
};

/// Property checks gathered while sweeping.
struct SweepDiagnostics {
    std::size_t signals = 0;
    std::size_t encodes = 0;
    std::size_t t_lb_violations = 0;
    double min_gap_over_t_lb = 0.0;     // smallest min_gap / T_LB seen
    std::size_t bernstein_violations = 0;
    double max_bernstein_ratio = 0.0;   // largest slope / bound seen
    std::vector<double> mean_power;     // per w_mean, ensemble mean of (1/N) sum s^2
    std::size_t total_draws = 0;
};

struct SweepResult {
    std::vector<SweepRecord> records;
    SweepDiagnostics diagnostics;
};

/// Runs every realization through every configuration. Work items are
/// (w_mean, realization) pairs spread over config.workers threads; reduction
/// is in fixed index order, so output is independent of the worker count.
SweepResult run_sweep(const SweepConfig& config);

struct WskChoice {
    int n_bits = 0;
    double f_s = 0.0;
    double r_symbol = 0.0;
    bool interpolated = false;
};

/// Cheapest WSK operating point reaching target_nmse: per bit depth, the first
/// crossing of the NMSE curve along increasing rate, interpolated log-log
/// between the bracketing grid points; minimum over bit depths. nullopt when
/// no grid point reaches the target.
std::optional<WskChoice> wsk_best_at(const std::vector<SweepRecord>& records, double w_mean, double target_nmse);

struct EbcPoint {
    double r_event = 0.0;
    std::optional<double> t_min;
    double delta_l = 0.0;
};

/// EBC curve read at target_nmse by log-log interpolation along the level
/// sweep. nullopt when the target is outside the achieved NMSE range.
std::optional<EbcPoint> ebc_at(const std::vector<SweepRecord>& records, double w_mean, double target_nmse);

enum class RowStatus { Ok, WskUnattainable, EbcUnattainable };

std::string_view to_string(RowStatus status);

struct ComparisonRow {
    double w_mean = 0.0;
    double target_nmse = 0.0;
    RowStatus status = RowStatus::Ok;
    bool has_wsk = false;
    bool has_ebc = false;
    double p_rel = 0.0;
    std::optional<double> b_rel;
    double b_rel_worst = 0.0;
    int n_bits = 0;
    double f_s = 0.0;
    double r_symbol = 0.0;
    double r_event = 0.0;
    std::optional<double> t_min;
    double delta_l = 0.0;
};

std::vector<ComparisonRow> build_comparison(const std::vector<SweepRecord>& records, const SweepConfig& config);

} // namespace ebc
