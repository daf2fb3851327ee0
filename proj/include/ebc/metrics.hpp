#pragma once

#include <optional>
#include <span>

namespace ebc {

enum class NmseForm {
    RatioOfSums, ///< sum |s - s_hat|^2 / sum |s|^2
    Pointwise,   ///< mean of |s - s_hat|^2 / |s|^2 over points with s != 0
};

/// Per-signal normalized squared error. nullopt when the reference has no
/// energy (or, for the pointwise form, no nonzero point).
std::optional<double> nmse(std::span<const double> reference, std::span<const double> estimate,
                           NmseForm form = NmseForm::RatioOfSums);

/// r_event / (n_bits f_s).
double p_rel(double r_event, double n_bits, double f_s);

/// 1 / (t_min n_bits f_s); nullopt when t_min is not a positive number.
std::optional<double> b_rel(std::optional<double> t_min, double n_bits, double f_s);

/// 2 pi s_max w_max / (delta_l n_bits f_s), i.e. b_rel at t_min = T_LB.
double b_rel_worst(double delta_l, double n_bits, double f_s, double s_max, double w_max);

struct EfficiencyFigures {
    double p_rel = 0.0;
    std::optional<double> b_rel;
    double b_rel_worst = 0.0;
    std::optional<double> t_min;
    double r_event = 0.0;
    double r_symbol = 0.0;
};

EfficiencyFigures efficiency(double r_event, std::optional<double> t_min, double delta_l, double n_bits, double f_s,
                             double s_max = 4.0, double w_max = 1000.0);

} // namespace ebc
