#include "ebc/metrics.hpp"

#include <numbers>
#include <stdexcept>

namespace ebc {

std::optional<double> nmse(std::span<const double> reference, std::span<const double> estimate, NmseForm form) {
    if (reference.size() != estimate.size()) {
        throw std::invalid_argument("nmse: reference and estimate lengths differ");
    }
    if (form == NmseForm::RatioOfSums) {
        double err = 0.0;
        double energy = 0.0;
        for (std::size_t i = 0; i < reference.size(); ++i) {
            const double d = reference[i] - estimate[i];
            err += d * d;
            energy += reference[i] * reference[i];
        }
        if (energy == 0.0) {
            return std::nullopt;
        }
        return err / energy;
    }
    double acc = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double p = reference[i] * reference[i];
        if (p == 0.0) {
            continue;
        }
        const double d = reference[i] - estimate[i];
        acc += d * d / p;
        ++used;
    }
    if (used == 0) {
        return std::nullopt;
    }
    return acc / static_cast<double>(used);
}

double p_rel(double r_event, double n_bits, double f_s) {
    const double r_symbol = n_bits * f_s;
    if (!(r_symbol > 0.0)) {
        throw std::invalid_argument("p_rel: symbol rate must be positive");
    }
    return r_event / r_symbol;
}

std::optional<double> b_rel(std::optional<double> t_min, double n_bits, double f_s) {
    if (!t_min || !(*t_min > 0.0)) {
        return std::nullopt;
    }
    return 1.0 / (*t_min * n_bits * f_s);
}

double b_rel_worst(double delta_l, double n_bits, double f_s, double s_max, double w_max) {
    return 2.0 * std::numbers::pi * s_max * w_max / (delta_l * n_bits * f_s);
}

EfficiencyFigures efficiency(double r_event, std::optional<double> t_min, double delta_l, double n_bits, double f_s,
                             double s_max, double w_max) {
    EfficiencyFigures fig;
    fig.r_event = r_event;
    fig.r_symbol = n_bits * f_s;
    fig.t_min = t_min;
    fig.p_rel = p_rel(r_event, n_bits, f_s);
    fig.b_rel = b_rel(t_min, n_bits, f_s);
    fig.b_rel_worst = b_rel_worst(delta_l, n_bits, f_s, s_max, w_max);
    return fig;
}

} // namespace ebc
