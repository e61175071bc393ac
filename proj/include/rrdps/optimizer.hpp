#pragma once

#include <vector>

#include "rrdps/rate_model.hpp"

namespace rrdps {

struct SweepConfig {
    int L = 6;
    double e = 0.03;
    double f_ec = 1.1;
    std::vector<double> eta_grid;
    int nu_th_min = 1;
    int nu_th_max = 0;  ///< 0 selects L-2
    double mu_lo = 1e-5;
    double mu_hi = 0.0; ///< 0 selects 10/L
    int mu_grid_points = 40;
    double refine_tol = 1e-8;  ///< bracket width in log(mu)
    bool monitored = true;

    /// Fills defaulted fields and checks the ranges; throws std::invalid_argument.
    SweepConfig resolved() const;
};

/// n log-spaced points from hi down to lo (both included).
std::vector<double> log_grid_descending(double lo, double hi, int n);

/// Best (nu_th, mu) at a single transmission.
RatePoint optimize_at(double eta, const SweepConfig& cfg);

std::vector<RatePoint> sweep(const SweepConfig& cfg);

}  // namespace rrdps
