#pragma once

#include <limits>

namespace rrdps {

/// Binary entropy h(x) in bits, with 0·log2(0) = 0.
double binary_entropy(double x);

/// Largest eigenvalue of the photon-number-restricted operator on the
/// |a| = nu-1 sector.
double omega_minus(int L, int nu, double lambda);

/// Largest eigenvalue on the |a| = nu+1 sector.
double omega_plus(int L, int nu, double lambda);

double omega(int L, int nu, double lambda);

/// Bit error rate beyond which F(nu, e) saturates at nu/(L-1).
double e_star(int L, int nu);

/// Straight-segment approximation of F(nu, e).
double segment_approx(int L, int nu, double e);

struct BoundQuery {
    int L = 0;
    int nu = 0;
    double e = 0.0;
};

enum class Branch { minus, plus, tie };

const char* to_string(Branch b);

struct BoundResult {
    double f_value = 0.0;
    /// +infinity when the infimum is only approached as lambda grows without bound.
    double lambda_opt = 0.0;
    Branch branch = Branch::tie;

    bool lambda_at_limit() const { return lambda_opt == std::numeric_limits<double>::infinity(); }
};

struct MinimizerConfig {
    double lambda_min = 1e-6;
    double lambda_max = 1e6;
    int grid_points = 200;
    double rel_tol = 1e-10;
    double tie_tol = 1e-12;
};

/// F(nu, e) = inf_{lambda >= 0} (lambda e + Omega(nu, lambda)).
///
/// The objective is scanned at lambda = 0 and on a logarithmic grid, then
/// refined by golden-section search inside the bracket around the best grid
/// point. If the objective is still decreasing at the top of the grid the
/// analytic lambda -> infinity limit (nu-1)/L is returned instead.
BoundResult phase_error_bound(const BoundQuery& q, const MinimizerConfig& cfg = {});

/// Throws std::domain_error unless L >= 3 and 1 <= nu <= L-2.
void check_block(int L, int nu);

}  // namespace rrdps
