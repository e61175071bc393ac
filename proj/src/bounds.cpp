#include "rrdps/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrdps/golden.hpp"

namespace rrdps {

void check_block(int L, int nu)
{
    if (L < 3)
        throw std::domain_error("block size L must be >= 3, got " + std::to_string(L));
    if (nu < 1 || nu > L - 2)
        throw std::domain_error("photon number nu must lie in [1, L-2], got nu=" +
                                std::to_string(nu) + " for L=" + std::to_string(L));
}

namespace {

void check_lambda(double lambda)
{
    if (!(lambda >= 0.0) || std::isnan(lambda))
        throw std::domain_error("lambda must be >= 0");
}

}  // namespace

double binary_entropy(double x)
{
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("binary_entropy argument outside [0,1]");
    double h = 0.0;
    if (x > 0.0)
        h -= x * std::log2(x);
    if (x < 1.0)
        h -= (1.0 - x) * std::log2(1.0 - x);
    return h;
}

double omega_minus(int L, int nu, double lambda)
{
    check_block(L, nu);
    check_lambda(lambda);
    const double Lm1 = L - 1.0;
    const double s = L * lambda + 2.0;
    const double x = 8.0 * (nu - 1.0) * lambda / (s * s);
    const double arg = 1.0 - x;
    if (arg < 0.0)
        throw std::domain_error("omega_minus: negative square-root argument");
    // 1 - sqrt(1 - x) rewritten as x / (1 + sqrt(1 - x)); same value, no cancellation.
    const double one_minus_root = x / (1.0 + std::sqrt(arg));
    return (nu - 1.0) / Lm1 - s / (4.0 * Lm1) * one_minus_root;
}

double omega_plus(int L, int nu, double lambda)
{
    check_block(L, nu);
    check_lambda(lambda);
    const double Lm1 = L - 1.0;
    return nu / Lm1 - lambda * (Lm1 - nu) / (2.0 * Lm1);
}

double omega(int L, int nu, double lambda)
{
    return std::max(omega_minus(L, nu, lambda), omega_plus(L, nu, lambda));
}

double e_star(int L, int nu)
{
    check_block(L, nu);
    return (L - 1.0 - nu) / (2.0 * (L - 1.0));
}

double segment_approx(int L, int nu, double e)
{
    check_block(L, nu);
    if (!(e >= 0.0))
        throw std::domain_error("bit error rate must be >= 0");
    const double lo = (nu - 1.0) / L;
    const double hi = nu / (L - 1.0);
    const double es = e_star(L, nu);
    if (e >= es)
        return hi;
    const double t = e / es;
    return lo * (1.0 - t) + hi * t;
}

const char* to_string(Branch b)
{
    switch (b) {
    case Branch::minus: return "minus";
    case Branch::plus: return "plus";
    case Branch::tie: return "tie";
    }
    return "?";
}

BoundResult phase_error_bound(const BoundQuery& q, const MinimizerConfig& cfg)
{
    check_block(q.L, q.nu);
    if (!(q.e >= 0.0) || !std::isfinite(q.e))
        throw std::domain_error("bit error rate must be finite and >= 0");
    if (cfg.grid_points < 2 || !(cfg.lambda_min > 0.0) || !(cfg.lambda_max > cfg.lambda_min))
        throw std::invalid_argument("invalid lambda grid");

    const int L = q.L;
    const int nu = q.nu;
    auto objective = [&](double lambda) {
        const double v = lambda * q.e + omega(L, nu, lambda);
        if (!std::isfinite(v))
            throw std::runtime_error("phase_error_bound: non-finite objective");
        return v;
    };

    std::vector<double> grid;
    grid.reserve(cfg.grid_points + 1);
    grid.push_back(0.0);
    const double log_lo = std::log(cfg.lambda_min);
    const double log_step = (std::log(cfg.lambda_max) - log_lo) / (cfg.grid_points - 1);
    for (int i = 0; i < cfg.grid_points; ++i)
        grid.push_back(std::exp(log_lo + log_step * i));

    std::vector<double> values(grid.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = objective(grid[i]);
        if (values[i] < values[best])
            best = i;
    }

    const double upper = nu / (L - 1.0);
    BoundResult r;
    const std::size_t last = grid.size() - 1;
    if (best == last && values[last] < values[last - 1]) {
        r.f_value = std::clamp((nu - 1.0) / L, 0.0, upper);
        r.lambda_opt = std::numeric_limits<double>::infinity();
        r.branch = Branch::minus;
        return r;
    }

    const double lo = grid[best == 0 ? 0 : best - 1];
    const double hi = grid[std::min(best + 1, last)];
    Minimum m = golden_section_minimize(objective, lo, hi, cfg.rel_tol);
    if (!(m.value < values[best]))
        m = {grid[best], values[best]};

    r.f_value = std::clamp(m.value, 0.0, upper);
    r.lambda_opt = m.x;
    const double diff = omega_minus(L, nu, m.x) - omega_plus(L, nu, m.x);
    if (std::abs(diff) <= cfg.tie_tol)
        r.branch = Branch::tie;
    else
        r.branch = diff > 0.0 ? Branch::minus : Branch::plus;
    return r;
}

}  // namespace rrdps
