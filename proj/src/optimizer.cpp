#include "rrdps/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "rrdps/golden.hpp"

namespace rrdps {

SweepConfig SweepConfig::resolved() const
{
    SweepConfig c = *this;
    if (c.nu_th_max == 0)
        c.nu_th_max = c.L - 2;
    if (c.mu_hi == 0.0)
        c.mu_hi = 10.0 / c.L;
    if (c.L < 3)
        throw std::invalid_argument("L must be >= 3");
    if (c.nu_th_min < 1 || c.nu_th_max > c.L - 2 || c.nu_th_min > c.nu_th_max)
        throw std::invalid_argument("nu_th range must lie within [1, L-2]");
    if (!(c.mu_lo > 0.0) || !(c.mu_hi > c.mu_lo))
        throw std::invalid_argument("mu bracket must satisfy 0 < mu_lo < mu_hi");
    if (c.mu_grid_points < 3)
        throw std::invalid_argument("mu grid needs at least 3 points");
    if (!(c.e >= 0.0 && c.e <= 0.5) || !(c.f_ec >= 1.0))
        throw std::invalid_argument("need 0 <= e <= 0.5 and f_ec >= 1");
    if (!(c.refine_tol > 0.0))
        throw std::invalid_argument("refine_tol must be > 0");
    for (std::size_t i = 0; i < c.eta_grid.size(); ++i) {
        if (!(c.eta_grid[i] > 0.0 && c.eta_grid[i] <= 1.0))
            throw std::invalid_argument("eta values must lie in (0, 1]");
        if (i >= 2 && (c.eta_grid[i] - c.eta_grid[i - 1]) * (c.eta_grid[i - 1] - c.eta_grid[i - 2]) <= 0.0)
            throw std::invalid_argument("eta grid must be strictly monotone");
    }
    if (c.eta_grid.size() == 2 && c.eta_grid[0] == c.eta_grid[1])
        throw std::invalid_argument("eta grid must be strictly monotone");
    return c;
}

std::vector<double> log_grid_descending(double lo, double hi, int n)
{
    if (!(lo > 0.0) || !(hi >= lo) || n < 1)
        throw std::invalid_argument("log grid needs 0 < lo <= hi and n >= 1");
    if (n == 1)
        return {hi};
    std::vector<double> g(n);
    const double a = std::log(hi);
    const double step = (std::log(lo) - a) / (n - 1);
    for (int i = 0; i < n; ++i)
        g[i] = std::exp(a + step * i);
    g.front() = hi;
    g.back() = lo;
    return g;
}

RatePoint optimize_at(double eta, const SweepConfig& cfg_in)
{
    const SweepConfig cfg = cfg_in.resolved();
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in (0, 1]");

    ProtocolParams p;
    p.L = cfg.L;
    p.eta = eta;
    p.e = cfg.e;
    p.f_ec = cfg.f_ec;

    auto eval = [&](int nu_th, double log_mu) {
        ProtocolParams q = p;
        q.nu_th = nu_th;
        q.mu = std::exp(log_mu);
        return key_rate(q, cfg.monitored);
    };

    const double log_lo = std::log(cfg.mu_lo);
    const double log_hi = std::log(cfg.mu_hi);
    const int n = cfg.mu_grid_points;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i)
        grid[i] = log_lo + (log_hi - log_lo) * i / (n - 1);

    RatePoint best;
    bool have_best = false;
    for (int nu_th = cfg.nu_th_min; nu_th <= cfg.nu_th_max; ++nu_th) {
        int best_i = 0;
        RatePoint local = eval(nu_th, grid[0]);
        for (int i = 1; i < n; ++i) {
            RatePoint r = eval(nu_th, grid[i]);
            if (r.rate_per_block > local.rate_per_block) {
                local = r;
                best_i = i;
            }
        }
        const double lo = grid[best_i == 0 ? 0 : best_i - 1];
        const double hi = grid[best_i == n - 1 ? n - 1 : best_i + 1];
        const Minimum m = golden_section_minimize(
            [&](double x) { return -eval(nu_th, x).rate_per_block; }, lo, hi, 0.0, cfg.refine_tol);
        RatePoint refined = eval(nu_th, m.x);
        if (refined.rate_per_block > local.rate_per_block)
            local = refined;

        if (!have_best || local.rate_per_block > best.rate_per_block) {
            best = local;
            have_best = true;
        }
    }
    return best;
}

std::vector<RatePoint> sweep(const SweepConfig& cfg_in)
{
    const SweepConfig cfg = cfg_in.resolved();
    std::vector<RatePoint> out;
    out.reserve(cfg.eta_grid.size());
    for (double eta : cfg.eta_grid) {
        try {
            out.push_back(optimize_at(eta, cfg));
        } catch (const std::exception&) {
            RatePoint failed;
            failed.eta = eta;
            failed.degenerate = true;
            out.push_back(failed);
        }
    }
    return out;
}

}  // namespace rrdps
