#include "rrdps/rate_model.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "rrdps/bounds.hpp"

namespace rrdps {

void ProtocolParams::validate() const
{
    if (L < 3)
        throw std::invalid_argument("L must be >= 3");
    if (nu_th < 1 || nu_th > L - 2)
        throw std::invalid_argument("nu_th must lie in [1, L-2]");
    if (!(mu > 0.0) || !std::isfinite(mu))
        throw std::invalid_argument("mu must be > 0");
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("eta must lie in (0, 1]");
    if (!(e >= 0.0 && e <= 0.5))
        throw std::invalid_argument("e must lie in [0, 0.5]");
    if (!(f_ec >= 1.0))
        throw std::invalid_argument("f_ec must be >= 1");
}

double detection_rate(int L, double mu, double eta)
{
    if (!(mu >= 0.0) || !(eta >= 0.0 && eta <= 1.0))
        throw std::domain_error("detection_rate: need mu >= 0 and eta in [0, 1]");
    const double x = L * mu * eta / 2.0;
    return x * std::exp(-x);
}

double source_tail(int L, double mu, int nu_th)
{
    if (!(mu >= 0.0) || nu_th < 0)
        throw std::domain_error("source_tail: need mu >= 0 and nu_th >= 0");
    const double x = L * mu;
    if (x == 0.0)
        return 0.0;
    // P(N > nu_th) for N ~ Poisson(x) is the regularized lower incomplete gamma P(nu_th + 1, x).
    return boost::math::gamma_p(nu_th + 1.0, x);
}

double tag_fraction(double e_src, double q)
{
    if (!(q > 0.0))
        throw DegenerateInput("tag_fraction: no detections (q = 0)");
    return std::min(1.0, e_src / (2.0 * q));
}

double untagged_error(double e, double delta_tag)
{
    if (!(delta_tag >= 0.0) || delta_tag > 1.0)
        throw std::domain_error("untagged_error: delta_tag outside [0, 1]");
    if (delta_tag == 1.0)
        throw DegenerateInput("untagged_error: every detected round is tagged");
    return e / (1.0 - delta_tag);
}

double ec_cost(double e, double f_ec)
{
    if (!(e >= 0.0 && e <= 0.5) || !(f_ec >= 1.0))
        throw std::domain_error("ec_cost: need 0 <= e <= 0.5 and f_ec >= 1");
    return f_ec * binary_entropy(e);
}

PaBreakdown pa_breakdown(const ProtocolParams& p, double q, bool monitored)
{
    PaBreakdown b;
    b.e_src = source_tail(p.L, p.mu, p.nu_th);
    b.delta_tag = tag_fraction(b.e_src, q);
    if (b.delta_tag >= 1.0) {
        // Everything tagged: report the phase-error side at saturation.
        b.e_unt = 1.0;
        b.phase_bound = 0.5;
        b.cost = 1.0;
        return b;
    }
    b.e_unt = untagged_error(p.e, b.delta_tag);
    b.phase_bound = monitored ? phase_error_bound({p.L, p.nu_th, b.e_unt}).f_value
                              : p.nu_th / (p.L - 1.0);
    b.cost = b.delta_tag + (1.0 - b.delta_tag) * binary_entropy(std::min(b.phase_bound, 0.5));
    return b;
}

double pa_cost(const ProtocolParams& p, double q, bool monitored)
{
    return pa_breakdown(p, q, monitored).cost;
}

RatePoint assemble_rate(const ProtocolParams& p, double q, double e, bool monitored)
{
    RatePoint r;
    r.eta = p.eta;
    r.mu = p.mu;
    r.nu_th = p.nu_th;
    r.q = q;
    r.e_src = source_tail(p.L, p.mu, p.nu_th);
    r.ec_cost = ec_cost(e, p.f_ec);
    ProtocolParams pe = p;
    pe.e = e;
    try {
        const PaBreakdown b = pa_breakdown(pe, q, monitored);
        r.delta_tag = b.delta_tag;
        r.e_unt = b.e_unt;
        r.pa_cost = b.cost;
    } catch (const DegenerateInput&) {
        r.delta_tag = 1.0;
        r.e_unt = 1.0;
        r.pa_cost = 1.0;
        r.degenerate = true;
        return r;
    }
    r.rate_per_block = q * (1.0 - r.ec_cost - r.pa_cost);
    r.rate_per_pulse = std::max(0.0, r.rate_per_block) / p.L;
    return r;
}

RatePoint key_rate(const ProtocolParams& p, bool monitored)
{
    p.validate();
    return assemble_rate(p, detection_rate(p.L, p.mu, p.eta), p.e, monitored);
}

}  // namespace rrdps
