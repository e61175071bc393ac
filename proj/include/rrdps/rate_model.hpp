#pragma once

#include <stdexcept>
#include <string>

namespace rrdps {

/// Raised when an input leaves no usable detections (q = 0, all rounds tagged, ...).
class DegenerateInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProtocolParams {
    int L = 6;
    int nu_th = 1;
    double mu = 0.1;     ///< mean photon number per pulse
    double eta = 1.0;    ///< overall transmission
    double e = 0.03;     ///< observed bit error rate
    double f_ec = 1.1;   ///< error-correction inefficiency

    void validate() const;
};

struct RatePoint {
    double eta = 0.0;
    double mu = 0.0;
    int nu_th = 0;
    double q = 0.0;
    double e_src = 0.0;
    double delta_tag = 0.0;
    double e_unt = 0.0;
    double ec_cost = 0.0;
    double pa_cost = 0.0;
    double rate_per_block = 0.0;  ///< Q (1 - EC - PA), may be negative
    double rate_per_pulse = 0.0;  ///< max(0, rate_per_block) / L
    bool degenerate = false;
};

/// Q = (L mu eta / 2) exp(-L mu eta / 2).
double detection_rate(int L, double mu, double eta);

/// Probability that a coherent block carries more than nu_th photons.
double source_tail(int L, double mu, int nu_th);

/// delta_tag = min(1, e_src / (2 q)).
double tag_fraction(double e_src, double q);

/// e / (1 - delta_tag).
double untagged_error(double e, double delta_tag);

double ec_cost(double e, double f_ec);

struct PaBreakdown {
    double e_src = 0.0;
    double delta_tag = 0.0;
    double e_unt = 0.0;
    double phase_bound = 0.0;
    double cost = 0.0;
};

/// Privacy-amplification cost. With monitoring the phase-error bound is
/// F(nu_th, e_unt); without it, nu_th/(L-1).
PaBreakdown pa_breakdown(const ProtocolParams& p, double q, bool monitored);
double pa_cost(const ProtocolParams& p, double q, bool monitored);

/// Rate from an externally supplied detection rate and bit error rate
/// (p.e is ignored in favour of e).
RatePoint assemble_rate(const ProtocolParams& p, double q, double e, bool monitored);

RatePoint key_rate(const ProtocolParams& p, bool monitored);

}  // namespace rrdps
