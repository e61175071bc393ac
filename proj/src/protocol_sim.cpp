#include "rrdps/protocol_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace rrdps {

SplitMix64 round_stream(std::uint64_t seed, std::uint64_t round)
{
    SplitMix64 mix(seed);
    const std::uint64_t base = mix();
    SplitMix64 r(base ^ (round * 0xd1b54a32d192ed03ULL));
    r();
    return r;
}

double ChannelModel::expected_error_rate() const
{
    switch (kind) {
    case Kind::ideal: return 0.0;
    case Kind::phase_flip: return 2.0 * param * (1.0 - param);
    case Kind::position_dephase: return param / 2.0;
    }
    return 0.0;
}

std::string ChannelModel::name() const
{
    switch (kind) {
    case Kind::ideal: return "ideal";
    case Kind::phase_flip: return "phase_flip";
    case Kind::position_dephase: return "position_dephase";
    }
    return "?";
}

void ChannelModel::validate() const
{
    if (!(param >= 0.0 && param <= 1.0))
        throw std::invalid_argument("channel parameter must be a probability");
}

ChannelModel parse_channel(const std::string& kind, double param)
{
    ChannelModel c;
    if (kind == "ideal")
        c = ChannelModel::ideal();
    else if (kind == "phase_flip")
        c = ChannelModel::phase_flip(param);
    else if (kind == "position_dephase")
        c = ChannelModel::position_dephase(param);
    else
        throw std::invalid_argument("unknown channel kind: " + kind);
    c.validate();
    return c;
}

Emission alice_emit(int L, SplitMix64& rng)
{
    Emission em;
    em.bits.resize(L);
    for (auto& b : em.bits)
        b = static_cast<std::uint8_t>(rng() >> 63);
    em.common_phase = 2.0 * std::numbers::pi * rng.uniform();
    return em;
}

int channel_photon_count(int L, double mu, double eta, SplitMix64& rng)
{
    if (!(mu >= 0.0) || !(eta >= 0.0))
        throw std::domain_error("channel_photon_count: need mu, eta >= 0");
    const double mean = L * mu * eta;
    if (mean == 0.0)
        return 0;
    std::poisson_distribution<int> poisson(mean);
    return poisson(rng);
}

std::vector<double> single_photon_state(std::span<const std::uint8_t> bits, const ChannelModel& channel,
                                        SplitMix64& rng)
{
    const std::size_t L = bits.size();
    std::vector<double> psi(L, 0.0);
    if (channel.kind == ChannelModel::Kind::position_dephase && rng.uniform() < channel.param) {
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(rng.uniform() * L), L - 1);
        psi[k] = 1.0;
        return psi;
    }
    const double amp = 1.0 / std::sqrt(static_cast<double>(L));
    for (std::size_t k = 0; k < L; ++k) {
        bool flip = bits[k] != 0;
        if (channel.kind == ChannelModel::Kind::phase_flip && rng.uniform() < channel.param)
            flip = !flip;
        psi[k] = flip ? -amp : amp;
    }
    return psi;
}

std::size_t outcome_index(int L, const Outcome& o)
{
    std::size_t pair = 0;
    for (int i = 0; i < o.k; ++i)
        pair += static_cast<std::size_t>(L - 1 - i);
    pair += static_cast<std::size_t>(o.l - o.k - 1);
    return 2 * pair + static_cast<std::size_t>(o.s_b);
}

std::vector<double> outcome_probabilities(std::span<const double> psi)
{
    const int L = static_cast<int>(psi.size());
    if (L < 2)
        throw std::domain_error("state needs at least two pulses");
    double norm = 0.0;
    for (double a : psi)
        norm += a * a;
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::domain_error("state is not normalized");

    // |<(|k> + (-1)^s |l>)/sqrt 2 | psi>|^2 / (L-1)
    std::vector<double> probs;
    probs.reserve(static_cast<std::size_t>(L) * (L - 1));
    const double w = 1.0 / (2.0 * (L - 1));
    for (int k = 0; k < L; ++k)
        for (int l = k + 1; l < L; ++l) {
            const double plus = psi[k] + psi[l];
            const double minus = psi[k] - psi[l];
            probs.push_back(w * plus * plus);
            probs.push_back(w * minus * minus);
        }
    return probs;
}

Outcome bob_measure_conditioned(std::span<const double> psi, SplitMix64& rng)
{
    const int L = static_cast<int>(psi.size());
    const std::vector<double> probs = outcome_probabilities(psi);
    const double u = rng.uniform();
    double acc = 0.0;
    // Rounding can leave u just above the final sum; default to the last nonzero outcome.
    std::size_t chosen = probs.size() - 1;
    while (chosen > 0 && probs[chosen] == 0.0)
        --chosen;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            chosen = i;
            break;
        }
    }

    Outcome o;
    std::size_t pair = chosen / 2;
    o.s_b = static_cast<int>(chosen % 2);
    for (int k = 0; k < L; ++k) {
        const std::size_t row = static_cast<std::size_t>(L - 1 - k);
        if (pair < row) {
            o.k = k;
            o.l = k + 1 + static_cast<int>(pair);
            break;
        }
        pair -= row;
    }
    return o;
}

std::optional<Outcome> bob_measure(std::span<const double> psi, SplitMix64& rng)
{
    if (rng.uniform() < 0.5) {
        // Validate the input even on the failure branch.
        outcome_probabilities(psi);
        return std::nullopt;
    }
    return bob_measure_conditioned(psi, rng);
}

void SimConfig::validate() const
{
    if (L < 3)
        throw std::invalid_argument("L must be >= 3");
    if (!(mu >= 0.0) || !(eta >= 0.0 && eta <= 1.0))
        throw std::invalid_argument("need mu >= 0 and eta in [0, 1]");
    if (rounds < 1)
        throw std::invalid_argument("rounds must be >= 1");
    if (!(sample_fraction > 0.0 && sample_fraction < 1.0))
        throw std::invalid_argument("sample_fraction must lie in (0, 1)");
    channel.validate();
}

SimStats run_rounds(const SimConfig& cfg)
{
    cfg.validate();
    SimStats s;
    s.seed_used = cfg.seed;
    s.emitted = cfg.rounds;
    for (std::uint64_t r = 0; r < cfg.rounds; ++r) {
        SplitMix64 rng = round_stream(cfg.seed, r);
        const Emission em = alice_emit(cfg.L, rng);
        if (channel_photon_count(cfg.L, cfg.mu, cfg.eta, rng) != 1)
            continue;
        const std::vector<double> psi = single_photon_state(em.bits, cfg.channel, rng);
        const std::optional<Outcome> out = bob_measure(psi, rng);
        if (!out)
            continue;
        ++s.detected;
        const std::uint8_t alice = em.bits[out->k] ^ em.bits[out->l];
        const auto bob = static_cast<std::uint8_t>(out->s_b);
        if (rng.uniform() < cfg.sample_fraction) {
            ++s.sampled;
            if (alice != bob)
                ++s.errors_in_sample;
        } else {
            s.sifted_bits_alice.push_back(alice);
            s.sifted_bits_bob.push_back(bob);
        }
    }
    s.q_emp = static_cast<double>(s.detected) / static_cast<double>(s.emitted);
    s.e_emp = s.sampled > 0 ? static_cast<double>(s.errors_in_sample) / static_cast<double>(s.sampled) : 0.0;
    return s;
}

double strict_detection_rate(int L, double mu, double eta)
{
    const double x = L * mu * eta;
    return 0.5 * x * std::exp(-x);
}

RatePoint estimate_rate_from_sim(const SimStats& stats, const ProtocolParams& p, bool monitored)
{
    if (stats.sampled == 0)
        throw DegenerateInput("no sampled rounds to estimate the bit error rate");
    // Rates above 1/2 carry no key; clamp so the EC term stays defined.
    return assemble_rate(p, stats.q_emp, std::min(stats.e_emp, 0.5), monitored);
}

}  // namespace rrdps
