#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrdps/rate_model.hpp"

namespace rrdps {

/// SplitMix64; a UniformRandomBitGenerator cheap enough to construct per round.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Independent stream for one round, fixed by (seed, round index).
SplitMix64 round_stream(std::uint64_t seed, std::uint64_t round);

struct ChannelModel {
    enum class Kind { ideal, phase_flip, position_dephase };
    Kind kind = Kind::ideal;
    double param = 0.0;

    static ChannelModel ideal() { return {}; }
    static ChannelModel phase_flip(double p) { return {Kind::phase_flip, p}; }
    static ChannelModel position_dephase(double d) { return {Kind::position_dephase, d}; }

    /// Closed-form bit error rate of the single-photon map.
    double expected_error_rate() const;
    std::string name() const;
    void validate() const;
};

ChannelModel parse_channel(const std::string& kind, double param);

struct Emission {
    std::vector<std::uint8_t> bits;  ///< s_k: 0 -> phase 0, 1 -> phase pi
    double common_phase = 0.0;       ///< drawn, never used downstream
};

Emission alice_emit(int L, SplitMix64& rng);

/// Photon count after loss: Poisson with mean L mu eta.
int channel_photon_count(int L, double mu, double eta, SplitMix64& rng);

/// Real single-photon amplitudes over the L pulses, unit norm.
std::vector<double> single_photon_state(std::span<const std::uint8_t> bits, const ChannelModel& channel,
                                        SplitMix64& rng);

struct Outcome {
    int k = 0;  ///< k < l, zero-based pulse indices
    int l = 0;
    int s_b = 0;
};

/// Outcome probabilities of the post-coin step, indexed by outcome_index().
std::vector<double> outcome_probabilities(std::span<const double> psi);
std::size_t outcome_index(int L, const Outcome& o);

/// Post-coin measurement: samples ({k,l}, s_B) given that detection succeeded.
Outcome bob_measure_conditioned(std::span<const double> psi, SplitMix64& rng);

/// Full measurement on a single-photon state: fails with probability 1/2.
std::optional<Outcome> bob_measure(std::span<const double> psi, SplitMix64& rng);

struct SimConfig {
    int L = 6;
    double mu = 0.1;
    double eta = 0.5;
    std::uint64_t rounds = 1000000;
    double sample_fraction = 0.5;
    ChannelModel channel;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SimStats {
    std::uint64_t emitted = 0;
    std::uint64_t detected = 0;
    double q_emp = 0.0;
    std::uint64_t sampled = 0;
    std::uint64_t errors_in_sample = 0;
    double e_emp = 0.0;
    std::vector<std::uint8_t> sifted_bits_alice;
    std::vector<std::uint8_t> sifted_bits_bob;
    std::uint64_t seed_used = 0;
};

SimStats run_rounds(const SimConfig& cfg);

/// Detection probability of the simulator: P(one photon) / 2.
double strict_detection_rate(int L, double mu, double eta);

/// Key rate with q and e taken from the simulation, the rest from p.
RatePoint estimate_rate_from_sim(const SimStats& stats, const ProtocolParams& p, bool monitored);

}  // namespace rrdps
