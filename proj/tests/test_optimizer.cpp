#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "rrdps/optimizer.hpp"

using namespace rrdps;

namespace {

// Brute 2-D scan over nu_th and a fine log-mu grid.
double scan_best(int L, double eta, double e, bool monitored)
{
    double best = -1e300;
    for (int nu = 1; nu <= L - 2; ++nu)
        for (int i = 0; i <= 2000; ++i) {
            ProtocolParams p;
            p.L = L;
            p.nu_th = nu;
            p.eta = eta;
            p.e = e;
            p.mu = std::exp(std::log(1e-5) + (std::log(10.0 / L) - std::log(1e-5)) * i / 2000.0);
            best = std::max(best, key_rate(p, monitored).rate_per_block);
        }
    return best;
}

SweepConfig standard_config(int L, bool monitored)
{
    SweepConfig c;
    c.L = L;
    c.e = 0.03;
    c.f_ec = 1.1;
    c.monitored = monitored;
    return c;
}

}  // namespace

TEST_CASE("log grid")
{
    const auto g = log_grid_descending(1e-3, 1.0, 4);
    REQUIRE(g.size() == 4);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(g[3] == 1e-3);
    CHECK(log_grid_descending(0.5, 0.5, 1) == std::vector<double>{0.5});
    CHECK_THROWS_AS(log_grid_descending(0.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(log_grid_descending(1.0, 0.1, 3), std::invalid_argument);
}

TEST_CASE("config resolution")
{
    const SweepConfig c = standard_config(6, true).resolved();
    CHECK(c.nu_th_max == 4);
    CHECK(c.mu_hi == doctest::Approx(10.0 / 6.0));

    SweepConfig bad = standard_config(6, true);
    bad.nu_th_max = 5;
    CHECK_THROWS_AS(bad.resolved(), std::invalid_argument);
    bad = standard_config(6, true);
    bad.mu_lo = 2.0;
    bad.mu_hi = 1.0;
    CHECK_THROWS_AS(bad.resolved(), std::invalid_argument);
    bad = standard_config(6, true);
    bad.eta_grid = {0.5, 0.5};
    CHECK_THROWS_AS(bad.resolved(), std::invalid_argument);
    CHECK_THROWS_AS(optimize_at(0.0, standard_config(6, true)), std::invalid_argument);
}

TEST_CASE("high error leaves no key")
{
    SweepConfig c = standard_config(6, true);
    c.e = 0.4;
    const RatePoint r = optimize_at(1.0, c);
    CHECK(r.rate_per_pulse == 0.0);
    CHECK(r.rate_per_block <= 0.0);
}

TEST_CASE("optimum matches a fine 2-D scan")
{
    for (bool monitored : {true, false})
        for (double eta : {1.0, 0.1}) {
            const RatePoint r = optimize_at(eta, standard_config(6, monitored));
            const double scan = scan_best(6, eta, 0.03, monitored);
            CAPTURE(monitored);
            CAPTURE(eta);
            CHECK(r.rate_per_block >= scan - 1e-9 * std::abs(scan));
            CHECK(r.rate_per_block <= scan * (1.0 + 1e-4));
            CHECK(r.nu_th >= 1);
            CHECK(r.nu_th <= 4);
            CHECK(r.mu >= 1e-5);
            CHECK(r.mu <= 10.0 / 6.0);
        }
}

TEST_CASE("monitoring beats the unmonitored optimum")
{
    const RatePoint mon = optimize_at(1.0, standard_config(6, true));
    const RatePoint unmon = optimize_at(1.0, standard_config(6, false));
    CHECK(mon.rate_per_pulse > unmon.rate_per_pulse);
    CHECK(unmon.rate_per_pulse > 0.0);
}

TEST_CASE("sweep")
{
    SweepConfig c = standard_config(6, true);
    c.eta_grid = {0.5};
    const auto one = sweep(c);
    REQUIRE(one.size() == 1);
    CHECK(one[0].eta == 0.5);

    c.eta_grid = {0.5, 0.25};
    const auto two = sweep(c);
    REQUIRE(two.size() == 2);
    CHECK(two[0].rate_per_pulse >= two[1].rate_per_pulse);

    const auto again = sweep(c);
    for (std::size_t i = 0; i < two.size(); ++i) {
        CHECK(two[i].rate_per_block == again[i].rate_per_block);
        CHECK(two[i].mu == again[i].mu);
        CHECK(two[i].nu_th == again[i].nu_th);
    }

    c.eta_grid = {};
    CHECK(sweep(c).empty());
}
