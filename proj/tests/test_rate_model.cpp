#include <doctest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "rrdps/bounds.hpp"
#include "rrdps/rate_model.hpp"

using namespace rrdps;

namespace {

// Direct Poisson tail: 1 - sum_{n <= nu_th} x^n e^-x / n!.
double poisson_tail_sum(double x, int nu_th)
{
    double term = std::exp(-x);
    double head = term;
    for (int n = 1; n <= nu_th; ++n) {
        term *= x / n;
        head += term;
    }
    return 1.0 - head;
}

}  // namespace

TEST_CASE("detection rate")
{
    CHECK(detection_rate(6, 0.0, 1.0) == 0.0);
    CHECK(detection_rate(6, 1.0 / 3.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(detection_rate(6, 0.1, 0.5) == doctest::Approx(0.12910619646375867).epsilon(1e-14));
    CHECK_THROWS_AS(detection_rate(6, -0.1, 0.5), std::domain_error);
    CHECK_THROWS_AS(detection_rate(6, 0.1, 1.5), std::domain_error);

    // Peak at L mu eta / 2 = 1.
    const double peak = detection_rate(6, 1.0 / 3.0, 1.0);
    for (int i = 1; i <= 200; ++i) {
        const double mu = i / 100.0;
        CHECK(detection_rate(6, mu, 1.0) <= peak + 1e-16);
    }
    CHECK(detection_rate(6, 0.1, 1e-12) < 1e-11);
}

TEST_CASE("source tail")
{
    CHECK(source_tail(6, 0.1, 0) == doctest::Approx(0.45118836390597357).epsilon(1e-14));
    CHECK(source_tail(6, 0.1, 2) == doctest::Approx(0.02311528775263295).epsilon(1e-13));
    CHECK(source_tail(6, 0.0, 1) == 0.0);
    CHECK(source_tail(6, 0.1, 50) <= 1e-15);
    CHECK_THROWS_AS(source_tail(6, 0.1, -1), std::domain_error);

    for (int L : {6, 64})
        for (double mu : {1e-4, 0.01, 0.1, 0.5})
            for (int nu = 0; nu <= 10; ++nu) {
                const double x = L * mu;
                const double direct = poisson_tail_sum(x, nu);
                const double got = source_tail(L, mu, nu);
                CAPTURE(x);
                CAPTURE(nu);
                // The direct sum cancels badly for tiny tails; compare absolutely there.
                CHECK(std::abs(got - direct) <= 1e-12 + 1e-10 * got);
                if (nu > 0)
                    CHECK(got <= source_tail(L, mu, nu - 1));
            }
}

TEST_CASE("tag fraction and untagged error")
{
    CHECK(tag_fraction(0.0, 0.1) == 0.0);
    CHECK(tag_fraction(0.02, 0.1) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(tag_fraction(1.0, 0.1) == 1.0);
    CHECK_THROWS_AS(tag_fraction(0.1, 0.0), DegenerateInput);

    CHECK(untagged_error(0.03, 0.0) == 0.03);
    CHECK(untagged_error(0.03, 0.1) == doctest::Approx(1.0 / 30.0).epsilon(1e-15));
    CHECK(untagged_error(0.0, 0.7) == 0.0);
    CHECK_THROWS_AS(untagged_error(0.03, 1.0), DegenerateInput);
    CHECK_THROWS_AS(untagged_error(0.03, 1.5), std::domain_error);
}

TEST_CASE("error-correction cost")
{
    CHECK(ec_cost(0.0, 1.1) == 0.0);
    CHECK(ec_cost(0.03, 1.1) == doctest::Approx(0.21383104361473378).epsilon(1e-14));
    CHECK(ec_cost(0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(ec_cost(0.6, 1.1), std::domain_error);
    CHECK_THROWS_AS(ec_cost(0.1, 0.9), std::domain_error);
}

TEST_CASE("privacy-amplification cost")
{
    ProtocolParams p;
    p.L = 6;
    p.mu = 1e-12;

    SUBCASE("monitored, zero error, nu_th = 1")
    {
        p.nu_th = 1;
        p.e = 0.0;
        CHECK(pa_cost(p, 0.3, true) == doctest::Approx(0.0).epsilon(1e-10));
    }
    SUBCASE("unmonitored, nu_th = 2")
    {
        p.nu_th = 2;
        p.e = 0.03;
        CHECK(pa_cost(p, 0.3, false) == doctest::Approx(0.9709505944546686).epsilon(1e-12));
    }
    SUBCASE("phase bound above one half is clamped")
    {
        p.nu_th = 4;
        p.e = 0.03;
        const PaBreakdown b = pa_breakdown(p, 0.3, false);
        CHECK(b.phase_bound == doctest::Approx(0.8));
        CHECK(b.cost == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("everything tagged")
    {
        p.mu = 1.0;
        p.nu_th = 1;
        const PaBreakdown b = pa_breakdown(p, 1e-6, true);
        CHECK(b.delta_tag == 1.0);
        CHECK(b.cost == 1.0);
        CHECK_THROWS_AS(pa_cost(p, 0.0, true), DegenerateInput);
    }
    SUBCASE("monitoring never costs more")
    {
        for (int nu = 1; nu <= 4; ++nu)
            for (double e : {0.0, 0.01, 0.03, 0.1, 0.3}) {
                p.nu_th = nu;
                p.e = e;
                p.mu = 0.05;
                CHECK(pa_cost(p, 0.2, true) <= pa_cost(p, 0.2, false) + 1e-15);
            }
    }
}

TEST_CASE("key rate assembly")
{
    ProtocolParams p;
    p.L = 6;
    p.nu_th = 1;
    p.mu = 1e-12;
    p.f_ec = 1.0;

    SUBCASE("block arithmetic")
    {
        // PA = h(F(1, e)) with negligible tagging; pick e so that EC + PA is a known sum.
        const double e = 0.02;
        const RatePoint r = assemble_rate(p, 0.3, e, true);
        const double ec = binary_entropy(e);
        const double pa = binary_entropy(std::min(phase_error_bound({6, 1, e}).f_value, 0.5));
        CHECK(r.ec_cost == doctest::Approx(ec).epsilon(1e-14));
        CHECK(r.pa_cost == doctest::Approx(pa).epsilon(1e-9));
        CHECK(r.rate_per_block == doctest::Approx(0.3 * (1.0 - ec - pa)).epsilon(1e-9));
        CHECK(r.rate_per_pulse == doctest::Approx(r.rate_per_block / 6.0).epsilon(1e-15));
    }
    SUBCASE("negative block rate clamps per pulse")
    {
        const RatePoint r = assemble_rate(p, 0.3, 0.4, false);
        CHECK(r.rate_per_block < 0.0);
        CHECK(r.rate_per_pulse == 0.0);
        CHECK_FALSE(r.degenerate);
    }
    SUBCASE("degenerate detection")
    {
        const RatePoint r = assemble_rate(p, 0.0, 0.03, true);
        CHECK(r.degenerate);
        CHECK(r.rate_per_pulse == 0.0);
    }
    SUBCASE("key_rate plumbing")
    {
        ProtocolParams k;
        k.L = 6;
        k.nu_th = 2;
        k.mu = 0.05;
        k.eta = 0.5;
        k.e = 0.03;
        const RatePoint r = key_rate(k, true);
        CHECK(r.q == detection_rate(6, 0.05, 0.5));
        CHECK(r.e_src == source_tail(6, 0.05, 2));
        CHECK(r.delta_tag == doctest::Approx(r.e_src / (2.0 * r.q)));
        CHECK(r.e_unt == doctest::Approx(0.03 / (1.0 - r.delta_tag)));
        const RatePoint again = key_rate(k, true);
        CHECK(std::memcmp(&r.rate_per_block, &again.rate_per_block, sizeof(double)) == 0);
        CHECK(key_rate(k, false).rate_per_block <= r.rate_per_block);
    }
    SUBCASE("parameter validation")
    {
        ProtocolParams bad;
        bad.nu_th = 5;
        CHECK_THROWS_AS(key_rate(bad, true), std::invalid_argument);
        bad = {};
        bad.eta = 0.0;
        CHECK_THROWS_AS(key_rate(bad, true), std::invalid_argument);
        bad = {};
        bad.f_ec = 0.5;
        CHECK_THROWS_AS(key_rate(bad, true), std::invalid_argument);
    }
}
