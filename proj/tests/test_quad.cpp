#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrp/quad.hpp"

#include <algorithm>
#include <cmath>

using namespace nrp;

namespace {

bool close(Complex a, Complex b, double tol = 1e-9)
{
    return std::abs(a - b) < tol;
}

const Cycle* cycle_through(const CycleSearch& s, Complex z)
{
    for (const auto& c : s.cycles)
        for (Complex p : c.points)
            if (close(p, z, 1e-8))
                return &c;
    return nullptr;
}

}  // namespace

TEST_CASE("parameters must be finite")
{
    CHECK_THROWS(Parameter(NAN, 0));
    CHECK_THROWS(Parameter(0, INFINITY));
}

TEST_CASE("orbits")
{
    OrbitSamples zero = iterate(Parameter(0, 0), 0, 10);
    CHECK_FALSE(zero.escaped);
    CHECK(zero.points.size() == 11);
    CHECK(std::all_of(zero.points.begin(), zero.points.end(), [](Complex z) { return z == Complex(0, 0); }));

    OrbitSamples cheb = iterate(Parameter(-2, 0), 0, 6);
    const double want[] = {0, -2, 2, 2, 2, 2, 2};
    for (int k = 0; k <= 6; ++k)
        CHECK(cheb.points[k] == Complex(want[k], 0));

    OrbitSamples ci = iterate(Parameter(0, 1), 0, 7);
    const Complex wi[] = {{0, 0}, {0, 1}, {-1, 1}, {0, -1}, {-1, 1}, {0, -1}, {-1, 1}, {0, -1}};
    for (int k = 0; k <= 7; ++k)
        CHECK(close(ci.points[k], wi[k], 1e-15));
    CHECK_FALSE(ci.escaped);

    OrbitSamples one = iterate(Parameter(1, 0), 0, 10);
    CHECK(one.escaped);
    CHECK(one.escape_index == 3u);  // 0, 1, 2, 5
}

TEST_CASE("critical orbit separation")
{
    auto cheb = critical_orbit_separation(Parameter(-2, 0), 1000);
    CHECK(cheb.min_critical_distance == doctest::Approx(2.0));
    CHECK_FALSE(cheb.escaped);
    auto zero = critical_orbit_separation(Parameter(0, 0), 10);
    CHECK(zero.min_critical_distance == 0.0);
    auto ci = critical_orbit_separation(Parameter(0, 1), 1000);
    CHECK(ci.min_critical_distance == doctest::Approx(1.0));
    CHECK(ci.drift == doctest::Approx(1.0));
    auto out = critical_orbit_separation(Parameter(1, 0), 100);
    CHECK(out.escaped);

    std::vector<Complex> supplied{{-2, 0}, {2, 0}, {2, 0}};
    CHECK(orbit_separation(supplied).min_critical_distance == doctest::Approx(2.0));
}

TEST_CASE("fixed points and their multipliers")
{
    auto c0 = find_cycles(Parameter(0, 0), 1);
    REQUIRE(c0.size() == 1);
    CHECK(c0[0].complete());
    const Cycle* origin = cycle_through(c0[0], 0);
    const Cycle* one = cycle_through(c0[0], 1);
    REQUIRE(origin);
    REQUIRE(one);
    CHECK(std::abs(origin->multiplier) < 1e-9);
    CHECK(close(one->multiplier, 2));

    auto cm2 = find_cycles(Parameter(-2, 0), 1);
    const Cycle* beta = cycle_through(cm2[0], 2);
    const Cycle* alpha = cycle_through(cm2[0], -1);
    REQUIRE(beta);
    REQUIRE(alpha);
    CHECK(close(beta->multiplier, 4));
    CHECK(close(alpha->multiplier, -2));
}

TEST_CASE("superattracting two-cycle of the basilica")
{
    auto found = find_cycles(Parameter(-1, 0), 2);
    REQUIRE(found.size() == 2);
    const Cycle* c = cycle_through(found[1], 0);
    REQUIRE(c);
    CHECK(c->period == 2);
    CHECK(cycle_through(found[1], -1) == c);
    CHECK(std::abs(c->multiplier) < 1e-9);
    CHECK_FALSE(c->repelling());
}

TEST_CASE("cycle counts")
{
    const std::size_t want[] = {2, 2, 6, 12, 30, 54, 126, 240};
    for (int p = 1; p <= 8; ++p)
        CHECK(exact_period_count(p) == want[p - 1]);

    // all cycles of the Chebyshev map other than the beta fixed point have
    // multiplier of modulus 2^p
    auto cheb = find_cycles(Parameter(-2, 0), 6);
    for (const auto& s : cheb) {
        CAPTURE(s.period);
        CHECK(s.complete());
        for (const auto& c : s.cycles) {
            if (c.period == 1 && close(c.points[0], 2))
                continue;
            CHECK(std::abs(c.multiplier) == doctest::Approx(std::ldexp(1.0, c.period)).epsilon(1e-6));
        }
    }

    auto misiurewicz = find_cycles(Parameter(0, 1), 6);
    for (const auto& s : misiurewicz) {
        CHECK(s.complete());
        for (const auto& c : s.cycles) {
            CHECK(c.repelling());
            // each point really has the stated period
            Complex z = c.points[0];
            for (int k = 0; k < c.period; ++k)
                z = z * z + Complex(0, 1);
            CHECK(close(z, c.points[0], 1e-8));
            CHECK(close(cycle_multiplier(Parameter(0, 1), c.points[0], c.period), c.multiplier, 1e-6));
        }
    }
    CHECK_THROWS(find_cycles(Parameter(0, 0), 9));
}
