#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrp/rays.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace nrp;

namespace {

Angle rat(std::int64_t p, std::int64_t q)
{
    return Angle::rational(BigInt(p), BigInt(q));
}

RaySample at(double log2g, Complex z)
{
    RaySample s;
    s.log2_potential = log2g;
    s.position = z;
    return s;
}

PotentialSchedule with_floor(double floor_log2, int k = 8)
{
    PotentialSchedule s = PotentialSchedule::defaults().with_floor_log2(floor_log2);
    s.subdivisions = k;
    return s;
}

}  // namespace

TEST_CASE("schedules")
{
    PotentialSchedule d = PotentialSchedule::defaults();
    CHECK(std::exp2(d.start_log2) == doctest::Approx(std::log(100.0)));
    CHECK(std::exp2(d.floor_log2) == doctest::Approx(std::ldexp(std::log(2.0), -22)));
    CHECK(d.subdivisions == 8);
    CHECK_NOTHROW(d.validate());
    CHECK_THROWS(PotentialSchedule::from_potentials(1.0, 2.0).validate());
    CHECK_THROWS(PotentialSchedule::from_potentials(1.0, 0.0).validate());
    PotentialSchedule bad = d;
    bad.subdivisions = 0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("landing estimate from a tail")
{
    std::vector<RaySample> flat;
    for (int i = 0; i < 10; ++i)
        flat.push_back(at(-i, {0.5, 0.25}));
    LandingEstimate e = landing_estimate(flat, 1e-6, 8, true);
    CHECK(e.tail_diameter == 0.0);
    CHECK(e.converged);
    CHECK(e.estimate == Complex(0.5, 0.25));

    std::vector<RaySample> geo;
    for (int k = 0; k < 30; ++k)
        geo.push_back(at(-k, {std::ldexp(1.0, -k), 0}));
    LandingEstimate g = landing_estimate(geo, 1e-7, 8, true);
    CHECK(g.tail_diameter == doctest::Approx(std::ldexp(1.0, -22) - std::ldexp(1.0, -29)));
    CHECK_FALSE(g.converged);
    CHECK(landing_estimate(geo, 1e-6, 8, true).converged);
    // a trace that never reached its floor is never converged
    CHECK_FALSE(landing_estimate(flat, 1e-6, 8, false).converged);
}

TEST_CASE("rays of z^2 are radial")
{
    PotentialSchedule s = with_floor(-30);
    for (int k = 0; k < 8; ++k) {
        Angle t = rat(2 * k + 1, 16);
        RayTraceResult r = trace_dynamical_ray(Parameter(0, 0), t, s);
        CHECK(r.converged);
        CHECK(std::abs(r.landing_estimate - std::polar(1.0, 2 * std::numbers::pi * (2 * k + 1) / 16)) < 1e-8);
        for (const auto& x : r.samples)
            CHECK(std::abs(std::arg(x.position / std::polar(1.0, 2 * std::numbers::pi * t.approx()))) < 1e-9);
    }
    RayTraceResult third = trace_dynamical_ray(Parameter(0, 0), rat(1, 3), s);
    CHECK(std::abs(third.landing_estimate - std::polar(1.0, 2 * std::numbers::pi / 3)) < 1e-8);
}

TEST_CASE("Chebyshev rays land at 2 cos(2 pi t)")
{
    for (auto [p, q] : {std::pair{0, 1}, {1, 2}, {1, 4}, {1, 3}}) {
        RayTraceResult r = trace_dynamical_ray(Parameter(-2, 0), rat(p, q), PotentialSchedule::defaults());
        CAPTURE(q);
        CHECK(std::abs(r.landing_estimate - 2 * std::cos(2 * std::numbers::pi * p / q)) < 1e-6);
        CHECK_FALSE(r.truncated);
    }
    RayTraceResult quarter = trace_dynamical_ray(Parameter(-2, 0), rat(1, 4), PotentialSchedule::defaults());
    CHECK(quarter.near_critical);  // the ray at 1/4 lands on the critical point
}

TEST_CASE("parameter rays")
{
    RayTraceResult tip = trace_param_ray(rat(1, 2), PotentialSchedule::defaults());
    CHECK(std::abs(tip.landing_estimate + 2.0) < 1e-4);
    CHECK(tip.converged);

    // parabolic roots approach like 1/log(1/G); deep floors close the gap
    RayTraceResult root = trace_param_ray(Angle(), with_floor(-5000, 2));
    CHECK(std::abs(root.landing_estimate - 0.25) < 1e-6);
    RayTraceResult root2 = trace_param_ray(rat(1, 3), with_floor(-4000, 2));
    CHECK(std::abs(root2.landing_estimate + 0.75) < 1e-3);
}

TEST_CASE("complex conjugation symmetry")
{
    PotentialSchedule s = with_floor(-200, 4);
    RayTraceResult a = trace_param_ray(rat(1, 3), s);
    RayTraceResult b = trace_param_ray(rat(2, 3), s);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        CHECK(std::abs(a.samples[i].position - std::conj(b.samples[i].position)) < 1e-12);
}

TEST_CASE("refinement stability")
{
    Angle star = parse_angle("rule:triangular");
    RayTraceResult coarse = trace_param_ray(star, with_floor(PotentialSchedule::defaults().floor_log2, 4));
    RayTraceResult fine = trace_param_ray(star, with_floor(PotentialSchedule::defaults().floor_log2, 16));
    CHECK(coarse.converged);
    CHECK(fine.converged);
    CHECK(std::abs(coarse.landing_estimate - fine.landing_estimate) < 1e-9);
}

TEST_CASE("functoriality: f_c maps R_c(t) at G to R_c(2t) at 2G")
{
    Parameter c(-0.12256116687665361, 0.74486176661974423);  // rabbit
    Angle t = rat(1, 7);
    RayTraceResult r = trace_dynamical_ray(c, t, with_floor(-6, 4));
    for (std::size_t i = 0; i < r.samples.size(); i += 5) {
        const RaySample& s = r.samples[i];
        if (s.log2_potential + 1 > r.samples.front().log2_potential)
            continue;
        PotentialSchedule img = with_floor(s.log2_potential + 1, 4);
        RayTraceResult r2 = trace_dynamical_ray(c, t.doubled(), img);
        Complex w = s.position * s.position + c.value();
        CHECK(std::abs(r2.samples.back().position - w) < 1e-9 * std::max(1.0, std::abs(w)));
    }
}

TEST_CASE("residual contract")
{
    for (const Angle& t : {parse_angle("rule:triangular"), rat(1, 3), rat(1, 2)}) {
        RayTraceResult r = trace_param_ray(t, PotentialSchedule::defaults());
        for (const auto& s : r.samples)
            CHECK(s.residual <= std::max(1e-12, s.residual_floor));
        CHECK(r.angle_bits_consumed >= 64);
    }
}

TEST_CASE("shadow orbit")
{
    ShadowOrbit sh = shadow_critical_orbit(Parameter(-2, 0), rat(1, 2), 3, PotentialSchedule::defaults());
    REQUIRE(sh.points.size() == 3);
    CHECK(std::abs(sh.points[0] + 2.0) < 1e-6);
    CHECK(std::abs(sh.points[1] - 2.0) < 1e-6);
    CHECK(std::abs(sh.points[2] - 2.0) < 1e-6);
    CHECK(sh.truncated == 0);
}

TEST_CASE("csv output")
{
    RayTraceResult r = trace_dynamical_ray(Parameter(0, 0), rat(1, 3), with_floor(-4, 1));
    std::ostringstream os;
    write_trace_csv(os, r);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "log2_potential,potential,re,im,residual,iters");
    std::size_t rows = 0;
    while (std::getline(in, line))
        ++rows;
    CHECK(rows == r.samples.size());
}
