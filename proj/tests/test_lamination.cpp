#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrp/lamination.hpp"

#include <algorithm>
#include <set>

using namespace nrp;

namespace {

Angle rat(std::int64_t p, std::int64_t q)
{
    return Angle::rational(BigInt(p), BigInt(q));
}

Rational frac(Rational x)
{
    while (x >= 1)
        x -= 1;
    return x;
}

// Closed half-circle test against L_1 = [theta/2, (theta+1)/2].
bool in_l1(const Rational& t, const Rational& theta)
{
    return theta / 2 <= t && t <= (theta + 1) / 2;
}

// Symbols 1 iff the orbit is in the open L_1; the orbits used here avoid
// the cut points.
std::string brute_itinerary(Rational t, const Rational& theta, std::size_t n)
{
    std::string s;
    for (std::size_t j = 0; j < n; ++j, t = frac(2 * t))
        s += (theta / 2 < t && t < (theta + 1) / 2) ? '1' : '0';
    return s;
}

// Angles k/Q sharing the itinerary of theta to depth n.
std::set<Rational> grid_class(const Rational& theta, std::int64_t Q, std::size_t n)
{
    std::set<Rational> out;
    std::string target = brute_itinerary(theta, theta, n);
    for (std::int64_t k = 0; k < Q; ++k)
        if (brute_itinerary(Rational(k, Q), theta, n) == target)
            out.insert(Rational(k, Q));
    return out;
}

// Every oracle member lies in exactly one cluster and every cluster holds one.
void check_against(const LaminationClass& cls, const std::set<Rational>& members)
{
    CHECK(cls.size() == members.size());
    for (const auto& m : members) {
        std::size_t hits = 0;
        for (const auto& c : cls.clusters)
            hits += c.contains(Angle::rational(m));
        CHECK(hits == 1);
    }
}

const Angle theta_star = parse_angle("rule:triangular");

}  // namespace

TEST_CASE("single-level pullback is the half circle")
{
    ArcLevel x0 = realization(parse_bit_word("1"), rat(1, 3));
    REQUIRE(x0.arcs.size() == 1);
    CHECK(x0.arcs[0].a() == rat(1, 6));
    CHECK(x0.arcs[0].b() == rat(2, 3));
}

TEST_CASE("two-level pullback matches a grid oracle")
{
    ArcLevel x0 = realization(parse_bit_word("11"), rat(1, 3));
    REQUIRE(x0.arcs.size() == 2);
    CHECK(x0.arcs[0].a() == rat(1, 6));
    CHECK(x0.arcs[0].b() == rat(1, 3));
    CHECK(x0.arcs[1].a() == rat(7, 12));
    CHECK(x0.arcs[1].b() == rat(2, 3));
    // membership on a 2^-12 grid: t and 2t both in L_1
    Rational th(1, 3);
    for (int k = 0; k < 4096; ++k) {
        Rational t(k, 4096);
        bool want = in_l1(t, th) && in_l1(frac(2 * t), th);
        CHECK(x0.contains(Angle::rational(t)) == want);
    }
    CHECK(*x0.exact_length() <= Rational(1, 2));
}

TEST_CASE("pullback levels shrink")
{
    ItineraryArcSystem sys = pullback(kneading(theta_star, 12).word.symbols, theta_star);
    REQUIRE(sys.levels.size() == 13);
    CHECK(sys.levels.back().full_circle);
    for (std::size_t k = 0; k + 1 < sys.levels.size(); ++k) {
        auto here = sys.levels[k].exact_length();
        if (!here || sys.levels[k + 1].full_circle)
            continue;
        auto above = sys.levels[k + 1].exact_length();
        if (above)
            CHECK(*here <= *above);
    }
}

TEST_CASE("characteristic class of the triangular angle")
{
    LaminationClass a = characteristic_class(theta_star, 64);
    CHECK(a.converged);
    CHECK(a.size() >= 1);
    CHECK(a.size() <= 2);
    CHECK(a.find(theta_star) < a.size());
    for (std::size_t depth : {8, 16, 32})
        CHECK(forward_image(theta_star, depth, 0).find(theta_star) < forward_image(theta_star, depth, 0).size());
}

TEST_CASE("critical class")
{
    LaminationClass a = characteristic_class(theta_star, 64);
    LaminationClass c = critical_class(a);
    auto [h0, h1] = theta_star.halves();
    CHECK(c.find(h0) < c.size());
    CHECK(c.find(h1) < c.size());
    CHECK(c.size() == 2 * a.size());
    // the hull boundary of {theta/2, (theta+1)/2} is two half circles, each
    // collapsing onto theta
    auto img = sigma(Arc(h0, h1));
    REQUIRE(std::holds_alternative<Angle>(img));
    CHECK(std::get<Angle>(img) == theta_star);
}

TEST_CASE("sigma maps the critical hull boundary onto the arcs cut by A")
{
    LaminationClass a;
    a.clusters = {Cluster::point(rat(5, 12)), Cluster::point(rat(7, 12))};
    LaminationClass c = critical_class(a);
    REQUIRE(c.size() == 4);
    std::set<std::pair<Rational, Rational>> want{{Rational(5, 12), Rational(7, 12)}, {Rational(7, 12), Rational(5, 12)}};
    for (std::size_t i = 0; i < 4; ++i) {
        Arc gap(c.clusters[i].lo, c.clusters[(i + 1) % 4].lo);
        auto img = sigma(gap);
        REQUIRE(std::holds_alternative<Arc>(img));
        const Arc& s = std::get<Arc>(img);
        CHECK(want.count({*s.a().exact(), *s.b().exact()}) == 1);
    }
}

TEST_CASE("classes of rational words against a brute-force oracle")
{
    struct Case {
        std::int64_t p, q, grid;
        std::set<Rational> members;
    };
    const Case cases[] = {
        {5, 12, 48, {Rational(5, 12), Rational(7, 12)}},
        {9, 56, 224, {Rational(9, 56), Rational(11, 56), Rational(15, 56)}},
        {1, 6, 24, {Rational(1, 6)}},
    };
    for (const auto& cs : cases) {
        CAPTURE(cs.q);
        Rational th(cs.p, cs.q);
        CHECK(grid_class(th, cs.grid, 40) == cs.members);
        // the orbit coincidence of these angles rules out the
        // characteristic screen; the class of the word itself is the oracle's
        LaminationClass cls = forward_image(Angle::rational(th), 32, 0);
        check_against(cls, cs.members);
        CHECK_THROWS_AS(characteristic_class(Angle::rational(th), 32), PreconditionFailed);
    }
}

TEST_CASE("periodic angles are rejected")
{
    CHECK_THROWS_AS(characteristic_class(rat(1, 3), 16), PreconditionFailed);
    CHECK_THROWS_AS(class_orbit(rat(1, 7), 16, 8), PreconditionFailed);
}

TEST_CASE("image consistency")
{
    LaminationClass a = characteristic_class(theta_star, 64);
    LaminationClass img = forward_image(theta_star, 63, 1);
    auto doubled = double_clusters(a.clusters);
    REQUIRE(doubled.size() == img.size());
    for (std::size_t i = 0; i < doubled.size(); ++i) {
        CHECK(doubled[i].lo == img.clusters[i].lo);
        CHECK(doubled[i].hi == img.clusters[i].hi);
    }
}

TEST_CASE("unlinkedness of point classes")
{
    auto cls = [](std::initializer_list<std::pair<int, int>> pts) {
        std::vector<Cluster> out;
        for (auto [p, q] : pts)
            out.push_back(Cluster::point(rat(p, q)));
        return out;
    };
    CHECK(unlinked(cls({{1, 10}, {4, 10}}), cls({{5, 10}, {9, 10}})) == Tri::yes);
    CHECK(unlinked(cls({{1, 10}, {5, 10}}), cls({{3, 10}, {7, 10}})) == Tri::no);
    CHECK(unlinked(cls({{1, 10}, {4, 10}}), cls({{2, 10}, {3, 10}})) == Tri::yes);
    // symmetric
    CHECK(unlinked(cls({{3, 10}, {7, 10}}), cls({{1, 10}, {5, 10}})) == Tri::no);
}

TEST_CASE("wandering and separation of the triangular class")
{
    ClassOrbit orbit = class_orbit(theta_star, 64, 512);
    REQUIRE(orbit.images.size() == 513);
    ClassSeparation sep = class_orbit_separation(orbit);
    CHECK(sep.delta_lower > 0);
    CHECK(sep.wandering_ok);
    CHECK(sep.overlapping_pairs == 0);
    // the minimum is attained: no sampled image is closer than the bound
    for (std::size_t n = 1; n < orbit.images.size(); n += 37)
        CHECK(class_distance_lower(orbit.images[0], orbit.images[n]) >= sep.delta_lower);

    ShortestArcReport sa = shortest_arc_check(orbit);
    CHECK(sa.ok);
    CHECK(sa.vacuous);
}

TEST_CASE("shortest arc on a two-cluster class")
{
    // a screened rational whose class has two clusters
    Angle t = rat(187156, 373793);
    LaminationClass a = characteristic_class(t, 48);
    REQUIRE(a.size() == 2);
    ClassOrbit orbit = class_orbit(t, 48, 40);
    ShortestArcReport sa = shortest_arc_check(orbit);
    CHECK_FALSE(sa.vacuous);
    CHECK(sa.ok);
    // the two arcs cut by A are complementary
    Arc s1(a.clusters[0].hi, a.clusters[1].lo);
    Arc s2(a.clusters[1].hi, a.clusters[0].lo);
    Enclosure total{s1.length(128).lo + s2.length(128).lo, s1.length(128).hi + s2.length(128).hi};
    Rational widths = Arc(a.clusters[0].lo, a.clusters[0].hi).length(128).hi +
                      Arc(a.clusters[1].lo, a.clusters[1].hi).length(128).hi;
    CHECK(total.hi <= 1);
    CHECK(total.lo + widths >= 1);
}
