#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrp/circle.hpp"

#include <random>

using namespace nrp;

namespace {

// Digits of the triangular-positions angle, straight from the rule.
std::string triangular_bits(std::size_t n)
{
    std::string s(n, '0');
    for (std::size_t k = 1; k * (k + 1) / 2 <= n; ++k)
        s[k * (k + 1) / 2 - 1] = '1';
    return s;
}

// Long division of p/q in base 2.
std::string long_division(std::uint64_t p, std::uint64_t q, std::size_t n)
{
    std::string s;
    p %= q;
    for (std::size_t i = 0; i < n; ++i) {
        p *= 2;
        s += p >= q ? '1' : '0';
        if (p >= q)
            p -= q;
    }
    return s;
}

Angle rat(std::int64_t p, std::int64_t q)
{
    return Angle::rational(BigInt(p), BigInt(q));
}

const Angle theta_star = parse_angle("rule:triangular");

}  // namespace

TEST_CASE("binary digits")
{
    CHECK(to_string(rat(1, 3).bits(4)) == "0101");
    CHECK(to_string(rat(1, 2).bits(3)) == "100");
    CHECK(to_string(theta_star.bits(10)) == "1010010001");
    CHECK(to_string(theta_star.bits(300)) == triangular_bits(300));
    CHECK(theta_star.bit(1) == 1);
    CHECK(theta_star.bit(2) == 0);
}

TEST_CASE("digits of rationals agree with long division")
{
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t q = 1 + rng() % 100000, p = rng() % q;
        CHECK(to_string(rat(p, q).bits(90)) == long_division(p, q, 90));
    }
}

TEST_CASE("doubling")
{
    CHECK(rat(1, 3).doubled() == rat(2, 3));
    CHECK(rat(2, 3).doubled() == rat(1, 3));
    CHECK(to_string(theta_star.doubled().bits(9)) == "010010001");
    CHECK(to_string(theta_star.doubled(3).bits(200)) == triangular_bits(203).substr(3));
    CHECK(rat(1, 2).doubled() == Angle());

    std::mt19937_64 rng(6);
    for (int i = 0; i < 100; ++i) {
        std::uint64_t q = 1 + rng() % 5000, p = rng() % q, n = rng() % 40;
        Rational v(p, q);
        for (std::uint64_t k = 0; k < n; ++k) {
            v *= 2;
            if (v >= 1)
                v -= 1;
        }
        CHECK(rat(p, q).doubled(n) == Angle::rational(v));
    }
}

TEST_CASE("halves")
{
    auto [a, b] = Angle().halves();
    CHECK(a == Angle());
    CHECK(b == rat(1, 2));
    auto [c, d] = rat(1, 3).halves();
    CHECK(c == rat(1, 6));
    CHECK(d == rat(2, 3));
    auto [e, f] = theta_star.halves();
    CHECK(to_string(e.bits(100)) == "0" + triangular_bits(99));
    CHECK(to_string(f.bits(100)) == "1" + triangular_bits(99));
    CHECK(e.doubled() == theta_star);
    CHECK(f.doubled() == theta_star);
}

TEST_CASE("circle distance")
{
    CHECK(dist(rat(1, 10), rat(9, 10)).exact());
    CHECK(dist(rat(1, 10), rat(9, 10)).lo == Rational(1, 5));
    CHECK(dist(rat(1, 4), rat(3, 4)).lo == Rational(1, 2));
    Enclosure e = dist(theta_star, theta_star.doubled(), 5);
    CHECK(e.width() <= Rational(1, 32));
    CHECK(e.lo >= Rational(5, 32));
    CHECK(e.hi <= Rational(3, 8));
    // the true distance 0.6416... - 0.2833... lies inside
    double d = theta_star.approx() - theta_star.doubled().approx();
    CHECK(e.lo.convert_to<double>() <= d);
    CHECK(d <= e.hi.convert_to<double>());
}

TEST_CASE("sigma on arcs")
{
    Arc s(rat(1, 10), rat(4, 10));
    auto img = sigma(s);
    REQUIRE(std::holds_alternative<Arc>(img));
    CHECK(std::get<Arc>(img).a() == rat(1, 5));
    CHECK(std::get<Arc>(img).b() == rat(4, 5));
    CHECK(*std::get<Arc>(img).exact_length() == Rational(3, 5));

    auto wide = sigma(Arc(rat(1, 10), rat(7, 10)));
    REQUIRE(std::holds_alternative<Arc>(wide));
    CHECK(*std::get<Arc>(wide).exact_length() == Rational(1, 5));
    CHECK(sigma_length(Rational(3, 5)) == Rational(1, 5));

    auto half = sigma(Arc(rat(1, 4), rat(3, 4)));
    REQUIRE(std::holds_alternative<Angle>(half));
    CHECK(std::get<Angle>(half) == rat(1, 2));

    CHECK_THROWS_AS(Arc(rat(1, 3), rat(1, 3)), Error);
}

TEST_CASE("arc membership")
{
    Arc s(rat(1, 6), rat(2, 3));
    CHECK(in_arc(rat(1, 3), s) == ArcMembership::inside);
    CHECK(in_arc(rat(2, 3), s) == ArcMembership::boundary);
    CHECK(in_arc(rat(5, 6), s) == ArcMembership::outside);
    // 0.6416... lies between 1/2 and 3/4
    CHECK(in_arc(theta_star, Arc(rat(1, 2), rat(3, 4)), 8) == ArcMembership::inside);
    CHECK(in_arc(theta_star, Arc(rat(3, 4), rat(1, 2)), 8) == ArcMembership::outside);
    // wrapping arc through 0
    CHECK(in_arc(rat(1, 20), Arc(rat(9, 10), rat(1, 10))) == ArcMembership::inside);
    CHECK(Arc(rat(9, 10), rat(1, 10)).wraps());
}

TEST_CASE("comparison of streamed angles")
{
    CHECK(compare(theta_star, rat(1, 2)) == Order::greater);
    CHECK(compare(theta_star, rat(3, 4)) == Order::less);
    CHECK(compare(theta_star, theta_star) == Order::equal);
    CHECK(parse_angle("rule:periodic:01") == rat(1, 3));
    CHECK(parse_angle("rule:preperiodic:1:01") == rat(2, 3));
    // no exact value and agreement with 0 beyond the guard: undecided
    Angle near = parse_angle("pre:" + std::string(300, '0') + "/rule:triangular");
    CHECK(compare(near, Angle(), 100) == Order::undecided);
    CHECK_THROWS_AS(compare_strict(near, Angle(), 100), Undecided);
}

TEST_CASE("angle spec grammar")
{
    CHECK(parse_angle("rat:1/3") == rat(1, 3));
    CHECK(parse_angle("rat:4/3") == rat(1, 3));
    CHECK(parse_angle("rat:0") == Angle());
    CHECK(parse_angle("bits:101") == rat(5, 8));
    CHECK(parse_angle("pre:1/rat:1/3") == rat(2, 3));
    CHECK(to_string(parse_angle("rule:triangular@3").bits(20)) == triangular_bits(23).substr(3));
    CHECK(to_string(parse_angle("rule:squares").bits(16)) == "1001000010000001");
    for (const char* bad : {"", "rat:", "rat:1/0", "rat:x", "bits:102", "rule:nope", "rule:periodic:", "foo:1"})
        CHECK_THROWS_AS(parse_angle(bad), ParseError);
    for (const char* spec : {"rat:5/12", "rule:triangular", "rule:triangular@7", "rule:periodic:011",
                             "rule:preperiodic:10:01", "rule:explicit:1101:1"})
        CHECK(parse_angle(parse_angle(spec).spec()).bits(128) == parse_angle(spec).bits(128));
}

TEST_CASE("rendering of rationals")
{
    CHECK(fraction(Rational(6, 8)) == "3/4");
    CHECK(decimal(Rational(1, 3), 5) == "0.33333");
}
