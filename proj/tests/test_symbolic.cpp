#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrp/symbolic.hpp"

#include <random>

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

// Itinerary by exact arithmetic for orbits that never meet the cut points:
// symbol 1 iff tau^j t lies in the open arc (theta/2, (theta+1)/2).
std::string brute_itinerary(Rational t, Rational theta, std::size_t n)
{
    Rational lo = theta / 2, hi = (theta + 1) / 2;
    std::string s;
    for (std::size_t j = 0; j < n; ++j) {
        s += (lo < t && t < hi) ? '1' : '0';
        t = frac(2 * t);
    }
    return s;
}

// Truncation of the triangular-positions angle to `bits` digits.
Rational triangular_value(std::size_t bits)
{
    Rational v = 0;
    for (std::size_t k = 1; k * (k + 1) / 2 <= bits; ++k)
        v += Rational(1) / Rational(BigInt(1) << (k * (k + 1) / 2));
    return v;
}

const Angle theta_star = parse_angle("rule:triangular");

}  // namespace

TEST_CASE("one-sided itineraries at a boundary")
{
    // orbit 1/3, 2/3 against L1 = [1/6, 2/3]; 2/3 is a cut point
    CHECK(to_string(itinerary(rat(1, 3), rat(1, 3), 4, Side::plus).symbols) == "1010");
    CHECK(to_string(itinerary(rat(1, 3), rat(1, 3), 4, Side::minus).symbols) == "1111");
}

TEST_CASE("both sides agree for the triangular angle")
{
    auto plus = itinerary(theta_star, theta_star, 64, Side::plus);
    auto minus = itinerary(theta_star, theta_star, 64, Side::minus);
    CHECK(plus.symbols == minus.symbols);
}

TEST_CASE("kneading sequence of the triangular angle")
{
    KneadingPrefix k = kneading(theta_star, 6);
    CHECK(k.word.symbols[0] == 1);
    // the orbit stays 2^-30 away from the cut points for these six steps, so
    // a 300-digit truncation decides every membership
    CHECK(to_string(k.word.symbols) == brute_itinerary(triangular_value(300), triangular_value(300), 6));
    CHECK(to_string(k.word.symbols) == "101001");
    CHECK_FALSE(k.sides_disagree());

    KneadingPrefix deep = kneading(theta_star, 200);
    CHECK(to_string(deep.word.symbols) == brute_itinerary(triangular_value(600), triangular_value(600), 200));
}

TEST_CASE("kneading of a periodic angle flags the disagreement")
{
    KneadingPrefix k = kneading(rat(1, 3), 8);
    CHECK(k.sides_disagree());
    CHECK_THROWS(kneading(Angle(), 8));
}

TEST_CASE("kneading of rationals agrees with exact arithmetic")
{
    std::mt19937_64 rng(11);
    int checked = 0;
    while (checked < 100) {
        std::uint64_t q = 3 + rng() % 10000, p = 1 + rng() % (q - 1);
        Rational th(p, q);
        // skip orbits meeting a cut point (denominators divisible by 2q)
        Rational t = th;
        bool boundary = false;
        for (int j = 0; j < 64; ++j, t = frac(2 * t))
            boundary |= t == th / 2 || t == (th + 1) / 2;
        if (boundary)
            continue;
        ++checked;
        CHECK(to_string(kneading(rat(p, q), 64).word.symbols) == brute_itinerary(th, th, 64));
    }
}

TEST_CASE("period refutation")
{
    auto a = refute_periods(parse_bit_word("101010"), 2);
    CHECK(a.refuted == std::vector<std::size_t>{1});
    CHECK(a.smallest_unrefuted == 2u);
    auto b = refute_periods(parse_bit_word("1001"), 2);
    CHECK(b.all_refuted());
    KneadingPrefix k = kneading(theta_star, 4096);
    CHECK(refute_periods(k.word.symbols, 1024).all_refuted());
    CHECK_THROWS(refute_periods(parse_bit_word("1001"), 3));
}

TEST_CASE("non-recurrence certificates")
{
    auto half = angle_nonrecurrence(rat(1, 2), 3);
    REQUIRE(half.periodic_collision);
    CHECK(*half.periodic_collision == std::pair<std::size_t, std::size_t>{1, 2});
    CHECK_FALSE(half.passes());

    auto third = angle_nonrecurrence(rat(1, 3), 10);
    REQUIRE(third.periodic_collision);
    CHECK(*third.periodic_collision == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(third.delta_lower == Rational(1, 3));

    auto star = angle_nonrecurrence(theta_star, 2000);
    CHECK(star.passes());
    CHECK(star.delta_lower >= Rational(1, 16));
    CHECK(star.argmin == 2);
}

TEST_CASE("non-recurrence bound is a lower bound")
{
    // the bound never exceeds the true minimum distance over the orbit
    Rational th(3, 1037);
    auto cert = angle_nonrecurrence(Angle::rational(th), 200);
    Rational best = 1, t = th;
    for (int n = 1; n <= 200; ++n) {
        t = frac(2 * t);
        Rational d = t > th ? t - th : th - t;
        if (d > Rational(1, 2))
            d = 1 - d;
        if (d > 0 && d < best)
            best = d;
    }
    CHECK(cert.delta_lower <= best);
}
