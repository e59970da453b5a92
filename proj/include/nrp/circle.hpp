#pragma once

// Exact arithmetic on the circle T = R/Z.
//
// Angles are either reduced rationals in [0,1) or streamed binary expansions
// produced by a named rule.  Every angle carries its first 64 binary digits
// ("head"), which decides almost all comparisons in O(1).  Binary expansions
// of dyadic rationals are always the terminating one.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace nrp {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

/// Default number of binary digits examined before a comparison is declared
/// undecided.
inline constexpr unsigned kDefaultPrecision = 64;
inline constexpr unsigned kDefaultGuardBits = 192;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a comparison cannot be decided at the requested precision.
class Undecided : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// A finite word over {0,1}; element i is 0 or 1.
using BitWord = std::vector<std::uint8_t>;

std::string to_string(const BitWord& w);
BitWord parse_bit_word(std::string_view s);

/// A named rule generating the binary digits b(1), b(2), ... of an angle.
class BitRule {
public:
    enum class Kind { periodic, preperiodic, positions, explicit_prefix };

    static std::shared_ptr<const BitRule> periodic(BitWord word);
    static std::shared_ptr<const BitRule> preperiodic(BitWord pre, BitWord word);
    /// Ones exactly at the positions of a named sequence ("triangular":
    /// k(k+1)/2, "squares": k^2, k >= 1), zeros elsewhere.
    static std::shared_ptr<const BitRule> positions(std::string_view sequence);
    /// `prefix` followed by `fallback` repeated forever.
    static std::shared_ptr<const BitRule> explicit_prefix(BitWord prefix, int fallback);

    Kind kind() const { return kind_; }
    /// Digit at index i >= 1.
    int bit(std::uint64_t i) const;
    /// Exact value when the rule generates an eventually periodic expansion.
    const std::optional<Rational>& exact_value() const { return exact_; }
    /// Spec string, e.g. "rule:periodic:01".
    std::string spec() const;

private:
    BitRule(Kind kind, BitWord pre, BitWord word, std::string sequence, int fallback);

    Kind kind_;
    BitWord pre_;
    BitWord word_;
    std::string sequence_;
    int fallback_ = 0;
    std::optional<Rational> exact_;
};

/// A point of T.
class Angle {
public:
    /// The angle 0.
    Angle();

    /// num/den reduced modulo 1.
    static Angle rational(const BigInt& num, const BigInt& den);
    static Angle rational(const Rational& value);
    static Angle from_rule(std::shared_ptr<const BitRule> rule);

    bool is_rational() const { return std::holds_alternative<Rational>(rep_); }
    bool is_streamed() const { return !is_rational(); }

    /// Exact value when known: RATIONAL angles, and streamed angles whose rule
    /// is eventually periodic.
    std::optional<Rational> exact() const;

    /// Binary digit at index i >= 1.
    int bit(std::uint64_t i) const;
    /// First n binary digits.
    BitWord bits(std::size_t n) const;
    /// Digits 1..64 packed with digit 1 in the most significant bit.
    std::uint64_t head() const { return head_; }

    /// tau(theta) = 2 theta mod 1.
    Angle doubled() const;
    /// tau^n(theta).
    Angle doubled(std::uint64_t n) const;
    /// {theta/2, (theta+1)/2}.
    std::pair<Angle, Angle> halves() const;
    /// (b + theta)/2 for b in {0,1}: the preimage whose first digit is b.
    Angle prepend(int b) const;

    /// Floating-point approximation from the head; for numerics only.
    double approx() const;

    /// Canonical spec string; round-trips through parse_angle.
    std::string spec() const;

    /// Structural identity of two streamed angles (same rule, same shift,
    /// same prepended digits).
    bool same_structure(const Angle& other) const;

private:
    struct Streamed {
        std::shared_ptr<const BitRule> rule;
        std::uint64_t offset = 0;  // digit i of the tail is rule->bit(offset + i)
        BitWord lead;              // digits prepended in front of the tail
    };

    explicit Angle(Rational value);
    explicit Angle(Streamed s);
    void compute_head();

    std::variant<Rational, Streamed> rep_;
    std::uint64_t head_ = 0;
};

enum class Order { less, equal, greater, undecided };

/// Compare representatives in [0,1).  Digits beyond `max_bits` are not
/// examined; if the two expansions agree that far and no exact route applies,
/// the answer is `undecided`.
Order compare(const Angle& a, const Angle& b, unsigned max_bits = kDefaultGuardBits);

/// compare() that throws Undecided instead of returning it.
Order compare_strict(const Angle& a, const Angle& b, unsigned max_bits = kDefaultGuardBits);

bool operator==(const Angle& a, const Angle& b);

/// Closed interval [lo, hi] of rationals.
struct Enclosure {
    Rational lo;
    Rational hi;

    bool exact() const { return lo == hi; }
    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

/// [index 2^-depth, (index+1) 2^-depth].
struct DyadicInterval {
    unsigned depth = 0;
    BigInt index = 0;

    Rational lo() const;
    Rational hi() const;
    Rational midpoint() const;
    bool contains(const DyadicInterval& inner) const;

    /// The depth-k interval whose lower end is the truncation of t.
    static DyadicInterval enclosing(const Angle& t, unsigned depth);
};

/// Enclosure of the value of t with width <= 2^-precision (exact when t is
/// known exactly).
Enclosure enclose(const Angle& t, unsigned precision);

/// Circle distance min(|s-t| mod 1, 1 - ...) in [0, 1/2]: exact for exactly
/// known angles, otherwise an enclosure of width <= 2^-precision.
Enclosure dist(const Angle& s, const Angle& t, unsigned precision = kDefaultPrecision);

/// Closed counterclockwise arc from a to b.
class Arc {
public:
    /// Throws Error when a == b (degenerate arcs are rejected).
    Arc(Angle a, Angle b);

    const Angle& a() const { return a_; }
    const Angle& b() const { return b_; }

    /// The complementary arc (b, a).
    Arc complement() const { return Arc(b_, a_); }

    /// True when the arc passes through 0 (a > b as representatives).
    bool wraps() const;

    /// Exact length when both endpoints are known exactly.
    std::optional<Rational> exact_length() const;
    Enclosure length(unsigned precision = kDefaultPrecision) const;

private:
    Angle a_;
    Angle b_;
};

/// Image of an arc under doubling: the arc between the doubled endpoints, or
/// the single doubled endpoint when the two coincide.
std::variant<Arc, Angle> sigma(const Arc& s);

/// The length law of sigma: 2|S| if |S| < 1/2, else 2|S| - 1.
Rational sigma_length(const Rational& length);

enum class ArcMembership { inside, outside, boundary, undecided };

ArcMembership in_arc(const Angle& t, const Arc& s, unsigned precision = kDefaultGuardBits);

/// Parse the angle-spec mini-language:
///   rat:p/q | rat:n | bits:<01> | rule:triangular | rule:squares |
///   rule:periodic:<01> | rule:preperiodic:<01>:<01> | rule:explicit:<01>:<0|1>
/// optionally with a shift suffix "@n" (tau^n) and a digit prefix
/// "pre:<01>/" in front.
Angle parse_angle(std::string_view spec);

std::string to_string(Order o);
std::string to_string(ArcMembership m);

/// Decimal rendering of a rational with `digits` fractional digits (truncated).
std::string decimal(const Rational& x, int digits = 20);
/// "p/q" rendering.
std::string fraction(const Rational& x);

}  // namespace nrp
