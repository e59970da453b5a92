#include "nrp/circle.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace nrp {

namespace mp = boost::multiprecision;

namespace {

BigInt word_value(const BitWord& w)
{
    BigInt v = 0;
    for (auto b : w) {
        v <<= 1;
        v += b;
    }
    return v;
}

BigInt pow2(std::uint64_t n)
{
    BigInt v = 1;
    v <<= static_cast<unsigned>(n);
    return v;
}

Rational frac(const Rational& x)
{
    BigInt n = mp::numerator(x);
    BigInt d = mp::denominator(x);
    BigInt r = n % d;
    if (r < 0)
        r += d;
    return Rational(r, d);
}

BigInt floor_div(const BigInt& n, const BigInt& d)
{
    BigInt q = n / d;
    if ((n % d != 0) && ((n < 0) != (d < 0)))
        --q;
    return q;
}

BigInt floor_of(const Rational& x)
{
    return floor_div(mp::numerator(x), mp::denominator(x));
}

// digit i >= 1 of p/q in [0,1)
int rational_bit(const Rational& v, std::uint64_t i)
{
    const BigInt& q = mp::denominator(v);
    const BigInt& p = mp::numerator(v);
    BigInt r = (p * mp::powm(BigInt(2), BigInt(i - 1), q)) % q;
    return (2 * r >= q) ? 1 : 0;
}

std::uint64_t rational_head(const Rational& v)
{
    BigInt h = (mp::numerator(v) << 64) / mp::denominator(v);
    return static_cast<std::uint64_t>(h);
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n)
        --r;
    while ((r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

bool is_binary_word(std::string_view s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

std::uint64_t parse_u64(std::string_view s, std::string_view what)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    return v;
}

BigInt parse_bigint(std::string_view s, std::string_view what)
{
    std::string_view digits = s;
    if (!digits.empty() && digits.front() == '-')
        digits.remove_prefix(1);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("invalid " + std::string(what) + ": '" + std::string(s) + "'");
    return BigInt(std::string(s));
}

}  // namespace

std::string to_string(const BitWord& w)
{
    std::string s;
    s.reserve(w.size());
    for (auto b : w)
        s.push_back(b ? '1' : '0');
    return s;
}

BitWord parse_bit_word(std::string_view s)
{
    if (!is_binary_word(s))
        throw ParseError("not a 0/1 word: '" + std::string(s) + "'");
    BitWord w;
    w.reserve(s.size());
    for (char c : s)
        w.push_back(c == '1' ? 1 : 0);
    return w;
}

// ---------------------------------------------------------------- BitRule

BitRule::BitRule(Kind kind, BitWord pre, BitWord word, std::string sequence, int fallback)
    : kind_(kind), pre_(std::move(pre)), word_(std::move(word)), sequence_(std::move(sequence)), fallback_(fallback)
{
    switch (kind_) {
    case Kind::periodic: {
        BigInt period_den = pow2(word_.size()) - 1;
        exact_ = frac(Rational(word_value(word_), period_den));
        break;
    }
    case Kind::preperiodic: {
        BigInt period_den = pow2(word_.size()) - 1;
        Rational tail(word_value(word_), period_den);
        exact_ = frac((Rational(word_value(pre_)) + tail) / Rational(pow2(pre_.size())));
        break;
    }
    case Kind::explicit_prefix: {
        Rational v(word_value(pre_), pow2(pre_.size()));
        if (fallback_ == 1)
            v += Rational(1, pow2(pre_.size()));
        exact_ = frac(v);
        break;
    }
    case Kind::positions:
        break;
    }
}

std::shared_ptr<const BitRule> BitRule::periodic(BitWord word)
{
    if (word.empty())
        throw ParseError("periodic rule needs a non-empty word");
    return std::shared_ptr<const BitRule>(new BitRule(Kind::periodic, {}, std::move(word), {}, 0));
}

std::shared_ptr<const BitRule> BitRule::preperiodic(BitWord pre, BitWord word)
{
    if (word.empty())
        throw ParseError("preperiodic rule needs a non-empty periodic word");
    return std::shared_ptr<const BitRule>(new BitRule(Kind::preperiodic, std::move(pre), std::move(word), {}, 0));
}

std::shared_ptr<const BitRule> BitRule::positions(std::string_view sequence)
{
    if (sequence != "triangular" && sequence != "squares")
        throw ParseError("unknown position rule '" + std::string(sequence) + "' (known: triangular, squares)");
    return std::shared_ptr<const BitRule>(new BitRule(Kind::positions, {}, {}, std::string(sequence), 0));
}

std::shared_ptr<const BitRule> BitRule::explicit_prefix(BitWord prefix, int fallback)
{
    if (fallback != 0 && fallback != 1)
        throw ParseError("explicit rule fallback must be 0 or 1");
    return std::shared_ptr<const BitRule>(new BitRule(Kind::explicit_prefix, std::move(prefix), {}, {}, fallback));
}

int BitRule::bit(std::uint64_t i) const
{
    if (i == 0)
        throw std::invalid_argument("binary digits are indexed from 1");
    switch (kind_) {
    case Kind::periodic:
        return word_[(i - 1) % word_.size()];
    case Kind::preperiodic:
        if (i <= pre_.size())
            return pre_[i - 1];
        return word_[(i - 1 - pre_.size()) % word_.size()];
    case Kind::explicit_prefix:
        return i <= pre_.size() ? pre_[i - 1] : fallback_;
    case Kind::positions:
        if (sequence_ == "triangular") {
            // i = k(k+1)/2  <=>  8i+1 is an odd square
            std::uint64_t m = 8 * i + 1;
            std::uint64_t r = isqrt(m);
            return r * r == m ? 1 : 0;
        }
        {
            std::uint64_t r = isqrt(i);
            return r * r == i ? 1 : 0;
        }
    }
    return 0;
}

std::string BitRule::spec() const
{
    switch (kind_) {
    case Kind::periodic:
        return "rule:periodic:" + to_string(word_);
    case Kind::preperiodic:
        return "rule:preperiodic:" + to_string(pre_) + ":" + to_string(word_);
    case Kind::explicit_prefix:
        if (fallback_ == 0)
            return "bits:" + to_string(pre_);
        return "rule:explicit:" + to_string(pre_) + ":1";
    case Kind::positions:
        return "rule:" + sequence_;
    }
    return {};
}

// ------------------------------------------------------------------ Angle

Angle::Angle() : rep_(Rational(0)), head_(0) {}

Angle::Angle(Rational value) : rep_(std::move(value))
{
    compute_head();
}

Angle::Angle(Streamed s) : rep_(std::move(s))
{
    compute_head();
}

Angle Angle::rational(const BigInt& num, const BigInt& den)
{
    if (den <= 0)
        throw std::invalid_argument("denominator must be positive");
    return Angle(frac(Rational(num, den)));
}

Angle Angle::rational(const Rational& value)
{
    return Angle(frac(value));
}

Angle Angle::from_rule(std::shared_ptr<const BitRule> rule)
{
    if (!rule)
        throw std::invalid_argument("null bit rule");
    return Angle(Streamed{std::move(rule), 0, {}});
}

void Angle::compute_head()
{
    if (auto* r = std::get_if<Rational>(&rep_)) {
        head_ = rational_head(*r);
        return;
    }
    std::uint64_t h = 0;
    for (std::uint64_t i = 1; i <= 64; ++i)
        h = (h << 1) | static_cast<std::uint64_t>(bit(i));
    head_ = h;
}

std::optional<Rational> Angle::exact() const
{
    if (auto* r = std::get_if<Rational>(&rep_))
        return *r;
    const auto& s = std::get<Streamed>(rep_);
    const auto& v = s.rule->exact_value();
    if (!v)
        return std::nullopt;
    const BigInt& q = mp::denominator(*v);
    BigInt p = (mp::numerator(*v) * mp::powm(BigInt(2), BigInt(s.offset), q)) % q;
    Rational tail(p, q);
    return (Rational(word_value(s.lead)) + tail) / Rational(pow2(s.lead.size()));
}

int Angle::bit(std::uint64_t i) const
{
    if (i == 0)
        throw std::invalid_argument("binary digits are indexed from 1");
    if (auto* r = std::get_if<Rational>(&rep_)) {
        if (i <= 64)
            return static_cast<int>((head_ >> (64 - i)) & 1U);
        return rational_bit(*r, i);
    }
    const auto& s = std::get<Streamed>(rep_);
    if (i <= s.lead.size())
        return s.lead[i - 1];
    return s.rule->bit(s.offset + (i - s.lead.size()));
}

BitWord Angle::bits(std::size_t n) const
{
    if (n == 0)
        throw std::invalid_argument("bits: n must be positive");
    BitWord w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = static_cast<std::uint8_t>(bit(i + 1));
    return w;
}

Angle Angle::doubled() const
{
    if (auto* r = std::get_if<Rational>(&rep_))
        return Angle(frac(*r * 2));
    Streamed s = std::get<Streamed>(rep_);
    std::uint64_t next = static_cast<std::uint64_t>(bit(65));
    if (!s.lead.empty())
        s.lead.erase(s.lead.begin());
    else
        ++s.offset;
    Angle out;
    out.rep_ = std::move(s);
    out.head_ = (head_ << 1) | next;
    return out;
}

Angle Angle::doubled(std::uint64_t n) const
{
    if (n == 0)
        return *this;
    if (auto* r = std::get_if<Rational>(&rep_)) {
        const BigInt& q = mp::denominator(*r);
        BigInt p = (mp::numerator(*r) * mp::powm(BigInt(2), BigInt(n), q)) % q;
        return Angle(Rational(p, q));
    }
    Streamed s = std::get<Streamed>(rep_);
    if (n <= s.lead.size()) {
        s.lead.erase(s.lead.begin(), s.lead.begin() + static_cast<std::ptrdiff_t>(n));
    } else {
        s.offset += n - s.lead.size();
        s.lead.clear();
    }
    return Angle(std::move(s));
}

Angle Angle::prepend(int b) const
{
    if (b != 0 && b != 1)
        throw std::invalid_argument("prepend: digit must be 0 or 1");
    if (auto* r = std::get_if<Rational>(&rep_))
        return Angle((*r + b) / 2);
    Streamed s = std::get<Streamed>(rep_);
    if (s.lead.empty() && s.offset > 0 && s.rule->bit(s.offset) == b)
        --s.offset;
    else
        s.lead.insert(s.lead.begin(), static_cast<std::uint8_t>(b));
    Angle out;
    out.rep_ = std::move(s);
    out.head_ = (static_cast<std::uint64_t>(b) << 63) | (head_ >> 1);
    return out;
}

std::pair<Angle, Angle> Angle::halves() const
{
    return {prepend(0), prepend(1)};
}

double Angle::approx() const
{
    return std::ldexp(static_cast<double>(head_ >> 11), -53);
}

std::string Angle::spec() const
{
    if (auto* r = std::get_if<Rational>(&rep_))
        return "rat:" + fraction(*r);
    const auto& s = std::get<Streamed>(rep_);
    std::string out;
    if (!s.lead.empty())
        out += "pre:" + to_string(s.lead) + "/";
    out += s.rule->spec();
    if (s.offset > 0)
        out += "@" + std::to_string(s.offset);
    return out;
}

bool Angle::same_structure(const Angle& other) const
{
    const auto* a = std::get_if<Streamed>(&rep_);
    const auto* b = std::get_if<Streamed>(&other.rep_);
    if (!a || !b)
        return false;
    return a->offset == b->offset && a->lead == b->lead &&
           (a->rule == b->rule || a->rule->spec() == b->rule->spec());
}

// ------------------------------------------------------------- comparison

namespace {

Order compare_rational(const Rational& a, const Rational& b)
{
    if (a < b)
        return Order::less;
    if (a > b)
        return Order::greater;
    return Order::equal;
}

}  // namespace

Order compare(const Angle& a, const Angle& b, unsigned max_bits)
{
    auto ea = a.exact();
    auto eb = b.exact();
    if (ea && eb) {
        if (a.is_rational() && b.is_rational() && a.head() != b.head())
            return a.head() < b.head() ? Order::less : Order::greater;
        return compare_rational(*ea, *eb);
    }
    // An exactly known streamed angle may have a non-terminating expansion of
    // a dyadic rational; compare through its canonical rational form instead.
    if (ea && a.is_streamed())
        return compare(Angle::rational(*ea), b, max_bits);
    if (eb && b.is_streamed())
        return compare(a, Angle::rational(*eb), max_bits);

    if (a.head() != b.head())
        return a.head() < b.head() ? Order::less : Order::greater;
    if (a.same_structure(b))
        return Order::equal;
    for (std::uint64_t i = 65; i <= max_bits; ++i) {
        int x = a.bit(i);
        int y = b.bit(i);
        if (x != y)
            return x < y ? Order::less : Order::greater;
    }
    return Order::undecided;
}

Order compare_strict(const Angle& a, const Angle& b, unsigned max_bits)
{
    Order o = compare(a, b, max_bits);
    if (o == Order::undecided)
        throw Undecided("angles " + a.spec() + " and " + b.spec() + " agree to " + std::to_string(max_bits) +
                        " binary digits");
    return o;
}

bool operator==(const Angle& a, const Angle& b)
{
    return compare(a, b) == Order::equal;
}

// -------------------------------------------------------------- intervals

Rational DyadicInterval::lo() const
{
    return Rational(index, pow2(depth));
}

Rational DyadicInterval::hi() const
{
    return Rational(index + 1, pow2(depth));
}

Rational DyadicInterval::midpoint() const
{
    return Rational(2 * index + 1, pow2(depth + 1));
}

bool DyadicInterval::contains(const DyadicInterval& inner) const
{
    if (inner.depth < depth)
        return false;
    return (inner.index >> (inner.depth - depth)) == index;
}

DyadicInterval DyadicInterval::enclosing(const Angle& t, unsigned depth)
{
    DyadicInterval d;
    d.depth = depth;
    if (auto e = t.exact()) {
        d.index = floor_of(*e * Rational(pow2(depth)));
        return d;
    }
    if (depth <= 64) {
        d.index = depth == 0 ? BigInt(0) : BigInt(t.head() >> (64 - depth));
        return d;
    }
    BigInt idx = t.head();
    for (std::uint64_t i = 65; i <= depth; ++i) {
        idx <<= 1;
        idx += t.bit(i);
    }
    d.index = idx;
    return d;
}

Enclosure enclose(const Angle& t, unsigned precision)
{
    if (auto e = t.exact())
        return {*e, *e};
    auto d = DyadicInterval::enclosing(t, precision);
    return {d.lo(), d.hi()};
}

namespace {

// distance from x to the nearest integer
Rational tent(const Rational& x)
{
    Rational f = frac(x);
    return f <= Rational(1, 2) ? f : 1 - f;
}

}  // namespace

Enclosure dist(const Angle& s, const Angle& t, unsigned precision)
{
    if (precision == 0)
        throw std::invalid_argument("dist: precision must be positive");
    auto es = s.exact();
    auto et = t.exact();
    if (es && et) {
        Rational d = tent(*et - *es);
        return {d, d};
    }
    Enclosure a = enclose(s, precision + 1);
    Enclosure b = enclose(t, precision + 1);
    Rational lo = b.lo - a.hi;
    Rational hi = b.hi - a.lo;
    Enclosure out;
    Rational tl = tent(lo);
    Rational th = tent(hi);
    out.lo = std::min(tl, th);
    out.hi = std::max(tl, th);
    // an integer or half-integer strictly inside [lo, hi] is an extremum
    BigInt k = floor_of(hi);
    if (Rational(k) >= lo)
        out.lo = 0;
    BigInt h = floor_of(hi - Rational(1, 2));
    if (Rational(h) + Rational(1, 2) >= lo)
        out.hi = Rational(1, 2);
    return out;
}

// -------------------------------------------------------------------- Arc

Arc::Arc(Angle a, Angle b) : a_(std::move(a)), b_(std::move(b))
{
    if (compare(a_, b_) == Order::equal)
        throw Error("degenerate arc: both endpoints are " + a_.spec());
}

bool Arc::wraps() const
{
    return compare(a_, b_) == Order::greater;
}

std::optional<Rational> Arc::exact_length() const
{
    auto ea = a_.exact();
    auto eb = b_.exact();
    if (!ea || !eb)
        return std::nullopt;
    return frac(*eb - *ea);
}

Enclosure Arc::length(unsigned precision) const
{
    if (auto l = exact_length())
        return {*l, *l};
    Enclosure ea = enclose(a_, precision + 1);
    Enclosure eb = enclose(b_, precision + 1);
    Rational shift = wraps() ? Rational(1) : Rational(0);
    Enclosure out{eb.lo - ea.hi + shift, eb.hi - ea.lo + shift};
    if (out.lo < 0)
        out.lo = 0;
    if (out.hi > 1)
        out.hi = 1;
    return out;
}

std::variant<Arc, Angle> sigma(const Arc& s)
{
    Angle a = s.a().doubled();
    Angle b = s.b().doubled();
    if (compare(a, b) == Order::equal)
        return a;
    return Arc(std::move(a), std::move(b));
}

Rational sigma_length(const Rational& length)
{
    return length < Rational(1, 2) ? 2 * length : 2 * length - 1;
}

ArcMembership in_arc(const Angle& t, const Arc& s, unsigned precision)
{
    Order ca = compare(t, s.a(), precision);
    Order cb = compare(t, s.b(), precision);
    if (ca == Order::equal || cb == Order::equal)
        return ArcMembership::boundary;
    if (ca == Order::undecided || cb == Order::undecided)
        return ArcMembership::undecided;
    Order ab = compare(s.a(), s.b(), precision);
    if (ab == Order::undecided)
        return ArcMembership::undecided;
    bool inside = ab == Order::less ? (ca == Order::greater && cb == Order::less)
                                    : (ca == Order::greater || cb == Order::less);
    return inside ? ArcMembership::inside : ArcMembership::outside;
}

// ---------------------------------------------------------------- parsing

namespace {

Angle parse_base(std::string_view s)
{
    if (s.rfind("rat:", 0) == 0) {
        std::string_view body = s.substr(4);
        auto slash = body.find('/');
        if (slash == std::string_view::npos)  // an integer, i.e. the angle 0
            return Angle::rational(parse_bigint(body, "numerator"), BigInt(1));
        BigInt p = parse_bigint(body.substr(0, slash), "numerator");
        BigInt q = parse_bigint(body.substr(slash + 1), "denominator");
        if (q <= 0)
            throw ParseError("rat: denominator must be positive");
        return Angle::rational(p, q);
    }
    if (s.rfind("bits:", 0) == 0)
        return Angle::from_rule(BitRule::explicit_prefix(parse_bit_word(s.substr(5)), 0));
    if (s.rfind("rule:", 0) == 0) {
        std::string_view body = s.substr(5);
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        for (;;) {
            auto colon = body.find(':', start);
            parts.push_back(body.substr(start, colon - start));
            if (colon == std::string_view::npos)
                break;
            start = colon + 1;
        }
        const auto& name = parts[0];
        if ((name == "triangular" || name == "squares") && parts.size() == 1)
            return Angle::from_rule(BitRule::positions(name));
        if (name == "periodic" && parts.size() == 2)
            return Angle::from_rule(BitRule::periodic(parse_bit_word(parts[1])));
        if (name == "preperiodic" && parts.size() == 3)
            return Angle::from_rule(BitRule::preperiodic(parse_bit_word(parts[1]), parse_bit_word(parts[2])));
        if (name == "explicit" && parts.size() == 3) {
            if (parts[2] != "0" && parts[2] != "1")
                throw ParseError("rule:explicit fallback must be 0 or 1");
            return Angle::from_rule(BitRule::explicit_prefix(parse_bit_word(parts[1]), parts[2] == "1" ? 1 : 0));
        }
        throw ParseError("unknown or malformed rule '" + std::string(s) + "'");
    }
    throw ParseError("unrecognised angle spec '" + std::string(s) + "'");
}

}  // namespace

Angle parse_angle(std::string_view spec)
{
    std::string_view s = spec;
    BitWord lead;
    if (s.rfind("pre:", 0) == 0) {
        auto slash = s.find('/');
        if (slash == std::string_view::npos)
            throw ParseError("pre: expects pre:<01>/<angle>");
        lead = parse_bit_word(s.substr(4, slash - 4));
        s = s.substr(slash + 1);
    }
    std::uint64_t shift = 0;
    if (auto at = s.rfind('@'); at != std::string_view::npos) {
        shift = parse_u64(s.substr(at + 1), "shift");
        s = s.substr(0, at);
    }
    Angle a = parse_base(s).doubled(shift);
    for (auto it = lead.rbegin(); it != lead.rend(); ++it)
        a = a.prepend(*it);
    return a;
}

std::string to_string(Order o)
{
    switch (o) {
    case Order::less: return "less";
    case Order::equal: return "equal";
    case Order::greater: return "greater";
    case Order::undecided: return "undecided";
    }
    return {};
}

std::string to_string(ArcMembership m)
{
    switch (m) {
    case ArcMembership::inside: return "inside";
    case ArcMembership::outside: return "outside";
    case ArcMembership::boundary: return "boundary";
    case ArcMembership::undecided: return "undecided";
    }
    return {};
}

std::string decimal(const Rational& x, int digits)
{
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i)
        scale *= 10;
    bool negative = x < 0;
    Rational ax = negative ? Rational(-x) : x;
    BigInt whole = floor_of(ax);
    BigInt fracpart = floor_of((ax - Rational(whole)) * Rational(scale));
    std::string f = fracpart.str();
    if (static_cast<int>(f.size()) < digits)
        f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
    std::string out = (negative ? "-" : "") + whole.str();
    if (digits > 0)
        out += "." + f;
    return out;
}

std::string fraction(const Rational& x)
{
    return mp::numerator(x).str() + "/" + mp::denominator(x).str();
}

}  // namespace nrp
