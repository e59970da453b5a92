#include "nrp/symbolic.hpp"

#include <map>
#include <stdexcept>

namespace nrp {

std::string to_string(Side s)
{
    return s == Side::plus ? "+" : "-";
}

HalfCircles::HalfCircles(const Angle& theta)
    : low(theta.prepend(0)), high(theta.prepend(1))
{
}

namespace {

int symbol_at(const Angle& s, const HalfCircles& halves, Side side, unsigned precision)
{
    // low in [0,1/2) and high in [1/2,1), so L1 = [low, high] never wraps.
    Order lo = compare(s, halves.low, precision);
    Order hi = compare(s, halves.high, precision);
    if (lo == Order::undecided || hi == Order::undecided)
        throw Undecided("itinerary: membership of " + s.spec() + " undecided at " + std::to_string(precision) +
                        " binary digits");
    if (lo == Order::equal)
        return side == Side::plus ? 1 : 0;
    if (hi == Order::equal)
        return side == Side::plus ? 0 : 1;
    return (lo == Order::greater && hi == Order::less) ? 1 : 0;
}

}  // namespace

ItineraryWord itinerary(const Angle& t, const Angle& theta, std::size_t n, Side side, unsigned precision)
{
    if (n == 0)
        throw std::invalid_argument("itinerary: depth must be positive");
    HalfCircles halves(theta);
    ItineraryWord out{BitWord(n), theta, side};
    Angle s = t;
    for (std::size_t k = 0; k < n; ++k) {
        out.symbols[k] = static_cast<std::uint8_t>(symbol_at(s, halves, side, precision));
        if (k + 1 < n)
            s = s.doubled();
    }
    return out;
}

PeriodRefutation refute_periods(const BitWord& w, std::size_t p_max)
{
    if (2 * p_max > w.size())
        throw std::invalid_argument("refute_periods: p_max must not exceed |w|/2");
    PeriodRefutation out;
    for (std::size_t p = 1; p <= p_max; ++p) {
        bool refuted = false;
        for (std::size_t i = 0; i + p < w.size(); ++i) {
            if (w[i] != w[i + p]) {
                refuted = true;
                break;
            }
        }
        if (refuted)
            out.refuted.push_back(p);
        else if (!out.smallest_unrefuted)
            out.smallest_unrefuted = p;
    }
    return out;
}

KneadingPrefix kneading(const Angle& theta, std::size_t n, unsigned precision)
{
    if (compare(theta, Angle()) == Order::equal)
        throw std::invalid_argument("kneading: theta = 0 is a fixed point");
    KneadingPrefix out{itinerary(theta, theta, n, Side::plus, precision), std::nullopt, {}};
    ItineraryWord minus = itinerary(theta, theta, n, Side::minus, precision);
    for (std::size_t i = 0; i < n; ++i) {
        if (out.word.symbols[i] != minus.symbols[i]) {
            out.disagreement = i;
            break;
        }
    }
    out.periods = refute_periods(out.word.symbols, n / 2);
    return out;
}

NonrecurrenceCertificate angle_nonrecurrence(const Angle& theta, std::size_t horizon, unsigned precision)
{
    if (horizon == 0)
        throw std::invalid_argument("angle_nonrecurrence: horizon must be positive");
    NonrecurrenceCertificate cert;
    cert.horizon = horizon;

    // Orbit points are keyed by their exact value when known, otherwise by
    // their structural description (lead digits + shift of a rule).
    std::map<std::string, std::size_t> seen;
    auto key = [](const Angle& a) {
        if (auto e = a.exact())
            return "q" + fraction(*e);
        return "s" + a.spec();
    };

    bool have_min = false;
    Angle orbit = theta;
    seen.emplace(key(orbit), 0);
    for (std::size_t n = 1; n <= horizon; ++n) {
        orbit = orbit.doubled();
        auto [it, inserted] = seen.emplace(key(orbit), n);
        if (!inserted) {
            cert.periodic_collision = std::make_pair(it->second, n);
            break;
        }
        Enclosure d = dist(theta, orbit, precision);
        if (!have_min || d.lo < cert.delta_lower) {
            cert.delta_lower = d.lo;
            cert.argmin = n;
            have_min = true;
        }
    }
    return cert;
}

}  // namespace nrp
