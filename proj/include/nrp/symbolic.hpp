#pragma once

// Itineraries with respect to the partition of the circle by the two
// preimages of a base angle, kneading sequences, and finite-depth
// certificates about the orbit of an angle under doubling.

#include "nrp/circle.hpp"

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace nrp {

enum class Side { plus, minus };

std::string to_string(Side s);

/// The two closed half circles cut at theta/2 and (theta+1)/2.  L1 runs
/// counterclockwise from theta/2 to (theta+1)/2 and contains theta; L0 is the
/// other one.
struct HalfCircles {
    Angle low;   // theta/2
    Angle high;  // (theta+1)/2

    explicit HalfCircles(const Angle& theta);

    Arc l1() const { return Arc(low, high); }
    Arc l0() const { return Arc(high, low); }
};

struct ItineraryWord {
    BitWord symbols;
    Angle base;
    Side side = Side::plus;

    std::size_t depth() const { return symbols.size(); }
};

/// One-sided itinerary of t with respect to theta, n symbols.  At a boundary
/// point the + side takes the half containing the counterclockwise-adjacent
/// interval and the - side the clockwise one.  Throws Undecided when a
/// membership cannot be settled within `precision` binary digits.
ItineraryWord itinerary(const Angle& t, const Angle& theta, std::size_t n, Side side,
                        unsigned precision = kDefaultGuardBits);

struct PeriodRefutation {
    std::vector<std::size_t> refuted;
    std::optional<std::size_t> smallest_unrefuted;

    bool all_refuted() const { return !smallest_unrefuted.has_value(); }
};

/// Period p (1 <= p <= p_max) is refuted iff some i < |w| - p has
/// w[i] != w[i+p].  Requires p_max <= |w|/2.
PeriodRefutation refute_periods(const BitWord& w, std::size_t p_max);

struct KneadingPrefix {
    ItineraryWord word;  // the + itinerary of theta
    /// Index of the first symbol where the + and - itineraries of theta
    /// differ; present only when theta is an iterated preimage of itself.
    std::optional<std::size_t> disagreement;
    PeriodRefutation periods;  // refute_periods(word, depth/2)

    bool sides_disagree() const { return disagreement.has_value(); }
};

/// Kneading sequence of theta truncated to n symbols.  theta must not be 0.
KneadingPrefix kneading(const Angle& theta, std::size_t n, unsigned precision = kDefaultGuardBits);

struct NonrecurrenceCertificate {
    std::size_t horizon = 0;
    /// Certified lower bound for min dist(theta, tau^n theta) over the
    /// distinct orbit points 1 <= n <= horizon.
    Rational delta_lower = 0;
    /// Index attaining the bound.
    std::size_t argmin = 0;
    /// First coincidence tau^m theta = tau^n theta (m < n) within the horizon.
    std::optional<std::pair<std::size_t, std::size_t>> periodic_collision;

    bool passes() const { return !periodic_collision && delta_lower > 0; }
};

NonrecurrenceCertificate angle_nonrecurrence(const Angle& theta, std::size_t horizon,
                                             unsigned precision = kDefaultPrecision);

}  // namespace nrp
