#pragma once

// Finite-depth classes of the equivalence relation generated by an angle.
//
// The realization set of an itinerary prefix w (all t whose orbit visits the
// closed half circles L_{w_0}, L_{w_1}, ...) is built by pulling the full
// circle back through the inverse branches of doubling.  Classes are the
// components of that set that persist to a deeper horizon, grouped into
// clusters.

#include "nrp/circle.hpp"
#include "nrp/symbolic.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace nrp {

/// One level X_k of a pullback: a union of disjoint closed arcs sorted by
/// their starting angle, or the whole circle.
struct ArcLevel {
    bool full_circle = false;
    std::vector<Arc> arcs;

    /// Exact total length when all endpoints are exact.
    std::optional<Rational> exact_length() const;
    bool contains(const Angle& t) const;
};

/// Levels X_n (full circle), ..., X_0 for a word w of length n.  levels[k]
/// is X_k.
struct ItineraryArcSystem {
    BitWord word;
    Angle base;
    std::vector<ArcLevel> levels;

    const ArcLevel& realization() const { return levels.front(); }
};

class ArcCapExceeded : public Error {
public:
    ArcCapExceeded(std::size_t cap, std::size_t level)
        : Error("pullback exceeded " + std::to_string(cap) + " arcs at level " + std::to_string(level)),
          achieved_level(level)
    {
    }
    std::size_t achieved_level;
};

struct PullbackOptions {
    std::size_t arc_cap = 4096;
    unsigned precision = kDefaultGuardBits;
};

ItineraryArcSystem pullback(const BitWord& w, const Angle& theta, const PullbackOptions& opts = {});

/// X_0 only, without keeping intermediate levels.
ArcLevel realization(const BitWord& w, const Angle& theta, const PullbackOptions& opts = {});

/// A closed arc [lo, hi] grouping nearby components of a realization set, or
/// a single exact point when lo == hi.
struct Cluster {
    Angle lo;
    Angle hi;

    static Cluster point(const Angle& t) { return {t, t}; }
    static Cluster from_arc(const Arc& a) { return {a.a(), a.b()}; }

    bool is_point() const;
    bool contains(const Angle& t) const;
    /// Smallest dyadic interval containing the cluster (depth 0 if it wraps).
    DyadicInterval enclosure() const;
    /// Midpoint of enclosure(), or the point itself.
    Angle representative() const;
};

enum class ClassRole { characteristic, critical, forward_image, generic };

std::string to_string(ClassRole r);

struct LaminationClass {
    std::vector<Cluster> clusters;
    std::size_t depth = 0;
    std::size_t horizon = 0;
    bool converged = false;
    ClassRole role = ClassRole::generic;
    std::string diagnostic;

    std::size_t size() const { return clusters.size(); }
    /// Index of the cluster containing t, or size() if none.
    std::size_t find(const Angle& t) const;
};

struct ClassOptions {
    /// Persistence horizon; 0 means twice the depth.
    std::size_t horizon = 0;
    /// Components closer than 2^-(depth + merge_bits) are merged.
    unsigned merge_bits = 8;
    PullbackOptions pullback;
};

/// Persistent clusters of the realization set of word[0, depth), where a
/// component persists if it meets the realization set of word[0, horizon).
/// `word` must have at least `horizon` symbols.
LaminationClass class_of_word(const BitWord& word, const Angle& theta, std::size_t depth, ClassRole role,
                              const ClassOptions& opts = {});

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

/// The class A_theta containing theta.  Requires theta not to collide with
/// its own orbit within twice the depth.  converged is set when the cluster
/// count and positions agree between depth/2 and depth at resolution
/// 2^-(depth/2), and at most two clusters survive.
LaminationClass characteristic_class(const Angle& theta, std::size_t depth, const ClassOptions& opts = {});

/// C_theta: the full preimage of the clusters of a characteristic class.
LaminationClass critical_class(const LaminationClass& characteristic);
LaminationClass critical_class(const Angle& theta, std::size_t depth, const ClassOptions& opts = {});

/// tau^k(A_theta), computed as the class of the k-times shifted kneading word.
LaminationClass forward_image(const Angle& theta, std::size_t depth, std::size_t k, const ClassOptions& opts = {});

/// Images of each cluster under doubling, touching images merged.
std::vector<Cluster> double_clusters(const std::vector<Cluster>& clusters);

enum class Tri { yes, no, undecided };

std::string to_string(Tri t);

/// True iff the convex hulls of A and B are disjoint: all of B lies in one
/// complementary arc of A.
Tri unlinked(const LaminationClass& a, const LaminationClass& b);
Tri unlinked(const std::vector<Cluster>& a, const std::vector<Cluster>& b);

/// Certified enclosure of the circle distance between two clusters
/// (0 lower bound when they may overlap).
Enclosure cluster_distance(const Cluster& a, const Cluster& b);

/// Lower bound for the distance between two classes (min over cluster pairs).
Rational class_distance_lower(const LaminationClass& a, const LaminationClass& b);

/// Certified disjointness of two classes.
bool certainly_disjoint(const LaminationClass& a, const LaminationClass& b);

/// A_1 = A_theta, A_2 = tau(A_theta), ..., A_{N+1}.
struct ClassOrbit {
    std::vector<LaminationClass> images;
};

ClassOrbit class_orbit(const Angle& theta, std::size_t depth, std::size_t horizon, const ClassOptions& opts = {});

struct ClassSeparation {
    Rational delta_lower = 0;   // min over 1 <= n <= N of dist(A_theta, tau^n A_theta)
    std::size_t argmin = 0;
    bool wandering_ok = false;  // all A_j, A_k (j < k <= N+1) certified disjoint
    std::size_t overlapping_pairs = 0;
};

ClassSeparation class_orbit_separation(const ClassOrbit& orbit);
ClassSeparation class_orbit_separation(const Angle& theta, std::size_t depth, std::size_t horizon,
                                       const ClassOptions& opts = {});

struct ShortestArcReport {
    bool ok = false;
    bool vacuous = false;  // #A_theta == 1
    Enclosure s1;          // |S^+_1|
    std::size_t worst_index = 0;
    Enclosure worst;       // smallest min(|S^+_k|, |S^-_k|) found, k >= 2
};

/// |S^+_1| <= |S^+_k|, |S^-_k| for 2 <= k <= N+1 where S^+_1 is the shorter
/// arc cut by A_theta = {theta, eta}.
ShortestArcReport shortest_arc_check(const ClassOrbit& orbit);
ShortestArcReport shortest_arc_check(const Angle& theta, std::size_t horizon, std::size_t depth = 64,
                                     const ClassOptions& opts = {});

}  // namespace nrp
