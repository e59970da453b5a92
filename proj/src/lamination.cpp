#include "nrp/lamination.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace nrp {

namespace {

// Inverse branch of doubling onto the closed half circle L_symbol.  For
// x != theta the preimage is unique; theta itself has both endpoints of
// L_symbol as preimages and `at_end` picks which one.
struct InverseBranch {
    const Angle& theta;
    const HalfCircles& halves;
    int symbol;
    unsigned precision;

    const Angle& start() const { return symbol == 1 ? halves.low : halves.high; }
    const Angle& end() const { return symbol == 1 ? halves.high : halves.low; }

    Angle operator()(const Angle& x, bool at_end) const
    {
        Order o = compare_strict(x, theta, precision);
        if (o == Order::equal)
            return at_end ? end() : start();
        bool below = o == Order::less;
        // symbol 1: x >= theta -> x/2, x < theta -> (x+1)/2; symbol 0 mirrored
        int digit = (symbol == 1) ? (below ? 1 : 0) : (below ? 0 : 1);
        return x.prepend(digit);
    }
};

void sort_arcs(std::vector<Arc>& arcs, unsigned precision)
{
    std::sort(arcs.begin(), arcs.end(), [precision](const Arc& x, const Arc& y) {
        return compare_strict(x.a(), y.a(), precision) == Order::less;
    });
}

ArcLevel pull_level(const ArcLevel& upper, int symbol, const Angle& theta, const HalfCircles& halves,
                    unsigned precision)
{
    InverseBranch g{theta, halves, symbol, precision};
    ArcLevel out;
    if (upper.full_circle) {
        out.arcs.emplace_back(g.start(), g.end());
        return out;
    }
    out.arcs.reserve(upper.arcs.size() + 1);
    for (const Arc& arc : upper.arcs) {
        ArcMembership m = in_arc(theta, arc, precision);
        if (m == ArcMembership::undecided)
            throw Undecided("pullback: position of the base angle relative to an arc is undecided");
        if (m == ArcMembership::inside) {
            out.arcs.emplace_back(g(arc.a(), false), g.end());
            out.arcs.emplace_back(g.start(), g(arc.b(), true));
        } else {
            out.arcs.emplace_back(g(arc.a(), false), g(arc.b(), true));
        }
    }
    sort_arcs(out.arcs, precision);
    return out;
}

}  // namespace

std::optional<Rational> ArcLevel::exact_length() const
{
    if (full_circle)
        return Rational(1);
    Rational total = 0;
    for (const auto& a : arcs) {
        auto l = a.exact_length();
        if (!l)
            return std::nullopt;
        total += *l;
    }
    return total;
}

bool ArcLevel::contains(const Angle& t) const
{
    if (full_circle)
        return true;
    for (const auto& a : arcs) {
        auto m = in_arc(t, a);
        if (m == ArcMembership::inside || m == ArcMembership::boundary)
            return true;
        if (m == ArcMembership::undecided)
            throw Undecided("membership of " + t.spec() + " in a realization set is undecided");
    }
    return false;
}

ItineraryArcSystem pullback(const BitWord& w, const Angle& theta, const PullbackOptions& opts)
{
    if (w.empty())
        throw std::invalid_argument("pullback: word must be non-empty");
    HalfCircles halves(theta);
    ItineraryArcSystem sys{w, theta, std::vector<ArcLevel>(w.size() + 1)};
    sys.levels[w.size()].full_circle = true;
    for (std::size_t k = w.size(); k-- > 0;) {
        sys.levels[k] = pull_level(sys.levels[k + 1], w[k], theta, halves, opts.precision);
        if (sys.levels[k].arcs.size() > opts.arc_cap)
            throw ArcCapExceeded(opts.arc_cap, k);
    }
    return sys;
}

ArcLevel realization(const BitWord& w, const Angle& theta, const PullbackOptions& opts)
{
    if (w.empty())
        throw std::invalid_argument("realization: word must be non-empty");
    HalfCircles halves(theta);
    ArcLevel level;
    level.full_circle = true;
    for (std::size_t k = w.size(); k-- > 0;) {
        level = pull_level(level, w[k], theta, halves, opts.precision);
        if (level.arcs.size() > opts.arc_cap)
            throw ArcCapExceeded(opts.arc_cap, k);
    }
    return level;
}

// ----------------------------------------------------------------- Cluster

bool Cluster::is_point() const
{
    return compare(lo, hi) == Order::equal;
}

bool Cluster::contains(const Angle& t) const
{
    if (is_point())
        return compare(t, lo) == Order::equal;
    auto m = in_arc(t, Arc(lo, hi));
    return m == ArcMembership::inside || m == ArcMembership::boundary;
}

DyadicInterval Cluster::enclosure() const
{
    if (is_point())
        return DyadicInterval::enclosing(lo, kDefaultGuardBits);
    if (compare(lo, hi) == Order::greater)
        return DyadicInterval{0, 0};
    unsigned m = 0;
    while (m < kDefaultGuardBits && lo.bit(m + 1) == hi.bit(m + 1))
        ++m;
    return DyadicInterval::enclosing(lo, m);
}

Angle Cluster::representative() const
{
    if (is_point())
        return lo;
    return Angle::rational(enclosure().midpoint());
}

std::string to_string(ClassRole r)
{
    switch (r) {
    case ClassRole::characteristic: return "characteristic";
    case ClassRole::critical: return "critical";
    case ClassRole::forward_image: return "forward-image";
    case ClassRole::generic: return "generic";
    }
    return {};
}

std::size_t LaminationClass::find(const Angle& t) const
{
    for (std::size_t i = 0; i < clusters.size(); ++i)
        if (clusters[i].contains(t))
            return i;
    return clusters.size();
}

// ------------------------------------------------------------ tick geometry
//
// Cluster endpoints are enclosed on a circle of 2^64 ticks using their
// 64-digit heads; unsigned wraparound is the circle arithmetic.

namespace {

struct TickArc {
    std::uint64_t start;
    std::uint64_t span;  // covers start .. start + span
};

TickArc ticks(const Cluster& c)
{
    return {c.lo.head(), c.hi.head() - c.lo.head() + 1};
}

bool ticks_overlap(const TickArc& a, const TickArc& b)
{
    return b.start - a.start <= a.span || a.start - b.start <= b.span;
}

Rational tick_rational(std::uint64_t t)
{
    BigInt den = 1;
    den <<= 64;
    return Rational(BigInt(t), den);
}

constexpr std::uint64_t kHalfTurn = std::uint64_t{1} << 63;

Enclosure tick_distance(const TickArc& a, const TickArc& b)
{
    if (ticks_overlap(a, b)) {
        std::uint64_t d1 = b.start - a.start;
        std::uint64_t d2 = a.start - b.start;
        std::uint64_t far = std::min(d1, d2) + a.span + b.span;
        return {0, tick_rational(std::min(far, kHalfTurn))};
    }
    std::uint64_t g1 = b.start - (a.start + a.span);
    std::uint64_t g2 = a.start - (b.start + b.span);
    std::uint64_t lo = std::min(g1, g2);
    unsigned __int128 up1 = static_cast<unsigned __int128>(g1) + a.span + b.span;
    unsigned __int128 up2 = static_cast<unsigned __int128>(g2) + a.span + b.span;
    unsigned __int128 up = std::min({up1, up2, static_cast<unsigned __int128>(kHalfTurn)});
    return {tick_rational(std::min(lo, kHalfTurn)), tick_rational(static_cast<std::uint64_t>(up))};
}

// Clusters of the persistent components of `level`, merging neighbours whose
// gap is at most `resolution`.
std::vector<Cluster> group_arcs(const std::vector<Arc>& arcs, const Rational& resolution, unsigned precision)
{
    std::vector<Cluster> out;
    if (arcs.empty())
        return out;
    auto close = [&](const Angle& end, const Angle& next_start) {
        if (compare(end, next_start, precision) == Order::equal)
            return true;
        Enclosure gap = Arc(end, next_start).length(precision);
        return gap.hi <= resolution;
    };
    std::vector<Cluster> groups;
    groups.push_back(Cluster::from_arc(arcs.front()));
    for (std::size_t i = 1; i < arcs.size(); ++i) {
        if (close(groups.back().hi, arcs[i].a()))
            groups.back().hi = arcs[i].b();
        else
            groups.push_back(Cluster::from_arc(arcs[i]));
    }
    if (groups.size() > 1 && close(groups.back().hi, groups.front().lo)) {
        groups.front().lo = groups.back().lo;
        groups.pop_back();
        std::rotate(groups.begin(), groups.end() - 1, groups.end());
    }
    return groups;
}

Rational resolution_at(std::size_t bits)
{
    BigInt den = 1;
    den <<= static_cast<unsigned>(bits);
    return Rational(1, den);
}

std::vector<Arc> persistent_arcs(const ArcLevel& shallow, const ArcLevel& deep)
{
    if (shallow.full_circle)
        return {};
    std::vector<Arc> out;
    for (const Arc& arc : shallow.arcs) {
        bool hit = deep.full_circle;
        for (const Arc& d : deep.arcs) {
            auto m = in_arc(d.a(), arc);
            if (m == ArcMembership::inside || m == ArcMembership::boundary) {
                hit = true;
                break;
            }
        }
        if (hit)
            out.push_back(arc);
    }
    return out;
}

BitWord prefix(const BitWord& w, std::size_t n)
{
    return BitWord(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
}

// Every coarse cluster holds exactly one group of fine clusters, where fine
// clusters closer than `resolution` form a group.
bool stable_between(const std::vector<Cluster>& coarse, const std::vector<Cluster>& fine, const Rational& resolution,
                    unsigned precision)
{
    std::vector<Arc> fine_arcs;
    for (const auto& c : fine) {
        if (c.is_point())
            return false;
        fine_arcs.emplace_back(c.lo, c.hi);
    }
    auto groups = group_arcs(fine_arcs, resolution, precision);
    if (groups.size() != coarse.size())
        return false;
    for (const auto& c : coarse) {
        std::size_t inside = 0;
        for (const auto& g : groups)
            if (c.contains(g.lo) && c.contains(g.hi))
                ++inside;
        if (inside != 1)
            return false;
    }
    return true;
}

}  // namespace

LaminationClass class_of_word(const BitWord& word, const Angle& theta, std::size_t depth, ClassRole role,
                              const ClassOptions& opts)
{
    if (depth == 0)
        throw std::invalid_argument("class_of_word: depth must be positive");
    std::size_t horizon = opts.horizon == 0 ? 2 * depth : opts.horizon;
    if (horizon < depth)
        throw std::invalid_argument("class_of_word: horizon shorter than depth");
    if (word.size() < horizon)
        throw std::invalid_argument("class_of_word: word shorter than horizon");

    // arc endpoints carry up to `horizon` prepended digits, so comparisons
    // need at least that many plus a guard
    PullbackOptions pb = opts.pullback;
    pb.precision = std::max<unsigned>(pb.precision, static_cast<unsigned>(horizon) + 64);
    ArcLevel shallow = realization(prefix(word, depth), theta, pb);
    ArcLevel deep = horizon == depth ? shallow : realization(prefix(word, horizon), theta, pb);

    LaminationClass cls;
    cls.depth = depth;
    cls.horizon = horizon;
    cls.role = role;
    cls.converged = true;
    cls.clusters = group_arcs(persistent_arcs(shallow, deep), resolution_at(depth + opts.merge_bits), pb.precision);
    if (cls.clusters.empty()) {
        cls.converged = false;
        cls.diagnostic = "no persistent component";
    }
    return cls;
}

namespace {

void screen_angle(const Angle& theta, std::size_t horizon)
{
    auto cert = angle_nonrecurrence(theta, horizon);
    if (cert.periodic_collision)
        throw PreconditionFailed("angle " + theta.spec() + " is eventually periodic: tau^" +
                                 std::to_string(cert.periodic_collision->first) + " = tau^" +
                                 std::to_string(cert.periodic_collision->second));
}

BitWord kneading_word(const Angle& theta, std::size_t n, unsigned precision)
{
    return itinerary(theta, theta, n, Side::plus, precision).symbols;
}

}  // namespace

LaminationClass characteristic_class(const Angle& theta, std::size_t depth, const ClassOptions& opts)
{
    if (depth < 2)
        throw std::invalid_argument("characteristic_class: depth must be at least 2");
    std::size_t horizon = opts.horizon == 0 ? 2 * depth : opts.horizon;
    screen_angle(theta, horizon);
    BitWord nu = kneading_word(theta, horizon, opts.pullback.precision);

    ClassOptions fine_opts = opts;
    fine_opts.horizon = horizon;
    LaminationClass cls = class_of_word(nu, theta, depth, ClassRole::characteristic, fine_opts);
    if (cls.find(theta) == cls.size()) {
        cls.converged = false;
        cls.diagnostic = "theta is not contained in its own class";
        return cls;
    }

    std::size_t half = depth / 2;
    LaminationClass coarse = class_of_word(nu, theta, half, ClassRole::characteristic, fine_opts);
    bool stable = stable_between(coarse.clusters, cls.clusters, resolution_at(half), opts.pullback.precision);
    if (!stable) {
        cls.converged = false;
        cls.diagnostic = "cluster count or positions changed between depth " + std::to_string(half) + " (" +
                         std::to_string(coarse.size()) + " clusters) and depth " + std::to_string(depth) + " (" +
                         std::to_string(cls.size()) + " clusters)";
    }
    if (cls.size() > 2) {
        cls.converged = false;
        cls.diagnostic = "more than two persistent clusters (" + std::to_string(cls.size()) + ")";
    }
    return cls;
}

LaminationClass critical_class(const LaminationClass& characteristic)
{
    LaminationClass out;
    out.depth = characteristic.depth + 1;
    out.horizon = characteristic.horizon + 1;
    out.converged = characteristic.converged;
    out.diagnostic = characteristic.diagnostic;
    out.role = ClassRole::critical;
    std::vector<Arc> arcs;
    std::vector<Cluster> points;
    for (const auto& c : characteristic.clusters) {
        if (c.is_point()) {
            auto [h0, h1] = c.lo.halves();
            points.push_back(Cluster::point(h0));
            points.push_back(Cluster::point(h1));
            continue;
        }
        bool wraps = compare(c.lo, c.hi) == Order::greater;
        // preimages of [lo, hi]: [lo/2, lo/2 + |S|/2] and its antipode
        out.clusters.push_back({c.lo.prepend(0), c.hi.prepend(wraps ? 1 : 0)});
        out.clusters.push_back({c.lo.prepend(1), c.hi.prepend(wraps ? 0 : 1)});
    }
    out.clusters.insert(out.clusters.end(), points.begin(), points.end());
    std::sort(out.clusters.begin(), out.clusters.end(), [](const Cluster& x, const Cluster& y) {
        return compare_strict(x.lo, y.lo) == Order::less;
    });
    return out;
}

LaminationClass critical_class(const Angle& theta, std::size_t depth, const ClassOptions& opts)
{
    LaminationClass a = characteristic_class(theta, depth, opts);
    if (!a.converged)
        throw PreconditionFailed("critical_class: characteristic class did not converge: " + a.diagnostic);
    return critical_class(a);
}

LaminationClass forward_image(const Angle& theta, std::size_t depth, std::size_t k, const ClassOptions& opts)
{
    std::size_t horizon = opts.horizon == 0 ? 2 * depth : opts.horizon;
    BitWord nu = kneading_word(theta, horizon + k, opts.pullback.precision);
    BitWord shifted(nu.begin() + static_cast<std::ptrdiff_t>(k), nu.end());
    ClassOptions o = opts;
    o.horizon = horizon;
    return class_of_word(shifted, theta, depth, k == 0 ? ClassRole::characteristic : ClassRole::forward_image, o);
}

std::vector<Cluster> double_clusters(const std::vector<Cluster>& clusters)
{
    std::vector<Cluster> images;
    for (const auto& c : clusters)
        images.push_back({c.lo.doubled(), c.hi.doubled()});
    std::sort(images.begin(), images.end(), [](const Cluster& x, const Cluster& y) {
        return compare_strict(x.lo, y.lo) == Order::less;
    });
    // rejoin images that share an endpoint
    std::vector<Cluster> out;
    for (auto& c : images) {
        if (!out.empty() && compare(out.back().hi, c.lo) == Order::equal)
            out.back().hi = c.hi;
        else
            out.push_back(c);
    }
    if (out.size() > 1 && compare(out.back().hi, out.front().lo) == Order::equal) {
        out.front().lo = out.back().lo;
        out.pop_back();
        std::rotate(out.begin(), out.end() - 1, out.end());
    }
    return out;
}

std::string to_string(Tri t)
{
    switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::undecided: return "undecided";
    }
    return {};
}

namespace {

// Position of a point relative to the clusters of A: the index of the open
// gap (A_i.hi, A_{i+1}.lo) containing it, or -1 if it touches a cluster, or
// -2 if undecided.
long gap_index(const std::vector<Cluster>& a, const Angle& t)
{
    for (const auto& c : a) {
        if (c.is_point()) {
            Order o = compare(t, c.lo);
            if (o == Order::equal)
                return -1;
            if (o == Order::undecided)
                return -2;
            continue;
        }
        auto m = in_arc(t, Arc(c.lo, c.hi));
        if (m == ArcMembership::undecided)
            return -2;
        if (m != ArcMembership::outside)
            return -1;
    }
    if (a.size() == 1)
        return 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Angle& from = a[i].hi;
        const Angle& to = a[(i + 1) % a.size()].lo;
        auto m = in_arc(t, Arc(from, to));
        if (m == ArcMembership::undecided)
            return -2;
        if (m == ArcMembership::inside)
            return static_cast<long>(i);
    }
    return -2;
}

}  // namespace

Tri unlinked(const std::vector<Cluster>& a, const std::vector<Cluster>& b)
{
    if (a.empty() || b.empty())
        return Tri::yes;
    long gap = -3;
    bool undecided = false;
    for (const auto& c : b) {
        for (const Angle* end : {&c.lo, &c.hi}) {
            long g = gap_index(a, *end);
            if (g == -2 || g == -1) {
                undecided = true;
                continue;
            }
            if (gap == -3)
                gap = g;
            else if (g != gap)
                return Tri::no;
        }
        // a cluster of B that runs around a cluster of A
        if (!c.is_point()) {
            for (const auto& ac : a) {
                auto m = in_arc(ac.lo, Arc(c.lo, c.hi));
                if (m == ArcMembership::undecided)
                    undecided = true;
                else if (m != ArcMembership::outside)
                    undecided = true;
            }
        }
    }
    return undecided ? Tri::undecided : Tri::yes;
}

Tri unlinked(const LaminationClass& a, const LaminationClass& b)
{
    return unlinked(a.clusters, b.clusters);
}

Enclosure cluster_distance(const Cluster& a, const Cluster& b)
{
    auto ea = a.is_point() ? a.lo.exact() : std::nullopt;
    auto eb = b.is_point() ? b.lo.exact() : std::nullopt;
    if (ea && eb)
        return dist(a.lo, b.lo);
    return tick_distance(ticks(a), ticks(b));
}

Rational class_distance_lower(const LaminationClass& a, const LaminationClass& b)
{
    Rational best = Rational(1, 2);
    for (const auto& x : a.clusters)
        for (const auto& y : b.clusters)
            best = std::min(best, cluster_distance(x, y).lo);
    return best;
}

namespace {

constexpr unsigned kDisjointBits = 1024;

bool outside(const Angle& t, const Cluster& c)
{
    if (c.is_point()) {
        Order o = compare(t, c.lo, kDisjointBits);
        return o == Order::less || o == Order::greater;
    }
    return in_arc(t, Arc(c.lo, c.hi), kDisjointBits) == ArcMembership::outside;
}

// Exact test, used only when the 64-digit heads cannot separate x and y.
bool clusters_disjoint(const Cluster& x, const Cluster& y)
{
    return outside(y.lo, x) && outside(y.hi, x) && outside(x.lo, y);
}

}  // namespace

bool certainly_disjoint(const LaminationClass& a, const LaminationClass& b)
{
    for (const auto& x : a.clusters)
        for (const auto& y : b.clusters)
            if (ticks_overlap(ticks(x), ticks(y)) && !clusters_disjoint(x, y))
                return false;
    return true;
}

ClassOrbit class_orbit(const Angle& theta, std::size_t depth, std::size_t horizon, const ClassOptions& opts)
{
    std::size_t persistence = opts.horizon == 0 ? 2 * depth : opts.horizon;
    ClassOrbit orbit;
    orbit.images.reserve(horizon + 1);
    orbit.images.push_back(characteristic_class(theta, depth, opts));
    BitWord nu = kneading_word(theta, persistence + horizon, opts.pullback.precision);
    ClassOptions o = opts;
    o.horizon = persistence;
    for (std::size_t k = 1; k <= horizon; ++k) {
        BitWord shifted(nu.begin() + static_cast<std::ptrdiff_t>(k),
                        nu.begin() + static_cast<std::ptrdiff_t>(k + persistence));
        orbit.images.push_back(class_of_word(shifted, theta, depth, ClassRole::forward_image, o));
    }
    return orbit;
}

ClassSeparation class_orbit_separation(const ClassOrbit& orbit)
{
    if (orbit.images.empty())
        throw std::invalid_argument("class_orbit_separation: empty orbit");
    if (!orbit.images.front().converged)
        throw PreconditionFailed("class_orbit_separation: characteristic class did not converge: " +
                                 orbit.images.front().diagnostic);
    ClassSeparation out;
    out.delta_lower = Rational(1, 2);
    const auto& base = orbit.images.front();
    for (std::size_t n = 1; n < orbit.images.size(); ++n) {
        Rational d = class_distance_lower(base, orbit.images[n]);
        if (d < out.delta_lower || out.argmin == 0) {
            out.delta_lower = d;
            out.argmin = n;
        }
    }
    for (std::size_t j = 0; j < orbit.images.size(); ++j)
        for (std::size_t k = j + 1; k < orbit.images.size(); ++k)
            if (!certainly_disjoint(orbit.images[j], orbit.images[k]))
                ++out.overlapping_pairs;
    out.wandering_ok = out.overlapping_pairs == 0;
    return out;
}

ClassSeparation class_orbit_separation(const Angle& theta, std::size_t depth, std::size_t horizon,
                                       const ClassOptions& opts)
{
    return class_orbit_separation(class_orbit(theta, depth, horizon, opts));
}

ShortestArcReport shortest_arc_check(const ClassOrbit& orbit)
{
    if (orbit.images.empty())
        throw std::invalid_argument("shortest_arc_check: empty orbit");
    ShortestArcReport out;
    const auto& base = orbit.images.front();
    if (base.size() == 1) {
        out.ok = true;
        out.vacuous = true;
        return out;
    }
    if (base.size() != 2)
        throw PreconditionFailed("shortest_arc_check: characteristic class has " + std::to_string(base.size()) +
                                 " clusters");
    out.s1 = cluster_distance(base.clusters[0], base.clusters[1]);
    out.ok = true;
    bool have = false;
    for (std::size_t k = 1; k < orbit.images.size(); ++k) {
        const auto& img = orbit.images[k];
        if (img.size() != 2) {
            out.ok = false;
            out.worst_index = k + 1;
            break;
        }
        // min(|S^+_k|, |S^-_k|) is the circle distance between the two members
        Enclosure d = cluster_distance(img.clusters[0], img.clusters[1]);
        if (!have || d.lo < out.worst.lo) {
            out.worst = d;
            out.worst_index = k + 1;
            have = true;
        }
        if (d.lo < out.s1.hi)
            out.ok = false;
    }
    return out;
}

ShortestArcReport shortest_arc_check(const Angle& theta, std::size_t horizon, std::size_t depth,
                                     const ClassOptions& opts)
{
    return shortest_arc_check(class_orbit(theta, depth, horizon, opts));
}

}  // namespace nrp
