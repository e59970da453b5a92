#include "nrp/verify.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace nrp {

// ------------------------------------------------------------------ config

namespace {

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_uint(const std::string& key, const std::string& v)
{
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ParseError("config: " + key + " expects a non-negative integer, got '" + v + "'");
    return out;
}

double parse_real(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    double out = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
        throw ParseError("config: " + key + " expects a real number, got '" + v + "'");
    return out;
}

double parse_positive(const std::string& key, const std::string& v)
{
    double x = parse_real(key, v);
    if (!(x > 0))
        throw ParseError("config: " + key + " must be positive");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ParseError("config: " + key + " expects true or false, got '" + v + "'");
}

}  // namespace

// ---------------------------------------------------------------- serialisation

Json complex_json(Complex z)
{
    return Json::array({z.real(), z.imag()});
}

Json rational_json(const Rational& x)
{
    return Json{{"decimal", decimal(x, 12)}, {"value", x.convert_to<double>()}};
}

Json cluster_json(const Cluster& c)
{
    return Json{{"lo", c.lo.spec()}, {"hi", c.hi.spec()}, {"lo_approx", c.lo.approx()}, {"hi_approx", c.hi.approx()}};
}

Json trace_json(const RayTraceResult& t)
{
    return Json{{"converged", t.converged},
                {"truncated", t.truncated},
                {"tail_diameter", t.tail_diameter},
                {"final_log2_potential", t.final_log2_potential()},
                {"samples", t.samples.size()},
                {"angle_bits_consumed", t.angle_bits_consumed},
                {"near_critical", t.near_critical},
                {"diagnostic", t.diagnostic}};
}

Json class_json(const LaminationClass& a)
{
    Json clusters = Json::array();
    for (const auto& cl : a.clusters)
        clusters.push_back(cluster_json(cl));
    return Json{{"role", to_string(a.role)},
                {"depth", a.depth},
                {"horizon", a.horizon},
                {"converged", a.converged},
                {"size", a.size()},
                {"diagnostic", a.diagnostic},
                {"clusters", clusters}};
}

void VerifyConfig::set(const std::string& key, const std::string& value)
{
    auto positive_size = [&](std::size_t& field) {
        std::uint64_t v = parse_uint(key, value);
        if (v == 0)
            throw ParseError("config: " + key + " must be positive");
        field = static_cast<std::size_t>(v);
    };
    if (key == "angle")
        angles.push_back(value);
    else if (key == "class_depth")
        positive_size(class_depth);
    else if (key == "angle_horizon")
        positive_size(angle_horizon);
    else if (key == "orbit_horizon")
        positive_size(orbit_horizon);
    else if (key == "class_orbit_horizon")
        positive_size(class_orbit_horizon);
    else if (key == "cycle_period") {
        std::uint64_t p = parse_uint(key, value);
        if (p < 1 || p > 8)
            throw ParseError("config: cycle_period must be in [1, 8]");
        cycle_period = static_cast<int>(p);
    } else if (key == "char_tol")
        char_tol = parse_positive(key, value);
    else if (key == "param_tol")
        param_tol = parse_positive(key, value);
    else if (key == "drift_factor")
        drift_factor = parse_positive(key, value);
    else if (key == "g_start")
        schedule.start_log2 = std::log2(parse_positive(key, value));
    else if (key == "g_floor")
        schedule.floor_log2 = std::log2(parse_positive(key, value));
    else if (key == "floor_log2")
        schedule.floor_log2 = parse_real(key, value);
    else if (key == "subdivisions") {
        std::uint64_t k = parse_uint(key, value);
        if (k < 1 || k > 1024)
            throw ParseError("config: subdivisions must be in [1, 1024]");
        schedule.subdivisions = static_cast<int>(k);
    } else if (key == "max_steps")
        positive_size(schedule.max_steps);
    else if (key == "newton_tol")
        trace.newton_tol = parse_positive(key, value);
    else if (key == "max_newton")
        trace.max_newton = static_cast<int>(parse_uint(key, value));
    else if (key == "max_halvings")
        trace.max_halvings = static_cast<int>(parse_uint(key, value));
    else if (key == "work_radius")
        trace.log_work_radius = std::log(parse_positive(key, value));
    else if (key == "critical_guard")
        trace.critical_guard = parse_positive(key, value);
    else if (key == "landing_tol")
        trace.landing_tol = parse_positive(key, value);
    else if (key == "landing_window")
        positive_size(trace.landing_window);
    else if (key == "shadow_subdivisions") {
        std::uint64_t k = parse_uint(key, value);
        if (k < 1 || k > 1024)
            throw ParseError("config: shadow_subdivisions must be in [1, 1024]");
        shadow_subdivisions = static_cast<int>(k);
    } else if (key == "cycle_grid") {
        std::uint64_t g = parse_uint(key, value);
        if (g < 2 || g > 4096)
            throw ParseError("config: cycle_grid must be in [2, 4096]");
        cycles.grid = static_cast<int>(g);
    } else if (key == "cycle_tol")
        cycles.tol = parse_positive(key, value);
    else if (key == "seed")
        seed = parse_uint(key, value);
    else if (key == "controls")
        controls = static_cast<std::size_t>(parse_uint(key, value));
    else if (key == "control_max_denominator") {
        control_max_denominator = parse_uint(key, value);
        if (control_max_denominator < 3)
            throw ParseError("config: control_max_denominator must be at least 3");
    } else if (key == "threads")
        threads = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "chain_converse")
        chain_converse = parse_bool(key, value);
    else
        throw ParseError("config: unknown key '" + key + "'");
}

Json VerifyConfig::to_json() const
{
    return Json{{"class_depth", class_depth},
                {"angle_horizon", angle_horizon},
                {"orbit_horizon", orbit_horizon},
                {"class_orbit_horizon", class_orbit_horizon},
                {"cycle_period", cycle_period},
                {"char_tol", char_tol},
                {"param_tol", param_tol},
                {"drift_factor", drift_factor},
                {"g_start", std::exp2(schedule.start_log2)},
                {"floor_log2", schedule.floor_log2},
                {"subdivisions", schedule.subdivisions},
                {"max_steps", schedule.max_steps},
                {"newton_tol", trace.newton_tol},
                {"max_newton", trace.max_newton},
                {"max_halvings", trace.max_halvings},
                {"work_radius", std::exp(trace.log_work_radius)},
                {"critical_guard", trace.critical_guard},
                {"landing_tol", trace.landing_tol},
                {"landing_window", trace.landing_window},
                {"shadow_subdivisions", shadow_subdivisions},
                {"cycle_grid", cycles.grid},
                {"cycle_tol", cycles.tol},
                {"seed", seed},
                {"controls", controls},
                {"control_max_denominator", control_max_denominator},
                {"chain_converse", chain_converse},
                {"angles", angles}};
}

VerifyConfig parse_config(std::istream& in, VerifyConfig base)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        std::string body = trim(line);
        if (body.empty())
            continue;
        auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(body).substr(0, eq));
        std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty())
            throw ParseError("config line " + std::to_string(lineno) + ": empty key");
        try {
            base.set(key, value);
        } catch (const ParseError& e) {
            throw ParseError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    base.schedule.validate();
    return base;
}

VerifyConfig load_config(const std::string& path, VerifyConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open config file '" + path + "'");
    return parse_config(in, std::move(base));
}

// ----------------------------------------------------------------- reports

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::inconclusive:
        return "inconclusive";
    }
    return "?";
}

std::string to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::pass:
        return "pass";
    case CheckStatus::fail:
        return "fail";
    case CheckStatus::inconclusive:
        return "inconclusive";
    case CheckStatus::skipped:
        return "skipped";
    }
    return "?";
}

std::string to_string(CheckCategory c)
{
    switch (c) {
    case CheckCategory::screening:
        return "screening";
    case CheckCategory::combinatorial:
        return "combinatorial";
    case CheckCategory::numerical:
        return "numerical";
    }
    return "?";
}

const Check* TheoremReport::find(const std::string& name) const
{
    for (const auto& c : checks)
        if (c.name == name)
            return &c;
    return nullptr;
}

void TheoremReport::conclude()
{
    bool any_fail = false;
    bool any_open = false;
    reasons.clear();
    for (const auto& c : checks) {
        if (c.status == CheckStatus::fail) {
            any_fail = true;
            reasons.push_back(c.name + " failed: " + c.detail);
        } else if (c.status == CheckStatus::inconclusive) {
            any_open = true;
            reasons.push_back(c.name + " inconclusive: " + c.detail);
        }
    }
    verdict = any_fail ? Verdict::fail : any_open ? Verdict::inconclusive : Verdict::pass;
}

std::string preamble()
{
    return "Finite-depth, double-precision evidence, not a proof: every check inspects finitely many "
           "iterates, digits or ray samples. Screening checks test the hypotheses, combinatorial checks "
           "use exact arithmetic on angles, numerical checks use floating point. The converse is only "
           "exercised at parameters that are supplied or produced by a forward run, never over all "
           "non-recurrent parameters.";
}

Json TheoremReport::to_json() const
{
    Json checks_json = Json::array();
    for (const auto& c : checks)
        checks_json.push_back(Json{{"name", c.name},
                                   {"category", nrp::to_string(c.category)},
                                   {"status", nrp::to_string(c.status)},
                                   {"detail", c.detail}});
    Json j{{"schema_version", kSchemaVersion},
           {"mode", mode},
           {"angle_spec", angle_spec},
           {"angle_certificate", angle_certificate},
           {"class_summary", class_summary},
           {"param_landing", param_landing},
           {"dynamical_landing", dynamical_landing},
           {"param_certificate", param_certificate},
           {"cycles", cycles}};
    if (mode == "converse")
        j["candidates"] = candidates;
    j["checks"] = checks_json;
    j["verdict"] = nrp::to_string(verdict);
    j["reasons"] = reasons;
    j["notes"] = notes;
    j["preamble"] = preamble();
    return j;
}

// ---------------------------------------------------------------- pipeline

namespace {

constexpr double kExteriorSlack = 1e-9;

void add(TheoremReport& r, std::string name, CheckCategory cat, CheckStatus st, std::string detail)
{
    r.checks.push_back({std::move(name), cat, st, std::move(detail)});
}

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

PotentialSchedule shadow_schedule(const VerifyConfig& cfg)
{
    PotentialSchedule s = cfg.schedule;
    s.subdivisions = cfg.shadow_subdivisions;
    return s;
}

// Critical-orbit evidence for c.  With an angle, the orbit is shadowed by
// landing points of dynamical rays; otherwise iterated directly.
void orbit_evidence(TheoremReport& r, const Parameter& c, const std::optional<Angle>& angle,
                    const VerifyConfig& cfg, CheckCategory cat)
{
    OrbitDiagnostics direct = critical_orbit_separation(c, cfg.orbit_horizon);
    Json direct_json{{"escaped", direct.escaped},
                     {"escape_index", direct.escape_index ? Json(*direct.escape_index) : Json(nullptr)},
                     {"delta", direct.min_critical_distance},
                     {"argmin", direct.argmin}};
    // exterior criterion, with slack for ray samples that round to just past the tip
    if (std::abs(c.value()) > 2 + kExteriorSlack) {
        r.param_certificate = Json{{"method", "none"}, {"direct_iteration", direct_json}};
        add(r, "critical_orbit_separation", cat, CheckStatus::fail, "|c| > 2: c lies outside the Mandelbrot set");
        return;
    }
    if (angle) {
        ShadowOrbit sh = shadow_critical_orbit(c, *angle, cfg.orbit_horizon, shadow_schedule(cfg), cfg.trace);
        OrbitDiagnostics d = orbit_separation(sh.points);
        r.param_certificate = Json{{"method", "ray-shadowed orbit"},
                                   {"horizon", cfg.orbit_horizon},
                                   {"delta", d.min_critical_distance},
                                   {"argmin", d.argmin},
                                   {"delta_at_tenth", d.min_at_tenth},
                                   {"drift", d.drift},
                                   {"shadow_truncated", sh.truncated},
                                   {"shadow_unconverged", sh.unconverged},
                                   {"escaped", false},
                                   {"direct_iteration", direct_json}};
        std::string detail = "delta = " + fmt(d.min_critical_distance) + " at n = " + std::to_string(d.argmin) +
                             ", drift " + fmt(d.drift) + " over horizons " + std::to_string(cfg.orbit_horizon / 10) +
                             " -> " + std::to_string(cfg.orbit_horizon);
        if (sh.truncated > 0)
            add(r, "critical_orbit_separation", cat, CheckStatus::inconclusive,
                std::to_string(sh.truncated) + " shadow rays truncated; " + detail);
        else if (!(d.min_critical_distance > 1e-12))
            add(r, "critical_orbit_separation", cat, CheckStatus::fail, "critical orbit meets 0; " + detail);
        else if (d.drift > cfg.drift_factor)
            add(r, "critical_orbit_separation", cat, CheckStatus::inconclusive, "minimum still drifting; " + detail);
        else
            add(r, "critical_orbit_separation", cat, CheckStatus::pass, detail);
        if (direct.escaped)
            r.notes.push_back("direct iteration of the critical orbit escapes at n = " +
                              std::to_string(*direct.escape_index) +
                              " (c is a ray sample just outside the Mandelbrot set); the ray-shadowed orbit is used");
        return;
    }
    r.param_certificate = Json{{"method", "direct iteration"},
                               {"horizon", cfg.orbit_horizon},
                               {"delta", direct.min_critical_distance},
                               {"argmin", direct.argmin},
                               {"delta_at_tenth", direct.min_at_tenth},
                               {"drift", direct.drift},
                               {"escaped", direct.escaped},
                               {"direct_iteration", direct_json}};
    std::string detail = "delta = " + fmt(direct.min_critical_distance) + " at n = " + std::to_string(direct.argmin) +
                         ", drift " + fmt(direct.drift);
    if (direct.escaped)
        add(r, "critical_orbit_separation", cat, CheckStatus::fail,
            "critical orbit escapes at n = " + std::to_string(*direct.escape_index));
    else if (!(direct.min_critical_distance > 1e-12))
        add(r, "critical_orbit_separation", cat, CheckStatus::fail, "critical orbit returns to 0 (recurrent); " + detail);
    else if (direct.drift > cfg.drift_factor)
        add(r, "critical_orbit_separation", cat, CheckStatus::inconclusive, "minimum still drifting; " + detail);
    else
        add(r, "critical_orbit_separation", cat, CheckStatus::pass, detail);
}

void cycle_evidence(TheoremReport& r, const Parameter& c, const VerifyConfig& cfg, CheckCategory cat)
{
    std::vector<CycleSearch> found = find_cycles(c, cfg.cycle_period, cfg.cycles);
    Json periods = Json::array();
    Json list = Json::array();
    bool complete = true;
    bool repelling = true;
    double weakest = std::numeric_limits<double>::infinity();
    for (const auto& s : found) {
        double mn = std::numeric_limits<double>::infinity();
        for (const auto& cy : s.cycles) {
            double m = std::abs(cy.multiplier);
            mn = std::min(mn, m);
            weakest = std::min(weakest, m);
            if (!cy.repelling())
                repelling = false;
            list.push_back(Json{{"period", cy.period},
                                {"point", complex_json(cy.points.front())},
                                {"multiplier", complex_json(cy.multiplier)},
                                {"abs_multiplier", m}});
        }
        complete = complete && s.complete();
        periods.push_back(Json{{"period", s.period},
                               {"found_points", s.found_points},
                               {"expected_points", s.expected_points},
                               {"cycles", s.cycles.size()},
                               {"min_abs_multiplier", s.cycles.empty() ? Json(nullptr) : Json(mn)}});
    }
    r.cycles = Json{{"p_max", cfg.cycle_period},
                    {"all_repelling_up_to_p", repelling && complete},
                    {"coverage_complete", complete},
                    {"min_abs_multiplier", std::isfinite(weakest) ? Json(weakest) : Json(nullptr)},
                    {"periods", periods},
                    {"list", list}};
    std::string detail = "min |multiplier| = " + fmt(weakest) + " over periods <= " + std::to_string(cfg.cycle_period);
    if (!repelling)
        add(r, "cycles_repelling", cat, CheckStatus::fail, "non-repelling cycle found; " + detail);
    else if (!complete)
        add(r, "cycles_repelling", cat, CheckStatus::inconclusive, "cycle search coverage incomplete; " + detail);
    else
        add(r, "cycles_repelling", cat, CheckStatus::pass, detail);
}

void class_evidence(TheoremReport& r, const Angle& theta, const VerifyConfig& cfg)
{
    const auto cat = CheckCategory::combinatorial;
    const char* names[] = {"characteristic_class", "critical_class", "class_separation", "wandering",
                           "shortest_arc", "hulls_unlinked"};
    auto skip_rest = [&](std::size_t from, CheckStatus st, const std::string& why) {
        for (std::size_t i = from; i < std::size(names); ++i)
            add(r, names[i], cat, st, why);
    };

    LaminationClass a;
    try {
        a = characteristic_class(theta, cfg.class_depth);
    } catch (const PreconditionFailed& e) {
        skip_rest(0, CheckStatus::skipped, e.what());
        return;
    } catch (const Error& e) {
        skip_rest(0, CheckStatus::inconclusive, e.what());
        return;
    }
    Json clusters = Json::array();
    for (const auto& cl : a.clusters) {
        clusters.push_back(cluster_json(cl));
        if (cl.contains(theta))
            r.class_angles.push_back(theta);
        else if (cl.is_point())
            r.class_angles.push_back(cl.lo);
        else
            r.class_angles.push_back(cl.representative());
    }
    r.class_summary = Json{{"depth", a.depth},
                           {"horizon", a.horizon},
                           {"A_size", a.size()},
                           {"A_converged", a.converged},
                           {"A_diagnostic", a.diagnostic},
                           {"A_clusters", clusters}};
    if (!a.converged) {
        add(r, names[0], cat, CheckStatus::inconclusive, a.diagnostic);
        skip_rest(1, CheckStatus::skipped, "characteristic class did not converge");
        return;
    }
    add(r, names[0], cat, CheckStatus::pass,
        std::to_string(a.size()) + " cluster(s), stable from depth " + std::to_string(a.depth / 2) + " to " +
            std::to_string(a.depth));

    LaminationClass crit = critical_class(a);
    Json crit_clusters = Json::array();
    for (const auto& cl : crit.clusters)
        crit_clusters.push_back(cluster_json(cl));
    r.class_summary["C_size"] = crit.size();
    r.class_summary["C_clusters"] = crit_clusters;
    add(r, names[1], cat, crit.size() == 2 * a.size() ? CheckStatus::pass : CheckStatus::fail,
        "#C = " + std::to_string(crit.size()) + ", #A = " + std::to_string(a.size()));

    try {
        ClassOrbit orbit = class_orbit(theta, cfg.class_depth, cfg.class_orbit_horizon);
        ClassSeparation sep = class_orbit_separation(orbit);
        r.class_summary["orbit_horizon"] = cfg.class_orbit_horizon;
        r.class_summary["delta_class_lower"] = rational_json(sep.delta_lower);
        r.class_summary["delta_class_argmin"] = sep.argmin;
        r.class_summary["wandering_ok"] = sep.wandering_ok;
        r.class_summary["overlapping_pairs"] = sep.overlapping_pairs;
        std::string sd = "dist(A, tau^n A) >= " + decimal(sep.delta_lower, 8) + " for 1 <= n <= " +
                         std::to_string(cfg.class_orbit_horizon) + " (min at n = " + std::to_string(sep.argmin) + ")";
        add(r, names[2], cat, sep.delta_lower > 0 ? CheckStatus::pass : CheckStatus::inconclusive, sd);
        add(r, names[3], cat, sep.wandering_ok ? CheckStatus::pass : CheckStatus::inconclusive,
            std::to_string(sep.overlapping_pairs) + " pair(s) among A_1..A_" +
                std::to_string(cfg.class_orbit_horizon + 1) + " not certified disjoint");

        ShortestArcReport sa = shortest_arc_check(orbit);
        r.class_summary["shortest_arc_ok"] = sa.ok;
        r.class_summary["shortest_arc_vacuous"] = sa.vacuous;
        if (sa.vacuous)
            add(r, names[4], cat, CheckStatus::pass, "vacuous: A_theta is a single angle");
        else
            add(r, names[4], cat, sa.ok ? CheckStatus::pass : CheckStatus::fail,
                "|S_1| <= " + decimal(sa.s1.hi, 8) + ", smallest later arc >= " + decimal(sa.worst.lo, 8) +
                    " at k = " + std::to_string(sa.worst_index));

        // hull disjointness among C_theta and the first images
        std::vector<std::vector<Cluster>> family{crit.clusters};
        std::size_t span = std::min<std::size_t>(orbit.images.size(), 64);
        for (std::size_t k = 0; k < span; ++k)
            family.push_back(orbit.images[k].clusters);
        std::size_t linked = 0;
        std::size_t open = 0;
        for (std::size_t i = 0; i < family.size(); ++i)
            for (std::size_t j = i + 1; j < family.size(); ++j) {
                Tri t = unlinked(family[i], family[j]);
                linked += t == Tri::no;
                open += t == Tri::undecided;
            }
        r.class_summary["unlinked_pairs_checked"] = family.size() * (family.size() - 1) / 2;
        std::string ud = std::to_string(linked) + " linked, " + std::to_string(open) + " undecided among C and A_1..A_" +
                         std::to_string(span);
        add(r, names[5], cat, linked ? CheckStatus::fail : open ? CheckStatus::inconclusive : CheckStatus::pass, ud);
    } catch (const Error& e) {
        skip_rest(2, CheckStatus::inconclusive, e.what());
    }
}

}  // namespace

TheoremReport verify_forward(const std::string& angle_spec, const VerifyConfig& cfg)
{
    TheoremReport r;
    r.mode = "forward";
    r.angle_spec = angle_spec;
    Angle theta = parse_angle(angle_spec);

    // (i) hypothesis screening on the angle
    NonrecurrenceCertificate cert = angle_nonrecurrence(theta, cfg.angle_horizon);
    r.angle_certificate = Json{{"horizon", cert.horizon},
                               {"delta_lower", rational_json(cert.delta_lower)},
                               {"argmin", cert.argmin},
                               {"periodic_collision", cert.periodic_collision
                                                          ? Json::array({cert.periodic_collision->first,
                                                                         cert.periodic_collision->second})
                                                          : Json(nullptr)}};
    if (cert.periodic_collision)
        add(r, "angle_nonrecurrence", CheckCategory::screening, CheckStatus::fail,
            "eventually periodic: tau^" + std::to_string(cert.periodic_collision->first) + " = tau^" +
                std::to_string(cert.periodic_collision->second));
    else
        add(r, "angle_nonrecurrence", CheckCategory::screening,
            cert.delta_lower > 0 ? CheckStatus::pass : CheckStatus::inconclusive,
            "dist(theta, tau^n theta) >= " + decimal(cert.delta_lower, 8) + " for n <= " +
                std::to_string(cfg.angle_horizon) + " (min at n = " + std::to_string(cert.argmin) + ")");

    try {
        KneadingPrefix kn = kneading(theta, cfg.angle_horizon);
        std::string prefix = to_string(kn.word.symbols).substr(0, 64);
        r.angle_certificate["kneading_prefix"] = prefix;
        r.angle_certificate["kneading_length"] = kn.word.depth();
        std::size_t pmax = kn.word.depth() / 2;
        r.angle_certificate["periods_checked_up_to"] = pmax;
        r.angle_certificate["smallest_unrefuted_period"] =
            kn.periods.smallest_unrefuted ? Json(*kn.periods.smallest_unrefuted) : Json(nullptr);
        if (kn.periods.all_refuted())
            add(r, "kneading_aperiodic", CheckCategory::screening, CheckStatus::pass,
                "every period <= " + std::to_string(pmax) + " refuted");
        else
            add(r, "kneading_aperiodic", CheckCategory::screening, CheckStatus::inconclusive,
                "period " + std::to_string(*kn.periods.smallest_unrefuted) + " not refuted by the prefix");
    } catch (const std::exception& e) {
        add(r, "kneading_aperiodic", CheckCategory::screening, CheckStatus::inconclusive, e.what());
    }

    // (ii) combinatorial evidence
    if (cert.passes())
        class_evidence(r, theta, cfg);
    else
        for (const char* n : {"characteristic_class", "critical_class", "class_separation", "wandering",
                              "shortest_arc", "hulls_unlinked"})
            add(r, n, CheckCategory::combinatorial, CheckStatus::skipped, "angle failed screening");

    // (iii) parameter ray
    RayTraceResult pr = trace_param_ray(theta, cfg.schedule, cfg.trace);
    Complex c_hat = pr.landing_estimate;
    r.c_hat = c_hat;
    r.param_landing = trace_json(pr);
    r.param_landing["c"] = complex_json(c_hat);
    add(r, "param_ray_landing", CheckCategory::numerical,
        pr.converged ? CheckStatus::pass : CheckStatus::inconclusive,
        pr.converged ? "tail diameter " + fmt(pr.tail_diameter) : pr.diagnostic);

    Parameter c(c_hat);

    // (iv) the dynamical ray at theta lands at the critical value
    RayTraceResult dr = trace_dynamical_ray(c, theta, cfg.schedule, cfg.trace);
    double gap = std::abs(dr.landing_estimate - c_hat);
    r.dynamical_landing = trace_json(dr);
    r.dynamical_landing["z"] = complex_json(dr.landing_estimate);
    r.dynamical_landing["distance_to_c"] = gap;
    std::string gd = "|z - c| = " + fmt(gap) + " (tolerance " + fmt(cfg.char_tol) + ")";
    if (!dr.converged)
        add(r, "characteristic_landing", CheckCategory::numerical, CheckStatus::inconclusive, dr.diagnostic + "; " + gd);
    else
        add(r, "characteristic_landing", CheckCategory::numerical,
            gap < cfg.char_tol ? CheckStatus::pass : CheckStatus::fail, gd);

    // (v) critical orbit and (vi) cycles
    orbit_evidence(r, c, theta, cfg, CheckCategory::numerical);
    cycle_evidence(r, c, cfg, CheckCategory::numerical);

    r.conclude();
    return r;
}

std::vector<Angle> control_angles(std::uint64_t seed, std::size_t count, std::uint64_t max_den,
                                  const std::vector<Angle>& exclude)
{
    if (max_den < 3)
        throw std::invalid_argument("control_angles: max_den must be at least 3");
    // there are sum phi(q), 2 <= q <= max_den, distinct fractions to draw from;
    // only small denominators can run out
    {
        const std::uint64_t need = count + exclude.size();
        std::uint64_t avail = 0;
        for (std::uint64_t q = 2; q <= max_den && avail < need; ++q)
            for (std::uint64_t p = 1; p < q; ++p)
                avail += std::gcd(p, q) == 1;
        if (avail < need) {
            for (std::size_t i = 0; i < exclude.size(); ++i) {
                auto v = exclude[i].exact();
                bool dup = std::any_of(exclude.begin(), exclude.begin() + i,
                                       [&](const Angle& u) { return compare(u, exclude[i]) == Order::equal; });
                if (!dup && v && *v > 0 && boost::multiprecision::denominator(*v) <= max_den)
                    --avail;
            }
            if (avail < count)
                throw std::invalid_argument("control_angles: only " + std::to_string(avail) +
                                            " distinct fractions with denominator <= " + std::to_string(max_den));
        }
    }
    std::mt19937_64 rng(seed);
    // unbiased draw in [0, n) by rejection; the engine's output sequence is
    // fixed by the standard, so this is reproducible across platforms
    auto below = [&](std::uint64_t n) {
        std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do
            x = rng();
        while (x >= limit);
        return x % n;
    };
    std::vector<Angle> out;
    while (out.size() < count) {
        std::uint64_t q = 2 + below(max_den - 1);
        std::uint64_t p = 1 + below(q - 1);
        Angle t = Angle::rational(BigInt(p), BigInt(q));
        auto same = [&](const Angle& u) { return compare(t, u) == Order::equal; };
        if (std::any_of(exclude.begin(), exclude.end(), same) || std::any_of(out.begin(), out.end(), same))
            continue;
        out.push_back(t);
    }
    return out;
}

TheoremReport verify_converse(const Parameter& c, const std::vector<Angle>& candidates, const VerifyConfig& cfg,
                              const std::optional<Angle>& orbit_angle)
{
    TheoremReport r;
    r.mode = "converse";
    r.c_hat = c.value();
    {
        std::string specs;
        for (const auto& t : candidates)
            specs += (specs.empty() ? "" : ",") + t.spec();
        r.angle_spec = specs;
    }
    r.param_landing = Json{{"c", complex_json(c.value())}, {"supplied", true}};

    // hypothesis screening on the parameter
    orbit_evidence(r, c, orbit_angle, cfg, CheckCategory::screening);
    cycle_evidence(r, c, cfg, CheckCategory::screening);

    std::vector<Angle> controls = control_angles(cfg.seed, cfg.controls, cfg.control_max_denominator, candidates);
    std::size_t characteristic = 0;
    std::size_t control_hits = 0;
    std::size_t param_far = 0;
    std::size_t param_open = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    auto examine = [&](const Angle& t, bool is_control) {
        RayTraceResult dr = trace_dynamical_ray(c, t, cfg.schedule, cfg.trace);
        double gap = std::abs(dr.landing_estimate - c.value());
        best_gap = std::min(best_gap, gap);
        bool is_char = gap < cfg.char_tol;
        Json item{{"angle", t.spec()},
                  {"role", is_control ? "control" : "candidate"},
                  {"dynamical_landing", complex_json(dr.landing_estimate)},
                  {"dynamical_converged", dr.converged},
                  {"distance_to_c", gap},
                  {"characteristic", is_char}};
        if (is_char) {
            ++characteristic;
            if (is_control)
                ++control_hits;
            RayTraceResult pr = trace_param_ray(t, cfg.schedule, cfg.trace);
            double pgap = std::abs(pr.landing_estimate - c.value());
            item["parameter_landing"] = complex_json(pr.landing_estimate);
            item["parameter_converged"] = pr.converged;
            item["parameter_distance"] = pgap;
            if (!pr.converged)
                ++param_open;
            else if (!(pgap < cfg.param_tol))
                ++param_far;
            NonrecurrenceCertificate cert = angle_nonrecurrence(t, cfg.angle_horizon);
            item["nonrecurrent_angle"] = cert.passes();
            if (!cert.passes())
                r.notes.push_back("characteristic angle " + t.spec() +
                                  " is not a non-recurrent angle (its orbit is eventually periodic or returns)");
        }
        r.candidates.push_back(item);
    };
    for (const auto& t : candidates)
        examine(t, false);
    for (const auto& t : controls)
        examine(t, true);
    r.dynamical_landing = Json{{"characteristic_count", characteristic},
                               {"closest_distance", std::isfinite(best_gap) ? Json(best_gap) : Json(nullptr)}};

    const auto cat = CheckCategory::numerical;
    add(r, "candidate_found", cat, characteristic > 0 ? CheckStatus::pass : CheckStatus::inconclusive,
        characteristic > 0 ? std::to_string(characteristic) + " characteristic angle(s)"
                           : "no candidate lands at c; the candidate list is insufficient");
    add(r, "at_most_two_characteristic", CheckCategory::combinatorial,
        characteristic <= 2 ? CheckStatus::pass : CheckStatus::fail,
        std::to_string(characteristic) + " characteristic among " + std::to_string(candidates.size()) +
            " candidate(s) and " + std::to_string(controls.size()) + " control(s)");
    add(r, "controls_rejected", cat, control_hits == 0 ? CheckStatus::pass : CheckStatus::fail,
        std::to_string(control_hits) + " of " + std::to_string(controls.size()) + " control angles land at c");
    if (characteristic == 0)
        add(r, "parameter_rays_land", cat, CheckStatus::skipped, "no characteristic angle");
    else
        add(r, "parameter_rays_land", cat,
            param_far ? CheckStatus::fail : param_open ? CheckStatus::inconclusive : CheckStatus::pass,
            std::to_string(param_far) + " far, " + std::to_string(param_open) + " unconverged (tolerance " +
                fmt(cfg.param_tol) + ")");
    r.conclude();
    return r;
}

std::vector<TheoremReport> batch(const VerifyConfig& cfg)
{
    const std::size_t n = cfg.angles.size();
    std::vector<std::vector<TheoremReport>> slots(n);
    auto run = [&](std::size_t i) {
        std::vector<TheoremReport> out;
        try {
            TheoremReport fwd = verify_forward(cfg.angles[i], cfg);
            bool chain = cfg.chain_converse && fwd.verdict == Verdict::pass && fwd.c_hat;
            out.push_back(fwd);
            if (chain) {
                VerifyConfig item_cfg = cfg;
                item_cfg.seed = cfg.seed + i;
                out.push_back(verify_converse(Parameter(*fwd.c_hat), fwd.class_angles, item_cfg,
                                              parse_angle(cfg.angles[i])));
            }
        } catch (const std::exception& e) {
            TheoremReport bad;
            bad.mode = "forward";
            bad.angle_spec = cfg.angles[i];
            add(bad, "pipeline", CheckCategory::screening, CheckStatus::fail, e.what());
            bad.conclude();
            out.assign(1, bad);
        }
        slots[i] = std::move(out);
    };
    unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            run(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++)
                    run(i);
            });
        for (auto& t : pool)
            t.join();
    }
    std::vector<TheoremReport> flat;
    for (auto& s : slots)
        for (auto& r : s)
            flat.push_back(std::move(r));
    return flat;
}

Json batch_json(const VerifyConfig& cfg, const std::vector<TheoremReport>& reports)
{
    Json list = Json::array();
    for (const auto& r : reports)
        list.push_back(r.to_json());
    return Json{{"schema_version", kSchemaVersion}, {"mode", "batch"}, {"config", cfg.to_json()}, {"reports", list}};
}

int exit_code(const std::vector<TheoremReport>& reports)
{
    bool open = false;
    for (const auto& r : reports) {
        if (r.verdict == Verdict::fail)
            return 1;
        open = open || r.verdict == Verdict::inconclusive;
    }
    return open ? 2 : 0;
}

}  // namespace nrp
