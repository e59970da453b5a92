// nrp: command-line front end to the library.  Every subcommand is a thin
// wrapper over one library call; output is either a short text summary or,
// with --json, the same JSON shapes the verify reports use.

#include "nrp/circle.hpp"
#include "nrp/lamination.hpp"
#include "nrp/quad.hpp"
#include "nrp/rays.hpp"
#include "nrp/render.hpp"
#include "nrp/symbolic.hpp"
#include "nrp/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace nrp;

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitComputation = 70;

/// Bad values that CLI11 cannot see (malformed numbers, angle specs, config).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    bool json = false;
    std::optional<std::uint64_t> seed;
    std::string config;
};

VerifyConfig base_config(const Globals& g)
{
    VerifyConfig cfg;
    if (!g.config.empty())
        cfg = load_config(g.config);
    if (g.seed)
        cfg.seed = *g.seed;
    return cfg;
}

double parse_number(const std::string& s, const std::string& what)
{
    std::size_t used = 0;
    double x = 0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(x))
        throw UsageError(what + ": expected a finite number, got '" + s + "'");
    return x;
}

/// "re,im" or "re".
Complex parse_complex(const std::string& s, const std::string& what)
{
    auto comma = s.find(',');
    if (comma == std::string::npos)
        return {parse_number(s, what), 0.0};
    return {parse_number(s.substr(0, comma), what), parse_number(s.substr(comma + 1), what)};
}

Angle angle_arg(const std::string& spec)
{
    try {
        return parse_angle(spec);
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    }
}

std::string show(Complex z)
{
    std::ostringstream os;
    os.precision(15);
    os << z.real() << (std::signbit(z.imag()) ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

std::string show(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void emit(const Json& j)
{
    std::cout << j.dump(2) << "\n";
}

std::ofstream open_out(const std::string& path, bool binary = false)
{
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os)
        throw Error("cannot write '" + path + "'");
    return os;
}

// ---------------------------------------------------------------- angle info

int angle_info(const Globals& g, const std::string& spec, std::size_t nbits, std::size_t horizon)
{
    Angle t = angle_arg(spec);
    NonrecurrenceCertificate cert = angle_nonrecurrence(t, horizon);
    auto exact = t.exact();
    std::string binary = "0." + to_string(t.bits(nbits));

    Json orbit{{"horizon", horizon}};
    if (cert.periodic_collision) {
        auto [m, n] = *cert.periodic_collision;
        orbit["preperiod"] = m;
        orbit["period"] = n - m;
    } else {
        orbit["preperiod"] = nullptr;
        orbit["period"] = nullptr;
        orbit["delta_lower"] = rational_json(cert.delta_lower);
        orbit["argmin"] = cert.argmin;
    }
    if (g.json) {
        emit(Json{{"spec", t.spec()},
                  {"exact", exact ? Json(fraction(*exact)) : Json(nullptr)},
                  {"decimal", exact ? Json(decimal(*exact, 20)) : Json(nullptr)},
                  {"approx", t.approx()},
                  {"binary", binary},
                  {"orbit", orbit}});
        return 0;
    }
    std::cout << "spec     " << t.spec() << "\n";
    if (exact)
        std::cout << "value    " << fraction(*exact) << " = " << decimal(*exact, 20) << "\n";
    else
        std::cout << "value    ~ " << show(t.approx()) << "\n";
    std::cout << "binary   " << binary << "...\n";
    if (cert.periodic_collision)
        std::cout << "orbit    preperiod " << cert.periodic_collision->first << ", period "
                  << cert.periodic_collision->second - cert.periodic_collision->first << "\n";
    else
        std::cout << "orbit    no coincidence within " << horizon << " doublings; dist(t, tau^n t) >= "
                  << decimal(cert.delta_lower, 10) << " (n = " << cert.argmin << ")\n";
    return 0;
}

// ---------------------------------------------------------------- kneading

int kneading_cmd(const Globals& g, const std::string& spec, std::size_t depth)
{
    Angle t = angle_arg(spec);
    KneadingPrefix k = kneading(t, depth);
    std::string word = to_string(k.word.symbols);
    if (g.json) {
        emit(Json{{"spec", t.spec()},
                  {"depth", depth},
                  {"word", word},
                  {"disagreement", k.disagreement ? Json(*k.disagreement) : Json(nullptr)},
                  {"periods_checked", depth / 2},
                  {"smallest_unrefuted_period",
                   k.periods.smallest_unrefuted ? Json(*k.periods.smallest_unrefuted) : Json(nullptr)}});
        return 0;
    }
    std::cout << word << "\n";
    if (k.disagreement)
        std::cout << "one-sided itineraries of the angle differ at index " << *k.disagreement << "\n";
    if (k.periods.smallest_unrefuted)
        std::cout << "period " << *k.periods.smallest_unrefuted << " not refuted by this prefix\n";
    else
        std::cout << "every period <= " << depth / 2 << " refuted\n";
    return 0;
}

// ---------------------------------------------------------------- lamination

std::vector<LaminationClass> lamination_family(const Angle& t, std::size_t depth, std::size_t images)
{
    std::vector<LaminationClass> out;
    LaminationClass a = characteristic_class(t, depth);
    out.push_back(critical_class(a));
    out.push_back(a);
    for (std::size_t k = 1; k <= images; ++k)
        out.push_back(forward_image(t, depth, k));
    return out;
}

void print_class(const std::string& label, const LaminationClass& c)
{
    std::cout << label << "  (" << c.size() << " cluster(s), depth " << c.depth << ", horizon " << c.horizon
              << (c.converged ? ", converged" : "") << ")\n";
    for (const auto& cl : c.clusters) {
        if (cl.is_point())
            std::cout << "    " << cl.lo.spec() << "\n";
        else
            std::cout << "    [" << show(cl.lo.approx()) << ", " << show(cl.hi.approx()) << "]\n";
    }
    if (!c.diagnostic.empty())
        std::cout << "    note: " << c.diagnostic << "\n";
}

int lamination_cmd(const Globals& g, const std::string& spec, std::size_t depth, std::size_t images,
                   const std::string& svg)
{
    Angle t = angle_arg(spec);
    auto family = lamination_family(t, depth, images);
    if (!svg.empty())
        open_out(svg) << render_chords(ChordDiagram{family, {}});
    if (g.json) {
        Json images_json = Json::array();
        for (std::size_t k = 2; k < family.size(); ++k)
            images_json.push_back(class_json(family[k]));
        emit(Json{{"spec", t.spec()},
                  {"characteristic", class_json(family[1])},
                  {"critical", class_json(family[0])},
                  {"images", images_json}});
        return 0;
    }
    print_class("A (characteristic)", family[1]);
    print_class("C (critical)", family[0]);
    for (std::size_t k = 2; k < family.size(); ++k)
        print_class("tau^" + std::to_string(k - 1) + " A", family[k]);
    if (!svg.empty())
        std::cout << "wrote " << svg << "\n";
    return 0;
}

// ---------------------------------------------------------------- trace

struct TraceArgs {
    std::string spec;
    std::string c = "0";
    std::optional<double> start;
    std::optional<double> floor;
    std::optional<double> floor_log2;
    std::optional<int> subdivisions;
    std::string csv;
    bool samples = false;
};

PotentialSchedule schedule_of(const VerifyConfig& cfg, const TraceArgs& a)
{
    PotentialSchedule s = cfg.schedule;
    if (a.start) {
        if (!(*a.start > 0))
            throw UsageError("--start must be positive");
        s.start_log2 = std::log2(*a.start);
    }
    if (a.floor && a.floor_log2)
        throw UsageError("--floor and --floor-log2 are exclusive");
    if (a.floor) {
        if (!(*a.floor > 0))
            throw UsageError("--floor must be positive");
        s.floor_log2 = std::log2(*a.floor);
    }
    if (a.floor_log2)
        s.floor_log2 = *a.floor_log2;
    if (a.subdivisions)
        s.subdivisions = *a.subdivisions;
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return s;
}

int trace_cmd(const Globals& g, const TraceArgs& a, bool param)
{
    VerifyConfig cfg = base_config(g);
    Angle t = angle_arg(a.spec);
    PotentialSchedule sched = schedule_of(cfg, a);
    std::optional<Parameter> c;
    RayTraceResult r;
    if (param) {
        r = trace_param_ray(t, sched, cfg.trace);
    } else {
        c = Parameter(parse_complex(a.c, "--c"));
        r = trace_dynamical_ray(*c, t, sched, cfg.trace);
    }
    if (!a.csv.empty()) {
        auto os = open_out(a.csv);
        write_trace_csv(os, r);
    }
    if (g.json) {
        Json j{{"kind", param ? "param-ray" : "dyn-ray"}, {"spec", t.spec()}};
        if (c)
            j["c"] = complex_json(c->value());
        j["start_log2"] = sched.start_log2;
        j["floor_log2"] = sched.floor_log2;
        j["subdivisions"] = sched.subdivisions;
        j["landing"] = complex_json(r.landing_estimate);
        j.update(trace_json(r));
        if (a.samples) {
            Json s = Json::array();
            for (const auto& x : r.samples)
                s.push_back(Json{{"log2_potential", x.log2_potential},
                                 {"z", complex_json(x.position)},
                                 {"residual", x.residual},
                                 {"iters", x.newton_iters}});
            j["sample_points"] = s;
        }
        emit(j);
        return 0;
    }
    std::cout << (param ? "parameter ray " : "dynamical ray ") << t.spec();
    if (c)
        std::cout << " at c = " << show(c->value());
    std::cout << "\nlanding    " << show(r.landing_estimate) << "\n"
              << "tail       " << show(r.tail_diameter) << "\n"
              << "samples    " << r.samples.size() << " down to log2 G = " << show(r.final_log2_potential()) << "\n"
              << "status     " << (r.converged ? "converged" : "not converged") << (r.truncated ? ", truncated" : "")
              << (r.near_critical ? ", passed near the critical point" : "") << "\n";
    if (!r.diagnostic.empty())
        std::cout << "diagnostic " << r.diagnostic << "\n";
    return 0;
}

// ---------------------------------------------------------------- verify

void print_report(const TheoremReport& r)
{
    std::cout << r.mode << " " << r.angle_spec << ": " << to_string(r.verdict) << "\n";
    for (const auto& c : r.checks)
        std::cout << "  [" << to_string(c.category) << "] " << c.name << ": " << to_string(c.status) << " - "
                  << c.detail << "\n";
    for (const auto& n : r.notes)
        std::cout << "  note: " << n << "\n";
}

int verify_forward_cmd(const Globals& g, const std::string& spec)
{
    angle_arg(spec);
    TheoremReport r = verify_forward(spec, base_config(g));
    if (g.json)
        emit(r.to_json());
    else
        print_report(r);
    return exit_code({r});
}

int verify_converse_cmd(const Globals& g, const std::string& c_arg, const std::vector<std::string>& specs,
                        const std::string& orbit_angle)
{
    Parameter c(parse_complex(c_arg, "--c"));
    std::vector<Angle> cands;
    for (const auto& s : specs)
        cands.push_back(angle_arg(s));
    std::optional<Angle> oa;
    if (!orbit_angle.empty())
        oa = angle_arg(orbit_angle);
    TheoremReport r = verify_converse(c, cands, base_config(g), oa);
    if (g.json)
        emit(r.to_json());
    else
        print_report(r);
    return exit_code({r});
}

int verify_batch_cmd(const Globals& g)
{
    if (g.config.empty())
        throw UsageError("verify batch needs --config <file>");
    VerifyConfig cfg = base_config(g);
    auto reports = batch(cfg);
    if (g.json) {
        emit(batch_json(cfg, reports));
    } else {
        for (const auto& r : reports)
            print_report(r);
        if (reports.empty())
            std::cout << "empty family\n";
    }
    return exit_code(reports);
}

// ---------------------------------------------------------------- render

void apply_styles(const std::vector<std::string>& kv, const std::function<void(std::string, std::string)>& set)
{
    for (const auto& s : kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw UsageError("--style expects key=value, got '" + s + "'");
        try {
            set(s.substr(0, eq), s.substr(eq + 1));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
}

struct PlaneArgs {
    std::string plane = "parameter";
    std::string c = "0";
    std::optional<std::string> center;
    std::optional<double> width;
    int pixels = 512;
    std::optional<int> height;
    int max_iter = 500;
    std::vector<std::string> rays;
    std::vector<std::string> points;
    std::vector<std::string> styles;
    unsigned threads = 0;
    std::string out;
};

int render_plane_cmd(const Globals& g, const PlaneArgs& a)
{
    VerifyConfig cfg = base_config(g);
    RenderSpec spec;
    spec.plane = a.plane == "parameter" ? PlaneKind::parameter : PlaneKind::dynamical;
    spec.c = Parameter(parse_complex(a.c, "--c"));
    bool param = spec.plane == PlaneKind::parameter;
    spec.view.center = a.center ? parse_complex(*a.center, "--center") : Complex(param ? -0.75 : 0.0, 0.0);
    spec.view.width = a.width.value_or(param ? 3.5 : 4.0);
    spec.view.pixels_x = a.pixels;
    spec.view.pixels_y = a.height.value_or(a.pixels);
    spec.max_iter = a.max_iter;
    spec.threads = a.threads;
    apply_styles(a.styles, [&](std::string k, std::string v) { set_style(spec.style, k, v); });
    try {
        spec.view.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    Json rays = Json::array();
    for (const auto& rs : a.rays) {
        Angle t = angle_arg(rs);
        RayTraceResult r = param ? trace_param_ray(t, cfg.schedule, cfg.trace)
                                 : trace_dynamical_ray(spec.c, t, cfg.schedule, cfg.trace);
        std::vector<Complex> path;
        for (const auto& s : r.samples)
            path.push_back(s.position);
        spec.rays.push_back(std::move(path));
        rays.push_back(Json{{"spec", t.spec()}, {"landing", complex_json(r.landing_estimate)},
                            {"converged", r.converged}});
    }
    for (const auto& p : a.points)
        spec.points.push_back(parse_complex(p, "--point"));

    Raster img = render_plane(spec);
    {
        auto os = open_out(a.out, true);
        write_ppm(os, img);
    }
    std::size_t interior = 0;
    for (int e : img.escape)
        interior += e < 0;
    if (g.json)
        emit(Json{{"out", a.out},
                  {"plane", a.plane},
                  {"width", img.width},
                  {"height", img.height},
                  {"interior_pixels", interior},
                  {"rays", rays}});
    else
        std::cout << "wrote " << a.out << " (" << img.width << "x" << img.height << ", " << interior
                  << " interior pixels)\n";
    return 0;
}

struct ChordArgs {
    std::vector<std::string> specs;
    std::vector<std::string> classes;
    std::size_t depth = 64;
    std::size_t images = 2;
    int size = 512;
    std::vector<std::string> styles;
    std::string out;
};

int render_chords_cmd(const Globals& g, const ChordArgs& a)
{
    ChordDiagram d;
    d.style.size = a.size;
    apply_styles(a.styles, [&](std::string k, std::string v) { set_style(d.style, k, v); });
    for (const auto& s : a.specs)
        for (auto& c : lamination_family(angle_arg(s), a.depth, a.images))
            d.classes.push_back(std::move(c));
    for (const auto& list : a.classes) {
        LaminationClass cls;
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ','))
            cls.clusters.push_back(Cluster::point(angle_arg(item)));
        std::sort(cls.clusters.begin(), cls.clusters.end(),
                  [](const Cluster& x, const Cluster& y) { return compare(x.lo, y.lo) == Order::less; });
        d.classes.push_back(std::move(cls));
    }
    if (a.size < 16)
        throw UsageError("--size must be at least 16");
    std::string svg = render_chords(d);
    open_out(a.out) << svg;
    if (g.json)
        emit(Json{{"out", a.out}, {"classes", d.classes.size()}, {"bytes", svg.size()}});
    else
        std::cout << "wrote " << a.out << " (" << d.classes.size() << " class(es))\n";
    return 0;
}

void structured_error(const std::string& kind, const std::string& message)
{
    std::cerr << Json{{"error", Json{{"kind", kind}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Non-recurrent angles under doubling: symbolic dynamics, laminations, external rays of z^2 + c, "
                 "and a finite-evidence harness for the landing theorem.\n"
                 "Angle specs: rat:p/q | rat:n | bits:<01> | rule:triangular | rule:squares | rule:periodic:<w> | "
                 "rule:preperiodic:<pre>:<w> | rule:explicit:<w>:<0|1>, with optional pre:<01>/ prefix and @n shift.\n"
                 "Complex values are re,im (write --c=-2,0 when the real part is negative)."};
    app.name("nrp");
    app.fallthrough();
    app.require_subcommand(1);

    Globals g;
    app.add_flag("--json", g.json, "Machine-readable JSON output");
    app.add_option("--seed", g.seed, "Seed for all randomness (converse control angles)");
    app.add_option("--config", g.config, "key = value configuration file (see README)");

    std::function<int()> action;

    // angle info
    auto* angle = app.add_subcommand("angle", "Angle utilities");
    angle->require_subcommand(1);
    auto* info = angle->add_subcommand("info", "Value, binary expansion and orbit type of an angle");
    std::string info_spec;
    std::size_t info_bits = 64, info_horizon = 4096;
    info->add_option("spec", info_spec, "Angle spec")->required();
    info->add_option("--bits", info_bits, "Binary digits to print")->capture_default_str()->check(CLI::Range(1, 1 << 20));
    info->add_option("--horizon", info_horizon, "Doublings searched for a periodic coincidence")
        ->capture_default_str()
        ->check(CLI::Range(1, 1 << 20));
    info->callback([&] { action = [&] { return angle_info(g, info_spec, info_bits, info_horizon); }; });

    // kneading
    auto* kn = app.add_subcommand("kneading", "Kneading sequence prefix");
    std::string kn_spec;
    std::size_t kn_depth = 64;
    kn->add_option("spec", kn_spec, "Angle spec")->required();
    kn->add_option("--depth", kn_depth, "Number of symbols")->capture_default_str()->check(CLI::Range(2, 1 << 20));
    kn->callback([&] { action = [&] { return kneading_cmd(g, kn_spec, kn_depth); }; });

    // lamination
    auto* lam = app.add_subcommand("lamination", "Characteristic class, critical class and forward images");
    std::string lam_spec, lam_svg;
    std::size_t lam_depth = 64, lam_images = 3;
    lam->add_option("spec", lam_spec, "Angle spec")->required();
    lam->add_option("--depth", lam_depth, "Class depth")->capture_default_str()->check(CLI::Range(4, 4096));
    lam->add_option("--images", lam_images, "Forward images tau^k A, k = 1..n")
        ->capture_default_str()
        ->check(CLI::Range(0, 4096));
    lam->add_option("--svg", lam_svg, "Also write a chord diagram");
    lam->callback([&] { action = [&] { return lamination_cmd(g, lam_spec, lam_depth, lam_images, lam_svg); }; });

    // trace
    auto* trace = app.add_subcommand("trace", "External ray tracing");
    trace->require_subcommand(1);
    TraceArgs ta;
    auto trace_opts = [&](CLI::App* s) {
        s->add_option("spec", ta.spec, "Angle spec")->required();
        s->add_option("--start", ta.start, "Starting potential G (default ln 100)");
        s->add_option("--floor", ta.floor, "Final potential G");
        s->add_option("--floor-log2", ta.floor_log2, "log2 of the final potential (for floors below 1e-300)");
        s->add_option("--subdivisions", ta.subdivisions, "Samples per halving of the potential")
            ->check(CLI::Range(1, 1 << 16));
        s->add_option("--csv", ta.csv, "Write samples as CSV");
        s->add_flag("--samples", ta.samples, "Include every sample in the JSON output");
    };
    auto* pr = trace->add_subcommand("param-ray", "Parameter ray of the Mandelbrot set");
    trace_opts(pr);
    pr->callback([&] { action = [&] { return trace_cmd(g, ta, true); }; });
    auto* dr = trace->add_subcommand("dyn-ray", "Dynamical ray of z^2 + c");
    trace_opts(dr);
    dr->add_option("--c", ta.c, "Parameter re,im")->required();
    dr->callback([&] { action = [&] { return trace_cmd(g, ta, false); }; });

    // verify
    auto* verify = app.add_subcommand("verify", "Finite-evidence checks of the landing theorem");
    verify->require_subcommand(1);
    auto* fwd = verify->add_subcommand("forward", "Angle -> parameter -> dynamics");
    std::string fwd_angle;
    fwd->add_option("--angle", fwd_angle, "Angle spec")->required();
    fwd->callback([&] { action = [&] { return verify_forward_cmd(g, fwd_angle); }; });
    auto* conv = verify->add_subcommand("converse", "Parameter + candidate angles -> characteristic angles");
    std::string conv_c, conv_orbit;
    std::vector<std::string> conv_cands;
    conv->add_option("--c", conv_c, "Parameter re,im")->required();
    conv->add_option("--candidates", conv_cands, "Candidate angle specs (comma separated)")
        ->required()
        ->delimiter(',');
    conv->add_option("--orbit-angle", conv_orbit, "Shadow the critical orbit by rays at this angle's doublings");
    conv->callback([&] { action = [&] { return verify_converse_cmd(g, conv_c, conv_cands, conv_orbit); }; });
    auto* bat = verify->add_subcommand("batch", "Forward runs over the angles of --config");
    bat->callback([&] { action = [&] { return verify_batch_cmd(g); }; });

    // render
    auto* render = app.add_subcommand("render", "Figures");
    render->require_subcommand(1);
    auto* plane = render->add_subcommand("plane", "Escape-time image (binary PPM) with ray overlays");
    PlaneArgs pa;
    plane->add_option("--plane", pa.plane, "parameter or dynamical")
        ->capture_default_str()
        ->check(CLI::IsMember({"parameter", "dynamical"}));
    plane->add_option("--c", pa.c, "Parameter re,im of the dynamical plane")->capture_default_str();
    plane->add_option("--center", pa.center, "Viewport centre re,im (default -0.75,0 or 0,0)");
    plane->add_option("--width", pa.width, "Viewport width (default 3.5 or 4)");
    plane->add_option("--pixels", pa.pixels, "Image width in pixels")->capture_default_str()->check(CLI::Range(1, 1 << 15));
    plane->add_option("--height", pa.height, "Image height in pixels (default: square)")->check(CLI::Range(1, 1 << 15));
    plane->add_option("--max-iter", pa.max_iter, "Iteration cap")->capture_default_str()->check(CLI::Range(1, 1 << 24));
    plane->add_option("--ray", pa.rays, "Overlay the ray at this angle (repeatable)");
    plane->add_option("--point", pa.points, "Mark the point re,im (repeatable)");
    plane->add_option("--style", pa.styles, "key=#rrggbb: interior, exterior_near, exterior_far, ray, point");
    plane->add_option("--threads", pa.threads, "Worker threads (0 = all cores)")->capture_default_str();
    plane->add_option("--out", pa.out, "Output .ppm")->required();
    plane->callback([&] { action = [&] { return render_plane_cmd(g, pa); }; });
    auto* chords = render->add_subcommand("chords", "SVG chord diagram of lamination classes");
    ChordArgs ca;
    chords->add_option("spec", ca.specs, "Angles whose A, C and forward images are drawn");
    chords->add_option("--class", ca.classes, "An explicit class of angle specs, comma separated (repeatable)");
    chords->add_option("--depth", ca.depth, "Class depth")->capture_default_str()->check(CLI::Range(4, 4096));
    chords->add_option("--images", ca.images, "Forward images per angle")->capture_default_str();
    chords->add_option("--size", ca.size, "Image size in pixels")->capture_default_str();
    chords->add_option("--style", ca.styles,
                       "key=value: characteristic, critical, forward_image, generic (#rrggbb), stroke (width)");
    chords->add_option("--out", ca.out, "Output .svg")->required();
    chords->callback([&] { action = [&] { return render_chords_cmd(g, ca); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        structured_error("usage", e.what());
        return kExitUsage;
    } catch (const ParseError& e) {
        structured_error("usage", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        structured_error("computation", e.what());
        return kExitComputation;
    }
}
