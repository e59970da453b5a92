#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nrp/verify.hpp"

#include <set>
#include <sstream>

using namespace nrp;

namespace {

VerifyConfig parse(const std::string& text, VerifyConfig base = {})
{
    std::istringstream in(text);
    return parse_config(in, base);
}

Angle rat(std::int64_t p, std::int64_t q)
{
    return Angle::rational(BigInt(p), BigInt(q));
}

// Forward runs are expensive; the triangular run is shared.
const TheoremReport& star_report()
{
    static const TheoremReport r = verify_forward("rule:triangular", VerifyConfig{});
    return r;
}

}  // namespace

TEST_CASE("config grammar")
{
    VerifyConfig c = parse("# a comment\n"
                           "class_depth = 32   # trailing comment\n"
                           "\n"
                           "angle = rat:1/3\n"
                           "angle = rule:triangular\n"
                           "char_tol=1e-5\n"
                           "floor_log2 = -40\n"
                           "chain_converse = true\n"
                           "seed = 99\n");
    CHECK(c.class_depth == 32);
    CHECK(c.angles == std::vector<std::string>{"rat:1/3", "rule:triangular"});
    CHECK(c.char_tol == doctest::Approx(1e-5));
    CHECK(c.schedule.floor_log2 == doctest::Approx(-40));
    CHECK(c.chain_converse);
    CHECK(c.seed == 99);
    // untouched keys keep the documented defaults
    CHECK(c.angle_horizon == 2000);
    CHECK(c.orbit_horizon == 10000);
    CHECK(c.cycle_period == 6);
    CHECK(c.param_tol == doctest::Approx(1e-4));
    CHECK(c.control_max_denominator == 65536);
}

TEST_CASE("config errors name the line")
{
    try {
        parse("class_depth = 32\nbogus = 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("class_depth = -3\n"), ParseError);
    CHECK_THROWS_AS(parse("char_tol = abc\n"), ParseError);
    CHECK_THROWS_AS(parse("no equals sign\n"), ParseError);
    CHECK_THROWS_AS(parse("chain_converse = maybe\n"), ParseError);
    CHECK_THROWS(load_config("/nonexistent/config/file"));
}

TEST_CASE("config echo")
{
    Json j = VerifyConfig{}.to_json();
    CHECK(j["class_depth"] == 64);
    CHECK(j["angle_horizon"] == 2000);
    CHECK(j["seed"] == 1);
}

TEST_CASE("verdict derivation")
{
    TheoremReport r;
    r.checks = {{"a", CheckCategory::screening, CheckStatus::pass, ""},
                {"b", CheckCategory::numerical, CheckStatus::skipped, ""}};
    r.conclude();
    CHECK(r.verdict == Verdict::pass);
    r.checks.push_back({"c", CheckCategory::numerical, CheckStatus::inconclusive, "open"});
    r.conclude();
    CHECK(r.verdict == Verdict::inconclusive);
    r.checks.push_back({"d", CheckCategory::combinatorial, CheckStatus::fail, "broken"});
    r.conclude();
    CHECK(r.verdict == Verdict::fail);
    CHECK(r.reasons.size() >= 1);

    TheoremReport p, f, i;
    p.verdict = Verdict::pass;
    f.verdict = Verdict::fail;
    i.verdict = Verdict::inconclusive;
    CHECK(exit_code({}) == 0);
    CHECK(exit_code({p, p}) == 0);
    CHECK(exit_code({p, i}) == 2);
    CHECK(exit_code({i, f, p}) == 1);
}

TEST_CASE("report layout")
{
    TheoremReport r;
    r.mode = "forward";
    Json j = r.to_json();
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it)
        keys.push_back(it.key());
    const std::vector<std::string> want{"schema_version",   "mode",          "angle_spec",      "angle_certificate",
                                        "class_summary",    "param_landing", "dynamical_landing", "param_certificate",
                                        "cycles",           "checks",        "verdict",         "reasons",
                                        "notes",            "preamble"};
    CHECK(keys == want);
    CHECK(j["schema_version"] == kSchemaVersion);
    CHECK(preamble().find("not a proof") != std::string::npos);
}

TEST_CASE("control angles")
{
    auto a = control_angles(3, 8, 65536);
    auto b = control_angles(3, 8, 65536);
    REQUIRE(a.size() == 8);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] == b[i]);
        auto v = a[i].exact();
        REQUIRE(v);
        auto q = boost::multiprecision::denominator(*v);
        CHECK(q >= 2);
        CHECK(q <= 65536);
    }
    CHECK_FALSE(control_angles(4, 8, 65536)[0] == a[0]);
    // denominators up to 5 give nine fractions; one is excluded
    auto excluded = control_angles(3, 8, 5, {rat(1, 2)});
    std::set<std::string> seen;
    for (const auto& t : excluded) {
        CHECK_FALSE(t == rat(1, 2));
        seen.insert(t.exact()->str());
    }
    CHECK(seen.size() == 8);
    CHECK_THROWS_AS(control_angles(3, 9, 5, {rat(1, 2)}), std::invalid_argument);
}

TEST_CASE("forward run on the triangular angle passes")
{
    const TheoremReport& r = star_report();
    CHECK(r.verdict == Verdict::pass);
    for (const char* name : {"angle_nonrecurrence", "kneading_aperiodic", "characteristic_class", "critical_class",
                             "class_separation", "wandering", "shortest_arc", "hulls_unlinked", "param_ray_landing",
                             "characteristic_landing", "critical_orbit_separation", "cycles_repelling"}) {
        CAPTURE(name);
        REQUIRE(r.find(name));
        CHECK(r.find(name)->status == CheckStatus::pass);
    }
    REQUIRE(r.c_hat);
    CHECK(std::abs(*r.c_hat - Complex(-1.2383925504773285, -0.4171463246724509)) < 1e-9);
    CHECK(r.class_angles.size() == 1);
}

TEST_CASE("periodic angles fail screening")
{
    for (const char* spec : {"rat:1/3", "rat:1/2"}) {
        TheoremReport r = verify_forward(spec, VerifyConfig{});
        CAPTURE(spec);
        CHECK(r.verdict == Verdict::fail);
        REQUIRE(r.find("angle_nonrecurrence"));
        CHECK(r.find("angle_nonrecurrence")->status == CheckStatus::fail);
        CHECK(r.find("angle_nonrecurrence")->category == CheckCategory::screening);
        CHECK(r.find("characteristic_class")->status == CheckStatus::skipped);
    }
}

TEST_CASE("converse runs")
{
    SUBCASE("chained from the forward run")
    {
        const TheoremReport& f = star_report();
        TheoremReport r = verify_converse(Parameter(*f.c_hat), f.class_angles, VerifyConfig{},
                                          parse_angle("rule:triangular"));
        CHECK(r.verdict == Verdict::pass);
        std::size_t characteristic = 0;
        for (const auto& item : r.candidates) {
            bool is_char = item["characteristic"].get<bool>();
            characteristic += is_char;
            CHECK(is_char == (item["role"] == "candidate"));
        }
        CHECK(characteristic <= 2);
    }
    SUBCASE("Chebyshev tip with the angle 1/2")
    {
        TheoremReport r = verify_converse(Parameter(-2, 0), {rat(1, 2)}, VerifyConfig{});
        REQUIRE(r.candidates.size() == 9);
        CHECK(r.candidates[0]["characteristic"].get<bool>());
        CHECK(r.candidates[0]["nonrecurrent_angle"].get<bool>() == false);
        CHECK_FALSE(r.notes.empty());
        CHECK(r.find("controls_rejected")->status == CheckStatus::pass);
    }
    SUBCASE("superattracting parameter is rejected")
    {
        TheoremReport r = verify_converse(Parameter(0, 0), {Angle()}, VerifyConfig{});
        CHECK(r.verdict == Verdict::fail);
        CHECK(r.find("critical_orbit_separation")->status == CheckStatus::fail);
        CHECK(r.find("critical_orbit_separation")->category == CheckCategory::screening);
    }
}

TEST_CASE("batch")
{
    VerifyConfig empty;
    CHECK(batch(empty).empty());
    CHECK(exit_code(batch(empty)) == 0);

    VerifyConfig cfg;
    cfg.angles = {"rat:1/3", "rat:1/2", "rat:1/3", "not-a-spec"};
    cfg.threads = 3;
    auto reports = batch(cfg);
    REQUIRE(reports.size() == 4);
    CHECK(reports[0].verdict == Verdict::fail);
    CHECK(reports[1].verdict == Verdict::fail);
    // duplicates are independent and identical
    CHECK(reports[0].to_json().dump() == reports[2].to_json().dump());
    // a broken item is isolated
    CHECK(reports[3].verdict == Verdict::fail);
    CHECK(reports[3].find("pipeline"));

    Json a = batch_json(cfg, reports);
    Json b = batch_json(cfg, batch(cfg));
    CHECK(a.dump() == b.dump());
    CHECK(a["mode"] == "batch");
    CHECK(a["reports"].size() == 4);
}
