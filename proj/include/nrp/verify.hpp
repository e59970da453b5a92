#pragma once

// End-to-end checks of the landing theorem for non-recurrent angles: the
// forward pipeline (angle -> parameter -> dynamics) and the converse
// (parameter + candidate angles -> characteristic angles), with verdicts
// that separate hypothesis screening, combinatorial and numerical evidence.

#include "nrp/circle.hpp"
#include "nrp/lamination.hpp"
#include "nrp/quad.hpp"
#include "nrp/rays.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nrp {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// JSON shapes shared by reports and the command line.
Json complex_json(Complex z);                  // [re, im]
Json rational_json(const Rational& x);         // {decimal, value}
Json cluster_json(const Cluster& c);           // {lo, hi, lo_approx, hi_approx}
Json trace_json(const RayTraceResult& t);      // summary without samples
Json class_json(const LaminationClass& a);

/// Tunables of the harness; every field has a key in the config grammar.
struct VerifyConfig {
    std::size_t class_depth = 64;
    std::size_t angle_horizon = 2000;
    std::size_t orbit_horizon = 10000;
    std::size_t class_orbit_horizon = 512;
    int cycle_period = 6;
    double char_tol = 1e-4;
    double param_tol = 1e-4;
    double drift_factor = 2.0;
    PotentialSchedule schedule = PotentialSchedule::defaults();
    TraceOptions trace;
    int shadow_subdivisions = 1;  // schedule refinement for the shadow orbit rays
    CycleSearchOptions cycles;
    std::uint64_t seed = 1;
    std::size_t controls = 8;
    std::uint64_t control_max_denominator = 65536;
    unsigned threads = 0;  // 0: one per hardware thread
    bool chain_converse = false;
    std::vector<std::string> angles;  // batch family

    /// Set one key; throws ParseError on unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    Json to_json() const;
};

/// key = value lines; '#' starts a comment; `angle` may repeat.
VerifyConfig parse_config(std::istream& in, VerifyConfig base = {});
VerifyConfig load_config(const std::string& path, VerifyConfig base = {});

enum class Verdict { pass, fail, inconclusive };
enum class CheckStatus { pass, fail, inconclusive, skipped };
enum class CheckCategory { screening, combinatorial, numerical };

std::string to_string(Verdict v);
std::string to_string(CheckStatus s);
std::string to_string(CheckCategory c);

struct Check {
    std::string name;
    CheckCategory category;
    CheckStatus status;
    std::string detail;
};

struct TheoremReport {
    std::string mode;  // "forward" or "converse"
    std::string angle_spec;
    Json angle_certificate = Json::object();
    Json class_summary = Json::object();
    Json param_landing = Json::object();
    Json dynamical_landing = Json::object();
    Json param_certificate = Json::object();
    Json cycles = Json::object();
    Json candidates = Json::array();  // converse only
    std::vector<Check> checks;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> reasons;
    std::vector<std::string> notes;  // observations that do not affect the verdict

    /// Landing estimate of the parameter ray (forward) or the supplied c.
    std::optional<Complex> c_hat;
    /// Angles of the clusters of A_theta (forward) for chaining the converse.
    std::vector<Angle> class_angles;

    const Check* find(const std::string& name) const;
    /// Derives verdict and reasons from the checks: any fail -> fail, else
    /// any inconclusive -> inconclusive, else pass.
    void conclude();
    Json to_json() const;
};

std::string preamble();

TheoremReport verify_forward(const std::string& angle_spec, const VerifyConfig& config);

/// Candidate angles are tested as given; config.controls seeded control
/// rationals are appended.  When `orbit_angle` is set the critical orbit is
/// shadowed by rays at its doublings instead of iterated directly.
TheoremReport verify_converse(const Parameter& c, const std::vector<Angle>& candidates, const VerifyConfig& config,
                              const std::optional<Angle>& orbit_angle = std::nullopt);

/// Seeded control rationals p/q, 2 <= q <= max_den, avoiding `exclude`.
std::vector<Angle> control_angles(std::uint64_t seed, std::size_t count, std::uint64_t max_den,
                                  const std::vector<Angle>& exclude = {});

/// Forward runs over config.angles (converse chained after each passing run
/// when config.chain_converse), concurrently, assembled in input order.
std::vector<TheoremReport> batch(const VerifyConfig& config);

Json batch_json(const VerifyConfig& config, const std::vector<TheoremReport>& reports);

/// 0 all pass, 1 any fail, 2 any inconclusive (fail takes precedence).
int exit_code(const std::vector<TheoremReport>& reports);

}  // namespace nrp
