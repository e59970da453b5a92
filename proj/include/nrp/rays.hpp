#pragma once

// External rays by Newton continuation along decreasing potential.
//
// A ray point at log-potential G and angle t solves
//     f_c^n(z) = exp(2^n (G + 2 pi i t))        (dynamical ray, unknown z)
//     f_c^n(c) = exp(2^n (G + 2 pi i theta))    (parameter ray, unknown c)
// with n the least integer for which 2^n G reaches the working radius.
// Potentials are handled through log2 G so that very deep floors
// (2^-4000 and below) remain representable.

#include "nrp/circle.hpp"
#include "nrp/quad.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace nrp {

struct PotentialSchedule {
    double start_log2 = 0;      // log2 G_start
    double floor_log2 = 0;      // log2 G_floor
    int subdivisions = 8;       // samples per halving of G
    std::size_t max_steps = 1u << 22;

    /// G_start = ln 100, k = 8, G_floor = 2^-22 ln 2.
    static PotentialSchedule defaults();
    /// From plain potentials (G_floor must be representable as a double).
    static PotentialSchedule from_potentials(double g_start, double g_floor, int subdivisions = 8);
    /// Keeps G_start, sets G_floor = 2^floor_log2.
    PotentialSchedule with_floor_log2(double floor_log2) const;

    /// Throws std::invalid_argument unless G_start > G_floor > 0 and k >= 1.
    void validate() const;
};

/// A sample is accepted when its relative residual is at most
/// max(newton_tol, residual_floor).  The floor is the smallest residual a
/// double-precision unknown can achieve; near parabolic and tip parameters
/// it exceeds 1e-12 at moderate depth.
struct TraceOptions {
    double newton_tol = 1e-12;
    int max_newton = 60;
    int max_halvings = 6;          // consecutive step halvings before truncation
    double log_work_radius = 11.512925464970229;  // ln 1e5
    double critical_guard = 1e-6;  // flag samples closer than this to 0
    double landing_tol = 1e-6;
    std::size_t landing_window = 8;
};

struct RaySample {
    double log2_potential = 0;
    Complex position;
    double residual = 0;        // |f^n - target| / |target|
    double residual_floor = 0;  // rounding floor of the evaluation (0 unless it was needed)
    int newton_iters = 0;
};

struct LandingEstimate {
    Complex estimate;
    double tail_diameter = 0;
    bool converged = false;
};

struct RayTraceResult {
    std::vector<RaySample> samples;
    Complex landing_estimate;
    double tail_diameter = 0;
    bool converged = false;       // floor reached and tail below landing_tol
    bool truncated = false;       // Newton failed after all step halvings
    bool near_critical = false;   // a dynamical sample came within critical_guard of 0
    std::size_t angle_bits_consumed = 0;
    std::string diagnostic;

    double final_log2_potential() const;
};

/// estimate = last position; tail_diameter = diameter of the last `window`
/// positions; converged iff reached_floor and tail_diameter < tol.
LandingEstimate landing_estimate(const std::vector<RaySample>& samples, double tol, std::size_t window,
                                 bool reached_floor);

RayTraceResult trace_param_ray(const Angle& theta, const PotentialSchedule& sched, const TraceOptions& opts = {});

RayTraceResult trace_dynamical_ray(const Parameter& c, const Angle& t, const PotentialSchedule& sched,
                                   const TraceOptions& opts = {});

/// Approximate orbit of the critical value obtained by shadowing: element k
/// is the landing estimate of the dynamical ray of f_c at angle tau^k(theta),
/// k = 0 .. n-1.  Used when direct iteration is unreliable because c sits on
/// the parameter ray itself (just outside the connectedness locus).
struct ShadowOrbit {
    std::vector<Complex> points;
    std::size_t unconverged = 0;
    std::size_t truncated = 0;
};

ShadowOrbit shadow_critical_orbit(const Parameter& c, const Angle& theta, std::size_t n,
                                  const PotentialSchedule& sched, const TraceOptions& opts = {});

/// CSV with header "log2_potential,potential,re,im,residual,iters".
void write_trace_csv(std::ostream& os, const RayTraceResult& r);

}  // namespace nrp
