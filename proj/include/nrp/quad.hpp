#pragma once

// Orbits of f_c(z) = z^2 + c in double precision: escape detection,
// critical-orbit separation from the critical point, periodic cycles.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace nrp {

using Complex = std::complex<double>;

/// A finite parameter c of the quadratic family.
class Parameter {
public:
    Parameter() = default;
    Parameter(double re, double im);
    explicit Parameter(Complex c) : Parameter(c.real(), c.imag()) {}

    double re() const { return re_; }
    double im() const { return im_; }
    Complex value() const { return {re_, im_}; }

private:
    double re_ = 0;
    double im_ = 0;
};

inline constexpr double kEscapeRadius = 4.0;

struct OrbitSamples {
    std::vector<Complex> points;  // z_0, z_1, ... up to n or escape
    bool escaped = false;
    std::optional<std::size_t> escape_index;
};

/// z_{k+1} = z_k^2 + c for k < n; stops at the first |z_k| > escape_radius
/// (non-finite values count as escape).
OrbitSamples iterate(const Parameter& c, Complex z0, std::size_t n, double escape_radius = kEscapeRadius);

struct OrbitDiagnostics {
    std::size_t horizon = 0;
    double min_critical_distance = 0;  // min_{1<=n<=N} |f_c^n(0)|
    std::size_t argmin = 0;
    bool escaped = false;
    std::optional<std::size_t> escape_index;
    /// Same minimum over the first N/10 iterates, and the ratio of the two
    /// (>= 1); a ratio close to 1 indicates the minimum has settled.
    double min_at_tenth = 0;
    double drift = 1;
};

OrbitDiagnostics critical_orbit_separation(const Parameter& c, std::size_t horizon,
                                           double escape_radius = kEscapeRadius);

/// Same diagnostics for an orbit supplied by the caller (points[k] = f^{k+1}(0)).
OrbitDiagnostics orbit_separation(const std::vector<Complex>& critical_orbit);

struct Cycle {
    int period = 0;
    std::vector<Complex> points;
    Complex multiplier;

    bool repelling() const { return std::abs(multiplier) > 1.0; }
};

struct CycleSearchOptions {
    int grid = 64;           // grid x grid seeds over the square |re|,|im| <= radius, kept if |z| <= radius
    double radius = 2.0;
    double tol = 1e-10;      // root acceptance and deduplication tolerance
    int max_newton = 200;
};

struct CycleSearch {
    int period = 0;
    std::vector<Cycle> cycles;
    std::size_t expected_points = 0;  // number of points of exact period p
    std::size_t found_points = 0;

    bool complete() const { return found_points == expected_points; }
};

/// Number of points of exact period p of a degree-2 polynomial.
std::size_t exact_period_count(int p);

/// Multiplier of the cycle through z: product of 2 f^i(z), i < p.
Complex cycle_multiplier(const Parameter& c, Complex z, int p);

/// Cycles of periods 1..p_max (p_max <= 8) by damped Newton on f^p(z) - z.
std::vector<CycleSearch> find_cycles(const Parameter& c, int p_max, const CycleSearchOptions& opts = {});

}  // namespace nrp
