#include "nrp/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nrp {

Parameter::Parameter(double re, double im) : re_(re), im_(im)
{
    if (!std::isfinite(re) || !std::isfinite(im))
        throw std::invalid_argument("parameter must be finite");
}

OrbitSamples iterate(const Parameter& c, Complex z0, std::size_t n, double escape_radius)
{
    if (n == 0)
        throw std::invalid_argument("iterate: n must be positive");
    OrbitSamples out;
    out.points.reserve(n + 1);
    out.points.push_back(z0);
    Complex z = z0;
    const Complex cv = c.value();
    for (std::size_t k = 1; k <= n; ++k) {
        z = z * z + cv;
        out.points.push_back(z);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > escape_radius) {
            out.escaped = true;
            out.escape_index = k;
            break;
        }
    }
    return out;
}

OrbitDiagnostics orbit_separation(const std::vector<Complex>& orbit)
{
    if (orbit.empty())
        throw std::invalid_argument("orbit_separation: empty orbit");
    OrbitDiagnostics d;
    d.horizon = orbit.size();
    std::size_t tenth = std::max<std::size_t>(1, orbit.size() / 10);
    d.min_critical_distance = std::abs(orbit[0]);
    d.argmin = 1;
    for (std::size_t k = 0; k < orbit.size(); ++k) {
        double r = std::abs(orbit[k]);
        if (r < d.min_critical_distance) {
            d.min_critical_distance = r;
            d.argmin = k + 1;
        }
        if (k + 1 == tenth)
            d.min_at_tenth = d.min_critical_distance;
    }
    d.drift = d.min_critical_distance > 0 ? d.min_at_tenth / d.min_critical_distance
                                          : std::numeric_limits<double>::infinity();
    return d;
}

OrbitDiagnostics critical_orbit_separation(const Parameter& c, std::size_t horizon, double escape_radius)
{
    if (horizon == 0)
        throw std::invalid_argument("critical_orbit_separation: horizon must be positive");
    OrbitSamples orbit = iterate(c, Complex(0, 0), horizon, escape_radius);
    std::vector<Complex> tail(orbit.points.begin() + 1, orbit.points.end());
    OrbitDiagnostics d = orbit_separation(tail);
    d.horizon = horizon;
    d.escaped = orbit.escaped;
    d.escape_index = orbit.escape_index;
    return d;
}

std::size_t exact_period_count(int p)
{
    if (p < 1 || p > 62)
        throw std::invalid_argument("exact_period_count: period out of range");
    // inclusion-exclusion over divisors with the Moebius function
    auto mobius = [](int n) {
        int result = 1;
        for (int q = 2; q * q <= n; ++q) {
            if (n % q == 0) {
                n /= q;
                if (n % q == 0)
                    return 0;
                result = -result;
            }
        }
        if (n > 1)
            result = -result;
        return result;
    };
    long long total = 0;
    for (int d = 1; d <= p; ++d)
        if (p % d == 0)
            total += mobius(p / d) * (1LL << d);
    return static_cast<std::size_t>(total);
}

Complex cycle_multiplier(const Parameter& c, Complex z, int p)
{
    Complex m(1, 0);
    for (int i = 0; i < p; ++i) {
        m *= 2.0 * z;
        z = z * z + c.value();
    }
    return m;
}

namespace {

struct NewtonResult {
    Complex z;
    bool converged = false;
};

// damped Newton on f^p(z) - z
NewtonResult periodic_newton(const Parameter& c, Complex z, int p, const CycleSearchOptions& opts)
{
    const Complex cv = c.value();
    auto residual = [&](Complex w, Complex& deriv) {
        Complex z0 = w;
        Complex dw(1, 0);
        for (int i = 0; i < p; ++i) {
            dw = 2.0 * w * dw;
            w = w * w + cv;
        }
        deriv = dw - 1.0;
        return w - z0;
    };
    Complex d;
    Complex f = residual(z, d);
    for (int it = 0; it < opts.max_newton; ++it) {
        if (!std::isfinite(std::abs(f)) || std::abs(z) > 1e3)
            return {z, false};
        if (std::abs(f) < opts.tol * 1e-2)
            return {z, true};
        if (std::abs(d) == 0)
            return {z, false};
        Complex step = f / d;
        double lambda = 1.0;
        Complex trial_d;
        Complex trial = z - step;
        Complex trial_f = residual(trial, trial_d);
        while (std::abs(trial_f) > std::abs(f) && lambda > 1e-4) {
            lambda *= 0.5;
            trial = z - lambda * step;
            trial_f = residual(trial, trial_d);
        }
        bool tiny = std::abs(trial - z) <= 1e-15 * std::max(1.0, std::abs(z));
        z = trial;
        f = trial_f;
        d = trial_d;
        if (tiny)
            return {z, std::abs(f) < opts.tol};
    }
    return {z, std::abs(f) < opts.tol};
}

bool has_lower_period(const Parameter& c, Complex z, int p, double tol)
{
    Complex w = z;
    for (int d = 1; d < p; ++d) {
        w = w * w + c.value();
        if (p % d == 0 && std::abs(w - z) < tol)
            return true;
    }
    return false;
}

}  // namespace

std::vector<CycleSearch> find_cycles(const Parameter& c, int p_max, const CycleSearchOptions& opts)
{
    if (p_max < 1 || p_max > 8)
        throw std::invalid_argument("find_cycles: p_max must be in [1, 8]");
    if (opts.tol <= 0 || opts.grid < 2)
        throw std::invalid_argument("find_cycles: invalid options");
    std::vector<CycleSearch> out;
    const double dedupe = std::max(opts.tol * 1e3, 1e-8);
    for (int p = 1; p <= p_max; ++p) {
        CycleSearch search;
        search.period = p;
        search.expected_points = exact_period_count(p);
        std::vector<Complex> found;
        for (int i = 0; i < opts.grid; ++i) {
            for (int j = 0; j < opts.grid; ++j) {
                double x = -opts.radius + 2 * opts.radius * (i + 0.5) / opts.grid;
                double y = -opts.radius + 2 * opts.radius * (j + 0.5) / opts.grid;
                Complex seed(x, y);
                if (std::abs(seed) > opts.radius)
                    continue;
                NewtonResult r = periodic_newton(c, seed, p, opts);
                if (!r.converged)
                    continue;
                if (has_lower_period(c, r.z, p, dedupe))
                    continue;
                bool known = std::any_of(found.begin(), found.end(),
                                         [&](Complex w) { return std::abs(w - r.z) < dedupe; });
                if (known)
                    continue;
                // add the whole cycle through r.z
                Cycle cycle;
                cycle.period = p;
                Complex w = r.z;
                for (int k = 0; k < p; ++k) {
                    cycle.points.push_back(w);
                    found.push_back(w);
                    w = w * w + c.value();
                }
                cycle.multiplier = cycle_multiplier(c, r.z, p);
                search.cycles.push_back(std::move(cycle));
            }
        }
        search.found_points = found.size();
        out.push_back(std::move(search));
    }
    return out;
}

}  // namespace nrp
