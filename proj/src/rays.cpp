#include "nrp/rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nrp {

PotentialSchedule PotentialSchedule::defaults()
{
    PotentialSchedule s;
    s.start_log2 = std::log2(std::log(100.0));
    s.floor_log2 = -22.0 + std::log2(std::numbers::ln2);
    s.subdivisions = 8;
    return s;
}

PotentialSchedule PotentialSchedule::from_potentials(double g_start, double g_floor, int subdivisions)
{
    if (!(g_start > 0) || !(g_floor > 0))
        throw std::invalid_argument("potentials must be positive");
    PotentialSchedule s;
    s.start_log2 = std::log2(g_start);
    s.floor_log2 = std::log2(g_floor);
    s.subdivisions = subdivisions;
    s.validate();
    return s;
}

PotentialSchedule PotentialSchedule::with_floor_log2(double floor_log2) const
{
    PotentialSchedule s = *this;
    s.floor_log2 = floor_log2;
    s.validate();
    return s;
}

void PotentialSchedule::validate() const
{
    if (!std::isfinite(start_log2) || !std::isfinite(floor_log2) || !(start_log2 > floor_log2))
        throw std::invalid_argument("schedule requires G_start > G_floor > 0");
    if (subdivisions < 1)
        throw std::invalid_argument("schedule requires at least one subdivision per halving");
    if (max_steps == 0)
        throw std::invalid_argument("schedule requires max_steps >= 1");
}

double RayTraceResult::final_log2_potential() const
{
    return samples.empty() ? std::numeric_limits<double>::infinity() : samples.back().log2_potential;
}

LandingEstimate landing_estimate(const std::vector<RaySample>& samples, double tol, std::size_t window,
                                 bool reached_floor)
{
    LandingEstimate out;
    if (samples.empty())
        return out;
    out.estimate = samples.back().position;
    std::size_t w = std::min(std::max<std::size_t>(window, 1), samples.size());
    double diam = 0;
    for (std::size_t i = samples.size() - w; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            diam = std::max(diam, std::abs(samples[i].position - samples[j].position));
    out.tail_diameter = diam;
    out.converged = reached_floor && samples.size() >= window && diam < tol;
    return out;
}

namespace {

// frac(2^m t) as a double, computed once per m.
class ShiftedAngles {
public:
    explicit ShiftedAngles(const Angle& t) : current_(t) { values_.push_back(t.approx()); }

    double at(std::size_t m)
    {
        while (values_.size() <= m) {
            current_ = current_.doubled();
            values_.push_back(current_.approx());
        }
        return values_[m];
    }

    std::size_t max_index() const { return values_.size() - 1; }

private:
    Angle current_;
    std::vector<double> values_;
};

enum class RayKind { parameter, dynamical };

constexpr double kMaxJump = 8.0;
constexpr double kMinMove = 1e-15;
constexpr double kMaxRelativeStep = 0.5;
constexpr double kCheckRadius = 4.0;

struct Solve {
    bool ok = false;
    Complex u;
    double residual = 0;
    double floor = 0;
    int iters = 0;
};

class Tracer {
public:
    Tracer(RayKind kind, Complex c, const Angle& t, const PotentialSchedule& sched, const TraceOptions& opts)
        : kind_(kind), c_(c), angles_(t), sched_(sched), opts_(opts)
    {
        sched_.validate();
        if (!(opts_.newton_tol > 0) || opts_.max_newton < 1 || opts_.max_halvings < 0 || !(opts_.log_work_radius > 0))
            throw std::invalid_argument("invalid trace options");
    }

    RayTraceResult run()
    {
        RayTraceResult r;
        const double k = sched_.subdivisions;
        const double span = sched_.start_log2 - sched_.floor_log2;
        const std::size_t grid_steps = static_cast<std::size_t>(std::ceil(span * k - 1e-9));

        // first sample, seeded from the Boettcher asymptotics at G_start
        double g0 = std::exp2(sched_.start_log2);
        Complex guess = std::exp(Complex(g0, 2 * std::numbers::pi * angles_.at(0)));
        Solve s = solve(sched_.start_log2, guess);
        if (!s.ok) {
            r.truncated = true;
            r.diagnostic = "Newton failed at the starting potential";
            finish(r, false);
            return r;
        }
        push(r, sched_.start_log2, s);

        double cur = sched_.start_log2;
        Complex prev = s.u;
        double last_move = 0;
        bool reached = grid_steps == 0;
        for (std::size_t j = 1; j <= grid_steps; ++j) {
            double target = j == grid_steps ? sched_.floor_log2 : sched_.start_log2 - j / k;
            int halvings = 0;
            while (cur > target) {
                if (r.samples.size() >= sched_.max_steps) {
                    r.truncated = true;
                    r.diagnostic = "maximum number of steps reached";
                    finish(r, false);
                    return r;
                }
                double trial = cur - (cur - target) / std::exp2(halvings);
                if (halvings > 0 && trial >= cur) {
                    halvings = opts_.max_halvings + 1;  // step underflow
                }
                Solve t = halvings <= opts_.max_halvings ? solve(trial, prev) : Solve{};
                // continuation guard: a converged point that moved much farther
                // than the previous step did has jumped to a neighbouring ray
                if (t.ok && last_move > 0 && std::abs(t.u - prev) > kMaxJump * last_move)
                    t.ok = false;
                if (t.ok) {
                    last_move = std::max(std::abs(t.u - prev), kMinMove * std::max(1.0, std::abs(prev)));
                    push(r, trial, t);
                    cur = trial;
                    prev = t.u;
                    halvings = 0;
                } else if (++halvings > opts_.max_halvings) {
                    r.truncated = true;
                    std::ostringstream msg;
                    msg << "Newton failed after " << opts_.max_halvings << " step halvings at log2 G = " << trial;
                    r.diagnostic = msg.str();
                    finish(r, false);
                    return r;
                }
            }
            if (j == grid_steps)
                reached = true;
        }
        finish(r, reached);
        return r;
    }

private:
    void push(RayTraceResult& r, double log2g, const Solve& s)
    {
        r.samples.push_back({log2g, s.u, s.residual, s.floor, s.iters});
        if (kind_ == RayKind::dynamical && std::abs(s.u) < opts_.critical_guard)
            r.near_critical = true;
    }

    void finish(RayTraceResult& r, bool reached_floor)
    {
        LandingEstimate e = landing_estimate(r.samples, opts_.landing_tol, opts_.landing_window, reached_floor);
        r.landing_estimate = e.estimate;
        r.tail_diameter = e.tail_diameter;
        r.converged = e.converged && !r.truncated;
        r.angle_bits_consumed = angles_.max_index() + 64;
        if (r.converged)
            r.diagnostic.clear();
        else if (r.diagnostic.empty())
            r.diagnostic = reached_floor ? "tail diameter above landing tolerance" : "floor not reached";
    }

    // least n >= 0 with 2^n G >= ln R_work
    int iterations_for(double log2g) const
    {
        double need = std::log2(opts_.log_work_radius) - log2g;
        return need <= 0 ? 0 : static_cast<int>(std::ceil(need));
    }

    Solve solve(double log2g, Complex u)
    {
        const int n = iterations_for(log2g);
        const double modulus = std::exp2(n + log2g);  // 2^n G
        const double arg = 2 * std::numbers::pi * angles_.at(static_cast<std::size_t>(n));
        const Complex target = std::exp(Complex(modulus, arg));
        const double scale = std::abs(target);

        Solve s;
        double prev_res = std::numeric_limits<double>::infinity();
        for (int it = 0; it <= opts_.max_newton; ++it) {
            Complex z = u;
            Complex dz(1, 0);
            bool finite = true;
            for (int i = 0; i < n; ++i) {
                if (kind_ == RayKind::parameter)
                    dz = 2.0 * z * dz + 1.0;
                else
                    dz = 2.0 * z * dz;
                z = z * z + (kind_ == RayKind::parameter ? u : c_);
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                    finite = false;
                    break;
                }
            }
            if (!finite || !std::isfinite(std::abs(dz)) || std::abs(dz) == 0)
                return s;
            double res = std::abs(z - target) / scale;
            // the floor pass costs an extra orbit, so only pay for it once
            // Newton has stopped converging quadratically
            bool stalled = it > 0 && res > 0.25 * prev_res;
            double floor = res <= opts_.newton_tol || !stalled ? 0.0 : residual_floor(u, n, dz) / scale;
            prev_res = res;
            if (res <= std::max(opts_.newton_tol, floor)) {
                s.ok = on_ray(u, n);
                if (!s.ok)
                    return s;
                s.u = u;
                s.residual = res;
                s.floor = floor;
                s.iters = it;
                return s;
            }
            if (it == opts_.max_newton)
                break;
            // Newton on log(f^n / target): f^n is exponential in the
            // Boettcher coordinate, so the log is close to linear
            Complex step = std::log(z / target) * z / dz;
            // far out f^n behaves like u^(2^n), so a full step can overshoot
            // through the origin; cap the relative change
            double cap = kMaxRelativeStep * std::abs(u);
            if (cap > 0 && std::abs(step) > cap)
                step *= cap / std::abs(step);
            u -= step;
            if (!std::isfinite(u.real()) || !std::isfinite(u.imag()))
                return s;
        }
        return s;
    }

    // Branch check: wherever an iterate is far out, the Boettcher
    // coordinate is close to the identity, so the argument of z_m must match
    // 2 pi tau^m(t).  Newton landing on a neighbouring preimage fails this.
    bool on_ray(Complex u, int n)
    {
        const Complex c = kind_ == RayKind::parameter ? u : c_;
        const double cabs = std::abs(c);
        Complex z = u;
        for (int m = 0; m < n; ++m) {
            double r = std::abs(z);
            if (r >= kCheckRadius && r * r >= 16 * cabs) {
                double expected = 2 * std::numbers::pi * angles_.at(static_cast<std::size_t>(m));
                double diff = std::remainder(std::arg(z) - expected, 2 * std::numbers::pi);
                if (std::abs(diff) > std::numbers::pi / 4)
                    return false;
            }
            z = z * z + c;
        }
        return true;
    }

    // First-order bound on the rounding error of f^n at u: the error made at
    // step k (relative eps on z_k and on the addition of c) is amplified by
    // the derivative of f^{n-k} at z_k; the unknown itself is only known to
    // relative eps.  No double can do better than this residual.
    double residual_floor(Complex u, int n, Complex du) const
    {
        const Complex c = kind_ == RayKind::parameter ? u : c_;
        orbit_.assign(1, u);
        for (int i = 0; i < n; ++i)
            orbit_.push_back(orbit_.back() * orbit_.back() + c);
        double total = std::abs(u) * std::abs(du);
        double tail = 1;  // |d f^{n-k} / dz| at z_k
        for (int k = n; k >= 1; --k) {
            total += (std::abs(orbit_[k]) + std::abs(c)) * tail;
            tail *= 2 * std::abs(orbit_[k - 1]);
        }
        return 4 * std::numeric_limits<double>::epsilon() * total;
    }

    RayKind kind_;
    Complex c_;
    mutable std::vector<Complex> orbit_;
    ShiftedAngles angles_;
    PotentialSchedule sched_;
    TraceOptions opts_;
};

}  // namespace

RayTraceResult trace_param_ray(const Angle& theta, const PotentialSchedule& sched, const TraceOptions& opts)
{
    return Tracer(RayKind::parameter, Complex(0, 0), theta, sched, opts).run();
}

RayTraceResult trace_dynamical_ray(const Parameter& c, const Angle& t, const PotentialSchedule& sched,
                                   const TraceOptions& opts)
{
    return Tracer(RayKind::dynamical, c.value(), t, sched, opts).run();
}

ShadowOrbit shadow_critical_orbit(const Parameter& c, const Angle& theta, std::size_t n,
                                  const PotentialSchedule& sched, const TraceOptions& opts)
{
    ShadowOrbit out;
    out.points.reserve(n);
    Angle t = theta;
    for (std::size_t k = 0; k < n; ++k) {
        RayTraceResult r = trace_dynamical_ray(c, t, sched, opts);
        out.points.push_back(r.landing_estimate);
        if (r.truncated)
            ++out.truncated;
        else if (!r.converged)
            ++out.unconverged;
        t = t.doubled();
    }
    return out;
}

void write_trace_csv(std::ostream& os, const RayTraceResult& r)
{
    os << "log2_potential,potential,re,im,residual,iters\n";
    os.precision(17);
    for (const RaySample& s : r.samples)
        os << s.log2_potential << ',' << std::exp2(s.log2_potential) << ',' << s.position.real() << ','
           << s.position.imag() << ',' << s.residual << ',' << s.newton_iters << '\n';
}

}  // namespace nrp
