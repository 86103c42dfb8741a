#include "willmore/cone.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "willmore/quadrature.hpp"
#include "willmore/roots.hpp"

namespace willmore::cone {

namespace {

ode::IvpProblem generator_problem(double H0, double Hp0) {
    ode::IvpProblem p;
    p.dimension = 2;
    p.t0 = 0.0;
    p.y0 = {H0, Hp0};
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -y[0] * (1.0 + 0.5 * y[0] * y[0]);
    };
    return p;
}

double max_energy_drift(const ode::IvpSolution& s) {
    const auto& states = s.states();
    auto energy = [](const std::vector<double>& y) {
        return y[1] * y[1] + y[0] * y[0] + 0.25 * y[0] * y[0] * y[0] * y[0];
    };
    const double e0 = energy(states.front());
    double drift = 0.0;
    for (const auto& y : states) drift = std::max(drift, std::abs(energy(y) - e0));
    return drift / e0;
}

ode::IvpOptions tight(double rtol) {
    ode::IvpOptions o;
    o.rtol = rtol;
    o.atol = std::min(1e-14, rtol * 1e-2);
    return o;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<GeneratorSample> ConeGeneratorSolution::samples() const {
    std::vector<GeneratorSample> out;
    out.reserve(ivp_.times().size());
    for (std::size_t i = 0; i < ivp_.times().size(); ++i)
        out.push_back({ivp_.times()[i], ivp_.states()[i][0], ivp_.states()[i][1]});
    return out;
}

ConeGeneratorSolution solve_curvature(double a, double s_end, double rtol) {
    if (!(a > 0.0)) throw std::invalid_argument("solve_curvature: a must be positive");
    ConeGeneratorSolution sol;
    sol.a_ = a;
    sol.c_ = compute_c(a, rtol);
    sol.ivp_ = ode::integrate(generator_problem(a, 0.0), s_end, tight(rtol));
    sol.s_end_ = sol.ivp_.t_end();
    sol.drift_ = max_energy_drift(sol.ivp_);
    return sol;
}

ConeGeneratorSolution solve_curvature_from_zero(double a, double s_end, double rtol) {
    if (!(a > 0.0)) throw std::invalid_argument("solve_curvature_from_zero: a must be positive");
    const double e = a * a + 0.25 * a * a * a * a;
    ConeGeneratorSolution sol;
    sol.a_ = a;
    sol.c_ = compute_c(a, rtol);
    sol.ivp_ = ode::integrate(generator_problem(0.0, -std::sqrt(e)), s_end, tight(rtol));
    sol.s_end_ = sol.ivp_.t_end();
    sol.drift_ = max_energy_drift(sol.ivp_);
    return sol;
}

double compute_c(double a, double rtol) {
    if (!(a > 0.0)) throw std::invalid_argument("compute_c: a must be positive");
    ode::IvpProblem p = generator_problem(a, 0.0);
    p.events.push_back([](double, std::span<const double> y) { return y[0]; });
    auto sol = ode::integrate(p, std::numbers::pi + 0.25, tight(rtol));
    if (sol.reason() != ode::StopReason::EventHit)
        throw std::runtime_error(
            "compute_c: no zero of the generator curvature before s = pi (should occur "
            "before pi/2)");
    return sol.t_end();
}

LimitProfile solve_limit_profile(double rtol) {
    ode::IvpProblem p;
    p.dimension = 2;
    p.t0 = 0.0;
    p.y0 = {1.0, 0.0};
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = y[1];
        dy[1] = -0.5 * y[0] * y[0] * y[0];
    };
    ode::IvpProblem pe = p;
    pe.events.push_back([](double, std::span<const double> y) { return y[0]; });
    auto first = ode::integrate(pe, 10.0, tight(rtol));
    if (first.reason() != ode::StopReason::EventHit)
        throw std::runtime_error("solve_limit_profile: no zero found");

    LimitProfile lp;
    lp.alpha_ = first.t_end();
    lp.ivp_ = ode::integrate(p, 2.1 * lp.alpha_, tight(rtol));
    return lp;
}

double alpha_by_quadrature(double rtol) {
    auto r = quad::integrate_improper(
        [](double psi) { return 2.0 / std::sqrt(1.0 - psi * psi * psi * psi); }, 0.0, 1.0,
        {.sqrt_singularity_upper = true}, rtol);
    if (!r.converged) throw std::runtime_error("alpha_by_quadrature: did not converge");
    return r.value;
}

// ---------------------------------------------------------------------------
// Sphere curve
// ---------------------------------------------------------------------------

namespace {

// Joint state (gamma, gamma', H, H'): integrating the curvature alongside the
// frame avoids interpolating H between two solutions.
ode::IvpProblem sphere_problem(std::span<const double> y0) {
    ode::IvpProblem p;
    p.dimension = 8;
    p.t0 = 0.0;
    p.y0.assign(y0.begin(), y0.end());
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
        const double* g = y.data();
        const double* v = y.data() + 3;
        const double H = y[6];
        const double v2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        const double cx = g[1] * v[2] - g[2] * v[1];
        const double cy = g[2] * v[0] - g[0] * v[2];
        const double cz = g[0] * v[1] - g[1] * v[0];
        dy[0] = v[0];
        dy[1] = v[1];
        dy[2] = v[2];
        dy[3] = -v2 * g[0] + H * cx;
        dy[4] = -v2 * g[1] + H * cy;
        dy[5] = -v2 * g[2] + H * cz;
        dy[6] = y[7];
        dy[7] = -H * (1.0 + 0.5 * H * H);
    };
    return p;
}

double drift_of(std::span<const double> y) {
    const double gn = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    const double vn = std::sqrt(y[3] * y[3] + y[4] * y[4] + y[5] * y[5]);
    const double dot = y[0] * y[3] + y[1] * y[4] + y[2] * y[5];
    return std::max({std::abs(1.0 - gn), std::abs(1.0 - vn), std::abs(dot)});
}

void renormalize(std::vector<double>& y) {
    double gn = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    for (int i = 0; i < 3; ++i) y[i] /= gn;
    double dot = y[0] * y[3] + y[1] * y[4] + y[2] * y[5];
    for (int i = 0; i < 3; ++i) y[3 + i] -= dot * y[i];
    double vn = std::sqrt(y[3] * y[3] + y[4] * y[4] + y[5] * y[5]);
    for (int i = 0; i < 3; ++i) y[3 + i] /= vn;
}

}  // namespace

std::size_t SphereCurve::index_of(double s) const {
    const auto i = static_cast<std::ptrdiff_t>(std::llround((s - s_min) / ds));
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(samples.size()))
        throw std::domain_error("SphereCurve::index_of: s outside sampled range");
    return static_cast<std::size_t>(i);
}

SphereCurve solve_sphere_curve(double a, double s_min, double s_max, double rtol, double ds,
                               double drift_tol) {
    if (!(a > 0.0)) throw std::invalid_argument("solve_sphere_curve: a must be positive");
    if (!(s_min <= 0.0 && s_max >= 0.0 && s_min < s_max))
        throw std::invalid_argument("solve_sphere_curve: range must straddle s = 0");
    if (!(ds > 0.0)) throw std::invalid_argument("solve_sphere_curve: ds must be positive");

    // Anchor the uniform grid at s = 0 so sample parameters come out exact;
    // the covered range is the requested one rounded outward to grid nodes.
    const auto n_neg = static_cast<std::ptrdiff_t>(std::ceil(-s_min / ds - 1e-9));
    const auto n_pos = static_cast<std::ptrdiff_t>(std::ceil(s_max / ds - 1e-9));
    const std::ptrdiff_t n = n_neg + n_pos;

    SphereCurve curve;
    curve.a = a;
    curve.s_min = -static_cast<double>(n_neg) * ds;
    curve.s_max = static_cast<double>(n_pos) * ds;
    curve.ds = ds;
    curve.samples.resize(static_cast<std::size_t>(n) + 1);

    const std::vector<double> start = {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, a, 0.0};

    double drift = 0.0;
    auto record = [&](std::size_t idx, double s, std::span<const double> y) {
        drift = std::max(drift, drift_of(y));
        curve.samples[idx] = {s, {y[0], y[1], y[2]}, {y[3], y[4], y[5]}};
    };

    auto grid_s = [&](std::ptrdiff_t i) {
        return static_cast<double>(i - n_neg) * ds;
    };
    record(static_cast<std::size_t>(n_neg), 0.0, start);

    const double seg = 0.25;
    for (int dir : {+1, -1}) {
        const double goal = dir > 0 ? curve.s_max : curve.s_min;
        std::ptrdiff_t next = n_neg + dir;
        if (next < 0 || next > n) continue;
        if (dir > 0 ? goal <= 0.0 : goal >= 0.0) continue;
        std::vector<double> y = start;
        double t0 = 0.0;
        while (dir * (goal - t0) > 1e-12) {
            const double t1 = dir > 0 ? std::min(t0 + seg, goal) : std::max(t0 - seg, goal);
            auto sol = ode::integrate(sphere_problem(y), t1 - t0, tight(rtol));
            std::vector<double> yl(8);
            while (next >= 0 && next <= n) {
                const double s = grid_s(next);
                const double local = s - t0;
                if (dir > 0 ? local > (t1 - t0) + 1e-12 : local < (t1 - t0) - 1e-12) break;
                sol.eval(local, yl);
                record(static_cast<std::size_t>(next), s, yl);
                next += dir;
            }
            sol.eval(t1 - t0, yl);
            drift = std::max(drift, drift_of(yl));
            y = yl;
            renormalize(y);
            t0 = t1;
        }
    }

    curve.constraint_drift = drift;
    if (drift > drift_tol)
        throw std::runtime_error("solve_sphere_curve: constraint drift exceeds tolerance");
    return curve;
}

SpherePoint sphere_point(double a, double s, double rtol) {
    if (!(a > 0.0)) throw std::invalid_argument("sphere_point: a must be positive");
    const std::vector<double> start = {1.0, 0.0, 0.0, 0.0, 1.0, 0.0, a, 0.0};
    if (s == 0.0) return {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    auto sol = ode::integrate(sphere_problem(start), s, tight(rtol));
    SpherePoint p;
    for (std::size_t i = 0; i < 3; ++i) {
        p.gamma[i] = sol.eval(s, i);
        p.gamma_p[i] = sol.eval(s, i + 3);
    }
    return p;
}

double compute_T(double a, double rtol) {
    const double c = compute_c(a, rtol);
    const SpherePoint fwd = sphere_point(a, c, rtol);
    const SpherePoint bwd = sphere_point(a, -c, rtol);
    double dot = 0.0;
    for (std::size_t i = 0; i < 3; ++i) dot += fwd.gamma[i] * bwd.gamma[i];
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

std::vector<SweepRow> sweep(const std::vector<double>& a_values, bool parallel) {
    std::vector<SweepRow> rows(a_values.size());
    const auto body = [&](std::ptrdiff_t i) {
        const double a = a_values[static_cast<std::size_t>(i)];
        SweepRow r;
        r.a = a;
        r.c = compute_c(a);
        r.energy = a * a + 0.25 * a * a * a * a;
        r.T = compute_T(a);
        rows[static_cast<std::size_t>(i)] = r;
    };
    const auto count = static_cast<std::ptrdiff_t>(a_values.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "a,c,energy,T\n";
    for (const auto& r : rows)
        os << fmt17(r.a) << ',' << fmt17(r.c) << ',' << fmt17(r.energy) << ','
           << fmt17(r.T) << '\n';
}

std::vector<ClosedConeCandidate> find_closed_cones(int m, double lo, double hi, int n,
                                                   bool parallel) {
    if (m < 2)
        throw std::invalid_argument(
            "find_closed_cones: m must be >= 2 (m = 1 is the great-circle case)");
    if (!(lo > 0.0 && hi > lo) || n < 2)
        throw std::invalid_argument("find_closed_cones: bad grid");

    const std::vector<double> grid = roots::log_grid(lo, hi, static_cast<std::size_t>(n));
    const double target = std::numbers::pi / static_cast<double>(m);

    std::vector<double> f(grid.size());
    const auto count = static_cast<std::ptrdiff_t>(grid.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i)
            f[static_cast<std::size_t>(i)] = compute_T(grid[static_cast<std::size_t>(i)]) - target;
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i)
            f[static_cast<std::size_t>(i)] = compute_T(grid[static_cast<std::size_t>(i)]) - target;
    }

    std::vector<ClosedConeCandidate> out;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (f[i] == 0.0 || (f[i] < 0.0) == (f[i + 1] < 0.0)) continue;
        const double a_star = roots::find_root(
            [target](double a) { return compute_T(a) - target; }, grid[i], grid[i + 1],
            1e-12);
        ClosedConeCandidate cand;
        cand.m = m;
        cand.a_star = a_star;
        cand.c_star = compute_c(a_star);
        cand.T_star = compute_T(a_star);
        cand.length = 4.0 * m * cand.c_star;
        cand.margin_over_2pi = cand.length - 2.0 * std::numbers::pi;
        out.push_back(cand);
    }
    return out;
}

double closed_curve_arc_length(double a, int m, double ds) {
    const double c = compute_c(a);
    const SphereCurve curve = solve_sphere_curve(a, -c, c, 1e-12, ds);
    auto dist = [](const Vec3& p, const Vec3& q) {
        return std::sqrt((q[0] - p[0]) * (q[0] - p[0]) + (q[1] - p[1]) * (q[1] - p[1]) +
                         (q[2] - p[2]) * (q[2] - p[2]));
    };
    // Chords between interior samples, clamped to the exact arc endpoints
    // (the sample grid rounds outward past them).
    double chord = 0.0;
    Vec3 prev = sphere_point(a, -c).gamma;
    for (const auto& smp : curve.samples) {
        if (smp.s <= -c || smp.s >= c) continue;
        chord += dist(prev, smp.gamma);
        prev = smp.gamma;
    }
    chord += dist(prev, sphere_point(a, c).gamma);
    return 2.0 * m * chord;
}

std::pair<double, double> cone_surface_fields(double a, double r, double s) {
    if (!(r > 0.0)) throw std::invalid_argument("cone_surface_fields: r must be positive");
    const auto sol = solve_curvature(a, std::abs(s) + 0.5);
    return {sol.H(std::abs(s)) / r, 0.0};  // H is even in s
}

double cone_willmore_residual(const std::function<double(double)>& curv, double r,
                              double s) {
    if (!(r > 0.0)) throw std::invalid_argument("cone_willmore_residual: r must be positive");
    // Step balances the h^4 truncation against interpolation noise amplified
    // by 1/h^2.
    const double h = 2e-3;
    const double hpp = (-curv(s - 2 * h) + 16.0 * curv(s - h) - 30.0 * curv(s) +
                        16.0 * curv(s + h) - curv(s + 2 * h)) /
                       (12.0 * h * h);
    const double H = curv(s);
    return (H + hpp + 0.5 * H * H * H) / (r * r * r);
}

double cone_willmore_residual(double a, double r, double s) {
    const auto sol = solve_curvature(a, std::abs(s) + 0.5, 1e-13);
    return cone_willmore_residual([&sol](double t) { return sol.H(std::abs(t)); }, r, s);
}

}  // namespace willmore::cone
