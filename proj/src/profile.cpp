#include "willmore/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "willmore/quadrature.hpp"
#include "willmore/roots.hpp"

namespace willmore::profile {

namespace {

constexpr double kWCut = 1e4;

double pow54(double one_plus_w2) { return std::pow(one_plus_w2, 1.25); }

// dx/dw and du/dw of the first-order reduction.
double dxdw(double C, double w) {
    return 1.0 / (std::sqrt(2.0 * C * w) * pow54(1.0 + w * w));
}
double dudw(double C, double w) {
    return std::sqrt(w / (2.0 * C)) / pow54(1.0 + w * w);
}

// Third-order profile equation, written for the state (u, w, w', w'').
// Differentiating the conserved combination keeps it an honest first integral
// of the integration rather than an identity of the right-hand side.
ode::IvpProblem branch_problem(double C) {
    ode::IvpProblem p;
    p.dimension = 4;
    p.t0 = 0.0;
    p.y0 = {0.0, 0.0, 0.0, C};
    p.rhs = [](double, std::span<const double> y, std::span<double> dy) {
        const double w = y[1], wp = y[2], wpp = y[3];
        const double q = 1.0 + w * w;
        const double bracket_num = wpp * q - 2.5 * w * wp * wp;
        dy[0] = w;
        dy[1] = wp;
        dy[2] = wpp;
        dy[3] = (2.5 * wp * wp * wp + 3.0 * w * wp * wpp + 7.0 * w * wp * bracket_num / q) / q;
    };
    p.events.push_back([](double, std::span<const double> y) { return y[1] - kWCut; });
    return p;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

BranchPoint ProfileSolution::at(double x) const {
    if (x < -1e-12 || x > x_cover_ * (1.0 + 1e-12))
        throw std::domain_error("ProfileSolution::at: x outside [0, x_cover]");
    x = std::clamp(x, 0.0, x_cover_);
    double y[4];
    ivp_.eval(x, std::span<double>(y, 4));
    return {x, y[0], y[1], y[2], y[3]};
}

double ProfileSolution::bracket(double x) const {
    const BranchPoint b = at(x);
    const double q = 1.0 + b.w * b.w;
    return (b.wpp * q - 2.5 * b.w * b.wp * b.wp) / std::pow(q, 3.5);
}

double ProfileSolution::tail_w(double x) const {
    const double delta = (rho_ - x) * std::sqrt(2.0 * C_);
    if (delta <= 0.0) return std::numeric_limits<double>::infinity();
    const double q = 2.0 * delta + 2.5 * delta * delta;  // 1/w^2 to second order
    return 1.0 / std::sqrt(q);
}

ProfileSolution solve_branch(double C, double rtol) {
    if (!(C > 0.0)) throw std::invalid_argument("solve_branch: C must be positive");
    ode::IvpOptions opts;
    opts.rtol = rtol;
    opts.atol = std::min(1e-14, rtol * 1e-2);
    opts.magnitude_guard = 1e30;  // w'' ~ C (1+w^2)^{5/2} is huge at the cut, by design

    ProfileSolution sol;
    sol.C_ = C;
    sol.w_cut_ = kWCut;
    // Generous x horizon; the w = w_cut event fires long before (rho <= sqrt(2/C) scale).
    const double horizon = 10.0 * std::sqrt(2.0 / C) + 1.0;
    sol.ivp_ = ode::integrate(branch_problem(C), horizon, opts);
    if (sol.ivp_.reason() != ode::StopReason::EventHit)
        throw std::runtime_error("solve_branch: slope failed to reach the cut (no blow-up?)");
    sol.x_cover_ = sol.ivp_.t_end();

    const double qr = std::max(rtol, 1e-13);
    auto tail_x = quad::integrate_improper([C](double w) { return dxdw(C, w); }, kWCut,
                                           quad::infinity, {}, qr);
    auto tail_u = quad::integrate_improper([C](double w) { return dudw(C, w); }, kWCut,
                                           quad::infinity, {}, qr);
    if (!tail_x.converged || !tail_u.converged)
        throw std::runtime_error("solve_branch: tail quadrature did not converge");
    sol.rho_ = sol.x_cover_ + tail_x.value;
    sol.xi_ = sol.ivp_.eval(sol.x_cover_, 0) + tail_u.value;
    return sol;
}

double mean_curvature_closed_form(double C, double w) {
    if (w <= 0.0) return 0.0;
    return std::sqrt(2.0 * C) / std::pow(1.0 + 1.0 / (w * w), 0.25);
}

double mean_curvature(const ProfileSolution& sol, double x) {
    if (x < -1e-12 || x > sol.rho() * (1.0 + 1e-12))
        throw std::domain_error("mean_curvature: x outside [0, rho]");
    if (x <= sol.x_cover()) {
        const BranchPoint b = sol.at(x);
        return b.wp / std::pow(1.0 + b.w * b.w, 1.5);
    }
    if (x >= sol.rho()) return std::sqrt(2.0 * sol.C());
    return mean_curvature_closed_form(sol.C(), sol.tail_w(x));
}

double grad_H_squared(const ProfileSolution& sol, double x) {
    if (x < -1e-12 || x > sol.rho() * (1.0 + 1e-12))
        throw std::domain_error("grad_H_squared: x outside [0, rho]");
    if (x <= sol.x_cover()) {
        const BranchPoint b = sol.at(x);
        const double q = 1.0 + b.w * b.w;
        const double dH = (b.wpp * q - 3.0 * b.wp * b.wp * b.w) / std::pow(q, 2.5);
        return dH * dH / q;
    }
    if (x >= sol.rho()) return 0.0;
    const double w = sol.tail_w(x);
    return sol.C() * sol.C() / (1.0 + w * w);
}

double x_at_w(double C, double w, double rtol) {
    auto r = quad::integrate_improper([C](double v) { return dxdw(C, v); }, 0.0, w,
                                      {.sqrt_singularity_lower = true}, rtol);
    if (!r.converged) throw std::runtime_error("x_at_w: quadrature did not converge");
    return r.value;
}

double u_at_w(double C, double w, double rtol) {
    auto r = quad::integrate_improper([C](double v) { return dudw(C, v); }, 0.0, w,
                                      {.sqrt_singularity_lower = true}, rtol);
    if (!r.converged) throw std::runtime_error("u_at_w: quadrature did not converge");
    return r.value;
}

double rho_by_quadrature(double C, double rtol) {
    auto r = quad::integrate_improper([C](double v) { return dxdw(C, v); }, 0.0,
                                      quad::infinity, {.sqrt_singularity_lower = true}, rtol);
    if (!r.converged) throw std::runtime_error("rho_by_quadrature: did not converge");
    return r.value;
}

double xi_by_quadrature(double C, double rtol) {
    auto r = quad::integrate_improper([C](double v) { return dudw(C, v); }, 0.0,
                                      quad::infinity, {.sqrt_singularity_lower = true}, rtol);
    if (!r.converged) throw std::runtime_error("xi_by_quadrature: did not converge");
    return r.value;
}

// ---------------------------------------------------------------------------
// Second branch
// ---------------------------------------------------------------------------

namespace {

ode::IvpProblem second_branch_problem(double C, int side) {
    ode::IvpProblem p;
    p.dimension = 2;
    p.t0 = 0.0;
    p.y0 = {0.0, 0.0};  // (u~, w~)
    const double s2c = std::sqrt(2.0 * C);
    p.rhs = [s2c](double, std::span<const double> y, std::span<double> dy) {
        const double w = y[1];
        dy[0] = w;
        dy[1] = s2c * pow54(1.0 + w * w);
    };
    p.events.push_back(
        [side](double, std::span<const double> y) { return y[1] - side * kWCut; });
    return p;
}

}  // namespace

BranchPoint SecondBranch::at(double xt) const {
    if (std::abs(xt) > x_cover_ * (1.0 + 1e-12))
        throw std::domain_error("SecondBranch::at: x outside [-x_cover, x_cover]");
    xt = std::clamp(xt, -x_cover_, x_cover_);
    const ode::IvpSolution& s = xt >= 0.0 ? fwd_ : bwd_;
    double y[2];
    s.eval(xt, std::span<double>(y, 2));
    const double w = y[1];
    const double wp = std::sqrt(2.0 * C_) * pow54(1.0 + w * w);
    const double wpp = 2.5 * w * wp * wp / (1.0 + w * w);
    return {xt, y[0], w, wp, wpp};
}

SecondBranch solve_second_branch(double C, double rtol) {
    if (!(C > 0.0)) throw std::invalid_argument("solve_second_branch: C must be positive");
    ode::IvpOptions opts;
    opts.rtol = rtol;
    opts.atol = std::min(1e-14, rtol * 1e-2);
    const double horizon = 10.0 * std::sqrt(2.0 / C) + 1.0;

    SecondBranch sb;
    sb.C_ = C;
    sb.w_cut_ = kWCut;
    sb.fwd_ = ode::integrate(second_branch_problem(C, +1), horizon, opts);
    sb.bwd_ = ode::integrate(second_branch_problem(C, -1), -horizon, opts);
    if (sb.fwd_.reason() != ode::StopReason::EventHit ||
        sb.bwd_.reason() != ode::StopReason::EventHit)
        throw std::runtime_error("solve_second_branch: slope failed to reach the cut");
    sb.x_cover_ = std::min(sb.fwd_.t_end(), -sb.bwd_.t_end());

    const double s2c = std::sqrt(2.0 * C);
    const double qr = std::max(rtol, 1e-13);
    auto tail_x = quad::integrate_improper(
        [s2c](double w) { return 1.0 / (s2c * pow54(1.0 + w * w)); }, kWCut, quad::infinity,
        {}, qr);
    auto tail_u = quad::integrate_improper(
        [s2c](double w) { return w / (s2c * pow54(1.0 + w * w)); }, kWCut, quad::infinity, {},
        qr);
    if (!tail_x.converged || !tail_u.converged)
        throw std::runtime_error("solve_second_branch: tail quadrature did not converge");
    sb.half_width_ = sb.fwd_.t_end() + tail_x.value;
    sb.height_ = sb.fwd_.eval(sb.fwd_.t_end(), 0) + tail_u.value;
    return sb;
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

namespace {

struct Frame {
    double ox = 0, oz = 0;  // origin
    double theta = 0;       // rotation of the chart x-axis
    double sigma = 1;       // orientation parity of the chart's height axis

    void emit(std::vector<ProfilePoint>& out, double xl, double ul, double slope, double H,
              double g2) const {
        const double c = std::cos(theta), s = std::sin(theta);
        const double zl = sigma * ul;
        ProfilePoint p;
        p.x = ox + c * xl - s * zl;
        p.z = oz + s * xl + c * zl;
        p.tangent_angle = theta + sigma * std::atan(slope);
        p.H = sigma * H;
        p.gradH2 = g2;
        out.push_back(p);
    }

    void advance(double xl_end, double ul_end, bool flip_parity) {
        const double c = std::cos(theta), s = std::sin(theta);
        const double zl = sigma * ul_end;
        ox += c * xl_end - s * zl;
        oz += s * xl_end + c * zl;
        theta += sigma * std::numbers::pi / 2.0;
        if (flip_parity) sigma = -sigma;
    }
};

}  // namespace

AssembledProfile assemble_profile(double C, int periods, double step, double rtol,
                                  double junction_tol) {
    if (periods < 1) throw std::invalid_argument("assemble_profile: periods must be >= 1");
    if (!(step > 0.0)) throw std::invalid_argument("assemble_profile: step must be positive");

    const ProfileSolution b1 = solve_branch(C, rtol);
    const SecondBranch b2 = solve_second_branch(C, rtol);
    const double s2c = std::sqrt(2.0 * C);

    // Chart-overlap consistency between the two branches. The flip maps the
    // first branch's point with slope w onto the second branch's point with
    // slope -1/w, so the tangent directions must agree after the 90-degree
    // chart rotation.
    const double x_at_w1 = roots::find_root(
        [&](double x) { return b1.at(x).w - 1.0; }, 0.0, b1.x_cover(), 1e-14);
    const double xt_overlap = b1.at(x_at_w1).u - b1.xi();  // chart-2 coordinate, negative
    const double wt_overlap = b2.at(xt_overlap).w;
    const double gap_ab = std::abs(std::atan(b1.at(x_at_w1).w) + std::atan(-wt_overlap) -
                                   std::numbers::pi / 2.0);

    const double xt_at_w1 = roots::find_root(
        [&](double xt) { return b2.at(xt).w - 1.0; }, 0.0, b2.x_cover(), 1e-14);
    const double x3_overlap = std::abs(b2.at(xt_at_w1).u - b2.height());
    const double w1_overlap = b1.at(x3_overlap).w;
    const double gap_ba = std::abs(std::atan(b2.at(xt_at_w1).w) + std::atan(w1_overlap) -
                                   std::numbers::pi / 2.0);

    if (gap_ab > junction_tol || gap_ba > junction_tol)
        throw std::runtime_error(
            "assemble_profile: junction tangents inconsistent (integration accuracy)");

    const double h_end_1 = mean_curvature(b1, b1.x_cover());
    const double w20 = b2.at(0.0).w;
    const double h_start_2 = s2c / std::pow(1.0 + w20 * w20, 0.25);
    const double gap_hmax = std::abs(h_end_1 - h_start_2);
    const double gap_hzero = std::abs(b1.at(0.0).wp);

    AssembledProfile out;
    out.C = C;
    out.period_cells = periods;
    out.step = step;

    Frame fr;
    const double CC = C * C;

    auto junction = [&](JunctionKind kind) {
        Junction j;
        j.point = out.points.empty() ? 0 : out.points.size() - 1;
        j.kind = kind;
        j.tangent_gap = kind == JunctionKind::HMax ? gap_ab : gap_ba;
        j.h_gap = kind == JunctionKind::HMax ? gap_hmax : gap_hzero;
        out.junctions.push_back(j);
    };

    auto emit_first_branch_arc = [&](bool first_arc) {
        double x = 0.0;
        if (first_arc) {  // later arcs share their start point with the previous arc's end
            const BranchPoint b = b1.at(0.0);
            fr.emit(out.points, b.x, b.u, b.w, b.wp / std::pow(1.0 + b.w * b.w, 1.5),
                    grad_H_squared(b1, 0.0));
        }
        while (true) {
            const BranchPoint bh = b1.at(x);
            double dx = step / std::sqrt(1.0 + bh.w * bh.w);
            for (int k = 0; k < 60; ++k) {
                const double xn = std::min(x + dx, b1.x_cover());
                const double wn = b1.at(xn).w;
                if (std::sqrt(1.0 + wn * wn) * dx <= step * 1.05) break;
                dx *= 0.5;
            }
            x += dx;
            if (x >= b1.x_cover()) break;
            const BranchPoint b = b1.at(x);
            const double q = 1.0 + b.w * b.w;
            fr.emit(out.points, b.x, b.u, b.w, b.wp / std::pow(q, 1.5),
                    grad_H_squared(b1, x));
        }
        // Exact blow-up endpoint: vertical tangent, H at its extreme value.
        {
            ProfilePoint p;
            const double c = std::cos(fr.theta), s = std::sin(fr.theta);
            const double zl = fr.sigma * b1.xi();
            p.x = fr.ox + c * b1.rho() - s * zl;
            p.z = fr.oz + s * b1.rho() + c * zl;
            p.tangent_angle = fr.theta + fr.sigma * std::numbers::pi / 2.0;
            p.H = fr.sigma * s2c;
            p.gradH2 = 0.0;
            out.points.push_back(p);
        }
        fr.advance(b1.rho(), b1.xi(), false);
        junction(JunctionKind::HMax);
    };

    auto emit_second_branch_arc = [&]() {
        double x = 0.0;
        while (true) {
            const BranchPoint bh = b2.at(x);
            double dx = step / std::sqrt(1.0 + bh.w * bh.w);
            for (int k = 0; k < 60; ++k) {
                const double xn = std::min(x + dx, b2.x_cover());
                const double wn = b2.at(xn).w;
                if (std::sqrt(1.0 + wn * wn) * dx <= step * 1.05) break;
                dx *= 0.5;
            }
            x += dx;
            if (x >= b2.x_cover()) break;
            const BranchPoint b = b2.at(x);
            const double q = 1.0 + b.w * b.w;
            fr.emit(out.points, b.x, b.u, b.w, s2c / std::pow(q, 0.25), CC * b.w * b.w / q);
        }
        // The remaining sliver up to the blow-up edge can be longer than the
        // sampling step; walk it in the slope variable with the first-order form.
        {
            double w = b2.w_cut();
            double xt = b2.x_cover();
            double ut = b2.at(b2.x_cover()).u;
            const double max_w = 1e12;
            while (w < max_w) {
                const double remaining = 2.0 / (s2c * std::sqrt(w));
                if (remaining <= 0.75 * step) break;
                const double target = 1.0 / std::sqrt(w) - 0.5 * step * s2c / 2.0;
                if (target <= 0.0) break;
                const double wn = std::min(1.0 / (target * target), max_w);
                auto dxq = quad::integrate(
                    [s2c](double v) { return 1.0 / (s2c * pow54(1.0 + v * v)); }, w, wn,
                    1e-12);
                auto duq = quad::integrate(
                    [s2c](double v) { return v / (s2c * pow54(1.0 + v * v)); }, w, wn, 1e-12);
                xt += dxq.value;
                ut += duq.value;
                w = wn;
                fr.emit(out.points, xt, ut, w, s2c / std::pow(1.0 + w * w, 0.25),
                        CC * w * w / (1.0 + w * w));
            }
        }
        // Exact edge point: H -> 0 as the slope diverges (blow-up limit).
        {
            ProfilePoint p;
            const double c = std::cos(fr.theta), s = std::sin(fr.theta);
            const double zl = fr.sigma * b2.height();
            p.x = fr.ox + c * b2.half_width() - s * zl;
            p.z = fr.oz + s * b2.half_width() + c * zl;
            p.tangent_angle = fr.theta + fr.sigma * std::numbers::pi / 2.0;
            p.H = 0.0;
            p.gradH2 = CC;
            out.points.push_back(p);
        }
        fr.advance(b2.half_width(), b2.height(), true);
        junction(JunctionKind::HZero);
    };

    junction(JunctionKind::HZero);  // the H = 0 starting point
    for (int cell = 0; cell < periods; ++cell) {
        for (int half = 0; half < 2; ++half) {
            emit_first_branch_arc(cell == 0 && half == 0);
            emit_second_branch_arc();
        }
        if (cell == 0) out.points_per_cell = out.points.size();
    }
    return out;
}

double gauss_map_extent(const AssembledProfile& p) {
    if (p.points.empty()) return 0.0;
    double lo = p.points.front().tangent_angle, hi = lo;
    for (const auto& q : p.points) {
        lo = std::min(lo, q.tangent_angle);
        hi = std::max(hi, q.tangent_angle);
    }
    return hi - lo;
}

namespace {

bool segments_intersect(const ProfilePoint& a, const ProfilePoint& b, const ProfilePoint& c,
                        const ProfilePoint& d) {
    auto cross = [](double ox, double oz, double px, double pz, double qx, double qz) {
        return (px - ox) * (qz - oz) - (pz - oz) * (qx - ox);
    };
    const double d1 = cross(a.x, a.z, b.x, b.z, c.x, c.z);
    const double d2 = cross(a.x, a.z, b.x, b.z, d.x, d.z);
    const double d3 = cross(c.x, c.z, d.x, d.z, a.x, a.z);
    const double d4 = cross(c.x, c.z, d.x, d.z, b.x, b.z);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

}  // namespace

std::size_t count_self_intersections(const AssembledProfile& p) {
    const std::size_t n = std::min(p.points_per_cell, p.points.size());
    if (n < 4) return 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 2; j + 1 < n; ++j) {
            if (segments_intersect(p.points[i], p.points[i + 1], p.points[j],
                                   p.points[j + 1]))
                ++hits;
        }
    }
    return hits;
}

double willmore_energy_per_cell(const ProfileSolution& b1, const SecondBranch& b2) {
    const double C = b1.C();
    const double s2c = std::sqrt(2.0 * C);
    const double rtol = 1e-12;

    // First branch quarter arc, split at w = 1: x-space where the integrand is
    // tame, slope-space near the blow-up edge.
    const double x_mid = roots::find_root(
        [&](double x) { return b1.at(x).w - 1.0; }, 0.0, b1.x_cover(), 1e-14);
    auto q1a = quad::integrate(
        [&](double x) {
            const BranchPoint b = b1.at(x);
            const double q = 1.0 + b.w * b.w;
            const double H = b.wp / std::pow(q, 1.5);
            return H * H * std::sqrt(q);
        },
        0.0, x_mid, rtol);
    auto q1b = quad::integrate(
        [&](double v) {
            const double x = roots::find_root(
                [&](double xx) { return b1.at(xx).w - v; }, x_mid * 0.99, b1.x_cover(),
                1e-14);
            const BranchPoint b = b1.at(x);
            return b.wp / std::pow(1.0 + v * v, 2.5);
        },
        1.0, b1.w_cut(), 1e-11);
    auto t1 = quad::integrate_improper(
        [&](double w) { return std::sqrt(2.0 * C * w) / pow54(1.0 + w * w); }, b1.w_cut(),
        quad::infinity, {}, rtol);

    // Second branch quarter arc, same split.
    const double xt_mid = roots::find_root(
        [&](double xt) { return b2.at(xt).w - 1.0; }, 0.0, b2.x_cover(), 1e-14);
    // On this branch H^2 sqrt(1+w^2) == 2C identically, so the x-space piece
    // is exact.
    const double q2a = 2.0 * C * xt_mid;
    auto q2b = quad::integrate([&](double w) { return s2c / pow54(1.0 + w * w); }, 1.0,
                               b2.w_cut(), rtol);
    auto t2 = quad::integrate_improper([&](double w) { return s2c / pow54(1.0 + w * w); },
                                       b2.w_cut(), quad::infinity, {}, rtol);

    const double quarter1 = q1a.value + q1b.value + t1.value;
    const double quarter2 = q2a + q2b.value + t2.value;
    // One cell holds two arcs of each branch type; the Willmore density is H^2/4.
    return 0.25 * (2.0 * quarter1 + 2.0 * quarter2);
}

double willmore_energy_per_cell(double C, double rtol) {
    const ProfileSolution b1 = solve_branch(C, rtol);
    const SecondBranch b2 = solve_second_branch(C, rtol);
    return willmore_energy_per_cell(b1, b2);
}

void write_branch_csv(std::ostream& os, const ProfileSolution& sol, int n_samples) {
    os << "x,u,w,wp,H,gradH2\n";
    for (int i = 0; i < n_samples; ++i) {
        const double x = sol.x_cover() * static_cast<double>(i) /
                         static_cast<double>(n_samples - 1);
        const BranchPoint b = sol.at(x);
        const double q = 1.0 + b.w * b.w;
        os << fmt17(b.x) << ',' << fmt17(b.u) << ',' << fmt17(b.w) << ',' << fmt17(b.wp)
           << ',' << fmt17(b.wp / std::pow(q, 1.5)) << ',' << fmt17(grad_H_squared(sol, x))
           << '\n';
    }
}

void write_profile_csv(std::ostream& os, const AssembledProfile& p) {
    os << "x,z,H,gradH2\n";
    for (const auto& q : p.points)
        os << fmt17(q.x) << ',' << fmt17(q.z) << ',' << fmt17(q.H) << ',' << fmt17(q.gradH2)
           << '\n';
}

}  // namespace willmore::profile
