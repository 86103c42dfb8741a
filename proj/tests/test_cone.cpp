#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "willmore/cone.hpp"

using namespace willmore;
using namespace willmore::cone;

namespace {
// First zero of the large-a limit profile, frozen from a 30-digit quadrature
// of int_0^1 2 dPsi / sqrt(1 - Psi^4).
constexpr double kAlpha = 2.62205755429211979270327677344;

double dist3(const Vec3& p, const Vec3& q) {
    return std::sqrt((p[0] - q[0]) * (p[0] - q[0]) + (p[1] - q[1]) * (p[1] - q[1]) +
                     (p[2] - q[2]) * (p[2] - q[2]));
}
}  // namespace

TEST_CASE("generator energy is conserved over ten periods") {
    for (double a : {0.1, 1.0, 10.0}) {
        const double c = compute_c(a);
        const auto sol = solve_curvature(a, 10.0 * 4.0 * c);
        CHECK(sol.energy_drift() <= 1e-10);
        CHECK(sol.energy() == doctest::Approx(a * a + 0.25 * std::pow(a, 4.0)));
    }
    // a = 1 makes the conserved value 1.25 on the nose.
    CHECK(solve_curvature(1.0, 1.0).energy() == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("slope at the first zero and the point opposite the crest") {
    const double a = 2.0;
    const auto sol = solve_curvature(a, 8.0);
    CHECK(sol.Hp(sol.c()) == doctest::Approx(-2.0 * std::sqrt(2.0)).epsilon(1e-10));
    CHECK(sol.H(2.0 * sol.c()) == doctest::Approx(-a).epsilon(1e-10));
}

TEST_CASE("generator is periodic with period 4c") {
    for (double a : {0.5, 3.0}) {
        const double c = compute_c(a);
        const auto sol = solve_curvature(a, 9.0 * c);
        double max_diff = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double s = 4.0 * c * i / 100.0;
            if (s + 4.0 * c > sol.s_end()) break;
            max_diff = std::max(max_diff, std::abs(sol.H(s) - sol.H(s + 4.0 * c)));
        }
        CHECK(max_diff <= 1e-8);
    }
}

TEST_CASE("zero-based solution is symmetric about its trough") {
    const double a = 1.5;
    const double c = compute_c(a);
    const auto sol = solve_curvature_from_zero(a, 2.5 * c);
    CHECK(sol.H(0.0) == doctest::Approx(0.0));
    CHECK(sol.H(c) == doctest::Approx(-a).epsilon(1e-10));
    for (double f : {0.1, 0.35, 0.6, 0.85}) {
        const double x = f * 2.0 * c;
        CHECK(sol.H(x) == doctest::Approx(sol.H(2.0 * c - x)).epsilon(1e-9));
    }
}

TEST_CASE("first-zero bounds") {
    // Small a: c is close to (but below) pi/2, with the explicit lower bound
    // pi/(2(1+eps)) where 2 eps^2 + 4 eps = a^2.
    const double a = 0.01;
    const double c = compute_c(a);
    const double eps = (-2.0 + std::sqrt(4.0 + 2.0 * a * a)) / 2.0;
    CHECK(c <= std::numbers::pi / 2.0 + 1e-12);
    CHECK(c >= std::numbers::pi / (2.0 * (1.0 + eps)) - 1e-12);
    for (double e : {0.01, 0.05, 0.1}) {
        const double ae = 0.99 * std::sqrt(2.0 * e * e + 4.0 * e);
        CHECK(compute_c(ae) >= std::numbers::pi / (2.0 * (1.0 + e)) - 1e-12);
    }
    // Large a: c shrinks like alpha/a.
    const double c100 = compute_c(100.0);
    CHECK(c100 < 0.1);
    CHECK(std::abs(100.0 * c100 - kAlpha) <= 1e-2);
    CHECK_THROWS_AS(compute_c(-1.0), std::invalid_argument);
}

TEST_CASE("limit profile: energy identity and first zero") {
    const auto lp = solve_limit_profile();
    CHECK(lp.psi(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lp.psip(0.0) == doctest::Approx(0.0));
    for (double f : {0.2, 0.5, 0.8, 0.99}) {
        const double s = f * lp.alpha();
        const double p = lp.psi(s), q = lp.psip(s);
        CHECK(q * q == doctest::Approx((1.0 - p * p * p * p) / 4.0).epsilon(1e-10));
    }
    CHECK(lp.alpha() == doctest::Approx(kAlpha).epsilon(1e-10));
    CHECK(alpha_by_quadrature() == doctest::Approx(lp.alpha()).epsilon(1e-9));
    // Reflection through the zero.
    CHECK(lp.psi(0.5 * lp.alpha()) ==
          doctest::Approx(-lp.psi(1.5 * lp.alpha())).epsilon(1e-9));
    CHECK(lp.psi(0.5 * lp.alpha()) > 0.0);
}

TEST_CASE("sphere curve: constraints, curvature recovery, symmetries") {
    const double a = 1.0;
    const double c = compute_c(a);
    const auto curve = solve_sphere_curve(a, -4.0 * c, 4.0 * c, 1e-12, 0.002);
    CHECK(curve.constraint_drift <= 1e-8);

    // The curvature the curve actually turns with, recomputed from samples.
    const auto gen = solve_curvature(a, 4.0 * c + 0.1);
    double max_err = 0.0;
    const double ds = curve.ds;
    for (std::size_t i = 2; i + 2 < curve.samples.size(); ++i) {
        const auto& g = curve.samples[i].gamma;
        const auto& gp = curve.samples[i].gamma_p;
        const auto& m1 = curve.samples[i - 1].gamma;
        const auto& m2 = curve.samples[i - 2].gamma;
        const auto& p1 = curve.samples[i + 1].gamma;
        const auto& p2 = curve.samples[i + 2].gamma;
        Vec3 gpp;
        for (int k = 0; k < 3; ++k)
            gpp[k] = (-p2[k] + 16 * p1[k] - 30 * g[k] + 16 * m1[k] - m2[k]) /
                     (12 * ds * ds);
        Vec3 cr = {g[1] * gp[2] - g[2] * gp[1], g[2] * gp[0] - g[0] * gp[2],
                   g[0] * gp[1] - g[1] * gp[0]};
        const double kappa = gpp[0] * cr[0] + gpp[1] * cr[1] + gpp[2] * cr[2];
        max_err = std::max(max_err, std::abs(kappa - gen.H(std::abs(curve.samples[i].s))));
    }
    CHECK(max_err <= 1e-6);

    // Mirror symmetry through the plane of the start point.
    for (double s : {0.4, 1.1, 2.0}) {
        const Vec3 p = sphere_point(a, s).gamma;
        const Vec3 q = sphere_point(a, -s).gamma;
        CHECK(std::abs(p[0] - q[0]) <= 1e-6);
        CHECK(std::abs(p[1] + q[1]) <= 1e-6);
        CHECK(std::abs(p[2] - q[2]) <= 1e-6);
    }

    // Half-turn symmetry about the axis through the H = 0 point: rotate that
    // point onto the x-axis, then s -> 2c - s flips the y and z coordinates.
    const Vec3 gc = sphere_point(a, c).gamma;
    const double cs = gc[0], sn = std::sqrt(gc[1] * gc[1] + gc[2] * gc[2]);
    // Rotation taking gc to (1,0,0): R = A(angle) about axis u = gc x e_x.
    Vec3 u = {0.0, gc[2], -gc[1]};
    const double un = std::sqrt(u[1] * u[1] + u[2] * u[2]);
    u = {0.0, u[1] / un, u[2] / un};
    auto rotate = [&](const Vec3& v) -> Vec3 {
        // Rodrigues with cos = cs, sin = sn about unit axis u.
        const double dot = u[1] * v[1] + u[2] * v[2];
        Vec3 cxv = {u[1] * v[2] - u[2] * v[1], u[2] * v[0], -u[1] * v[0]};
        return {cs * v[0] + sn * cxv[0] + (1 - cs) * dot * u[0],
                cs * v[1] + sn * cxv[1] + (1 - cs) * dot * u[1],
                cs * v[2] + sn * cxv[2] + (1 - cs) * dot * u[2]};
    };
    const Vec3 check = rotate(gc);
    REQUIRE(std::abs(check[0] - 1.0) <= 1e-9);
    for (double f : {0.1, 0.5, 0.9, 1.6}) {
        const double s = f * c;
        const Vec3 p = rotate(sphere_point(a, s).gamma);
        const Vec3 q = rotate(sphere_point(a, 2.0 * c - s).gamma);
        CHECK(std::abs(p[0] - q[0]) <= 1e-6);
        CHECK(std::abs(p[1] + q[1]) <= 1e-6);
        CHECK(std::abs(p[2] + q[2]) <= 1e-6);
    }
}

TEST_CASE("small curvature keeps the curve near a great circle") {
    const double a = 1e-3;
    const double c = compute_c(a);
    const auto curve = solve_sphere_curve(a, -c, c, 1e-12, 0.01);
    // The start data put the circle in the xy-plane; measure the z escape.
    double max_z = 0.0;
    for (const auto& s : curve.samples) max_z = std::max(max_z, std::abs(s.gamma[2]));
    CHECK(max_z <= 1e-2);
}

TEST_CASE("turning distance limits and continuity") {
    const double t_small = compute_T(1e-3);
    CHECK(t_small < std::numbers::pi);
    CHECK(t_small > std::numbers::pi - 0.05);
    CHECK(compute_T(100.0) < 0.1);
    CHECK(std::abs(compute_T(1.0) - compute_T(1.01)) < 0.01);
}

TEST_CASE("parameter sweep is order-deterministic") {
    std::vector<double> grid = {0.2, 0.7, 1.3, 2.9, 8.0};
    const auto par = sweep(grid, true);
    const auto ser = sweep(grid, false);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].a == ser[i].a);
        CHECK(par[i].c == ser[i].c);
        CHECK(par[i].T == ser[i].T);
    }
}

TEST_CASE("closed generator candidates") {
    const auto cands = find_closed_cones(2, 0.05, 20.0, 60);
    REQUIRE(!cands.empty());
    for (const auto& cd : cands) {
        CHECK(cd.T_star == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-8));
        CHECK(cd.c_star > std::numbers::pi / 4.0);
        CHECK(cd.length > 2.0 * std::numbers::pi);
        CHECK(cd.margin_over_2pi > 0.0);
        CHECK(std::abs(closed_curve_arc_length(cd.a_star, cd.m) - cd.length) <= 1e-4);
    }
    CHECK_THROWS_AS(find_closed_cones(1, 0.1, 1.0, 10), std::invalid_argument);
}

TEST_CASE("surface fields and residual") {
    const auto [h, k] = cone_surface_fields(1.0, 2.0, 0.0);
    CHECK(h == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(k == 0.0);
    // H r is independent of r.
    const auto [h2, k2] = cone_surface_fields(1.0, 5.0, 0.3);
    const auto [h3, k3] = cone_surface_fields(1.0, 0.5, 0.3);
    CHECK(h2 * 5.0 == doctest::Approx(h3 * 0.5).epsilon(1e-12));
    CHECK_THROWS_AS(cone_surface_fields(1.0, -1.0, 0.0), std::invalid_argument);

    CHECK(std::abs(cone_willmore_residual(1.0, 1.0, 0.3)) <= 1e-8);
    CHECK(std::abs(cone_willmore_residual(2.0, 0.5, 1.0)) <= 1e-8 / (0.5 * 0.5 * 0.5));
    // Wrong curvature as a negative control: cos + cos'' + cos^3/2 at 0 is 1/2.
    auto wrong = [](double s) { return std::cos(s); };
    CHECK(cone_willmore_residual(wrong, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(cone_willmore_residual(wrong, 2.0, 0.0) ==
          doctest::Approx(0.5 / 8.0).epsilon(1e-8));
}

TEST_CASE("sphere-curve sample distances respect unit speed") {
    const auto curve = solve_sphere_curve(0.5, -1.0, 1.0, 1e-12, 0.002);
    for (std::size_t i = 0; i + 1 < curve.samples.size(); ++i) {
        CHECK(dist3(curve.samples[i].gamma, curve.samples[i + 1].gamma) <=
              curve.ds * 1.0001);
    }
}
