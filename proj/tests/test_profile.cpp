#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "willmore/profile.hpp"
#include "willmore/roots.hpp"

using namespace willmore;
using namespace willmore::profile;

// Half-width and quarter-height of the C = 1 profile cell, and the bending
// energy of one cell. Computed independently in 30-digit arithmetic from the
// closed-form quadratures rho = Beta(1/4, 1)/(2 sqrt 2) (= sqrt 2 exactly),
// xi = int_0^inf sqrt(w/2) (1+w^2)^{-5/4} dw, E = 2 xi.
namespace {
constexpr double kXi1 = 0.847213084793979086606499123482;
constexpr double kEnergy1 = 1.69442616958795817321299824696;
}  // namespace

TEST_CASE("integrated combination is conserved along the branch") {
    for (double C : {0.5, 1.0, 4.0}) {
        const auto sol = solve_branch(C);
        for (double f : {0.0, 0.1, 0.3, 0.6, 0.9, 0.99, 1.0}) {
            CHECK(sol.bracket(f * sol.x_cover()) ==
                  doctest::Approx(C).epsilon(1e-9));
        }
    }
}

TEST_CASE("half-width and quarter-height for C = 1") {
    const auto sol = solve_branch(1.0);
    CHECK(sol.rho() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    CHECK(sol.xi() == doctest::Approx(kXi1).epsilon(1e-11));
}

TEST_CASE("quadrature route agrees with the integrated branch") {
    for (double C : {1.0, 2.5}) {
        const auto sol = solve_branch(C);
        CHECK(rho_by_quadrature(C) == doctest::Approx(sol.rho()).epsilon(1e-9));
        CHECK(xi_by_quadrature(C) == doctest::Approx(sol.xi()).epsilon(1e-9));

        // x(w) from quadrature against a root solve on the integrated branch.
        const double x_star = roots::find_root(
            [&](double x) { return sol.at(x).w - 1.0; }, 0.0, sol.x_cover(), 1e-14);
        CHECK(x_at_w(C, 1.0) == doctest::Approx(x_star).epsilon(1e-9));
        CHECK(u_at_w(C, 1.0) == doctest::Approx(sol.at(x_star).u).epsilon(1e-9));
    }
}

TEST_CASE("cell dimensions scale like 1/sqrt(C)") {
    const auto s1 = solve_branch(1.0);
    const auto s4 = solve_branch(4.0);
    CHECK(s4.rho() == doctest::Approx(s1.rho() / 2.0).epsilon(1e-10));
    CHECK(s4.xi() == doctest::Approx(s1.xi() / 2.0).epsilon(1e-10));
}

TEST_CASE("mean curvature matches its closed form in the slope") {
    const double C = 1.0;
    const auto sol = solve_branch(C);
    for (double f : {0.05, 0.2, 0.5, 0.8, 0.999}) {
        const double x = f * sol.x_cover();
        const double w = sol.at(x).w;
        CHECK(mean_curvature(sol, x) ==
              doctest::Approx(mean_curvature_closed_form(C, w)).epsilon(1e-9));
    }
    // At the slope value 1 the closed form gives 2^{1/4} for C = 1.
    const double x_star = roots::find_root(
        [&](double x) { return sol.at(x).w - 1.0; }, 0.0, sol.x_cover(), 1e-14);
    CHECK(mean_curvature(sol, x_star) ==
          doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-9));
    // Limit value at the blow-up edge, approached monotonically.
    CHECK(mean_curvature(sol, sol.rho()) == doctest::Approx(std::sqrt(2.0 * C)));
    double prev = -1.0;
    for (int i = 0; i <= 50; ++i) {
        const double h = mean_curvature(sol, sol.rho() * i / 50.0);
        CHECK(h >= prev - 1e-12);
        prev = h;
    }
}

TEST_CASE("curvature gradient matches C^2/(1+w^2)") {
    const double C = 2.0;
    const auto sol = solve_branch(C);
    CHECK(grad_H_squared(sol, 0.0) == doctest::Approx(C * C).epsilon(1e-10));
    for (double f : {0.1, 0.4, 0.7, 0.95}) {
        const double x = f * sol.x_cover();
        const double w = sol.at(x).w;
        CHECK(grad_H_squared(sol, x) ==
              doctest::Approx(C * C / (1.0 + w * w)).epsilon(1e-8));
    }
    CHECK(grad_H_squared(sol, sol.rho()) == 0.0);
}

TEST_CASE("asymptotic tail slope is continuous at the cut") {
    const auto sol = solve_branch(1.0);
    CHECK(sol.tail_w(sol.x_cover()) ==
          doctest::Approx(sol.w_cut()).epsilon(1e-4));
    // Curvature evaluated through the tail stays below its limit.
    const double x_mid = 0.5 * (sol.x_cover() + sol.rho());
    const double h = mean_curvature(sol, x_mid);
    CHECK(h < std::sqrt(2.0));
    CHECK(h > mean_curvature(sol, sol.x_cover()) - 1e-12);
}

TEST_CASE("domain limits are enforced") {
    const auto sol = solve_branch(1.0);
    CHECK_THROWS_AS(sol.at(sol.x_cover() * 1.5), std::domain_error);
    CHECK_THROWS_AS(mean_curvature(sol, -0.1), std::domain_error);
    CHECK_THROWS_AS(mean_curvature(sol, sol.rho() * 1.01), std::domain_error);
    CHECK_THROWS_AS(solve_branch(-1.0), std::invalid_argument);
}

TEST_CASE("second branch: odd slope, constant reduced speed, matching cell size") {
    const double C = 1.0;
    const auto sb = solve_second_branch(C);
    const auto b1 = solve_branch(C);
    CHECK(sb.at(0.0).w == doctest::Approx(0.0));
    for (double f : {0.2, 0.5, 0.9}) {
        const double x = f * sb.x_cover();
        CHECK(sb.at(-x).w == doctest::Approx(-sb.at(x).w).epsilon(1e-9));
        const auto p = sb.at(x);
        CHECK(p.wp * std::pow(1.0 + p.w * p.w, -1.25) ==
              doctest::Approx(std::sqrt(2.0 * C)).epsilon(1e-10));
    }
    // The two charts describe one curve: this chart's width/height are the
    // other chart's height/width.
    CHECK(sb.half_width() == doctest::Approx(b1.xi()).epsilon(1e-10));
    CHECK(sb.height() == doctest::Approx(b1.rho()).epsilon(1e-10));
}

TEST_CASE("assembled profile: junctions, periodicity, spacing") {
    const double C = 1.0;
    const int periods = 2;
    const double step = 0.01;
    const auto p = assemble_profile(C, periods, step);
    const auto b1 = solve_branch(C);

    REQUIRE(p.junctions.size() == 1 + 4 * static_cast<std::size_t>(periods));
    for (std::size_t j = 0; j < p.junctions.size(); ++j) {
        const auto& jn = p.junctions[j];
        CHECK(jn.kind == (j % 2 == 0 ? JunctionKind::HZero : JunctionKind::HMax));
        CHECK(jn.tangent_gap < 1e-6);
        CHECK(jn.h_gap < 1e-7);
    }

    // One cell advances the curve by (0, 4 xi) and returns the tangent.
    const auto& p0 = p.points[p.junctions[0].point];
    const auto& p4 = p.points[p.junctions[4].point];
    CHECK(p4.x == doctest::Approx(p0.x).epsilon(1e-10));
    CHECK(p4.z - p0.z == doctest::Approx(4.0 * b1.xi()).epsilon(1e-10));
    CHECK(std::abs(std::remainder(p4.tangent_angle - p0.tangent_angle,
                                  2 * std::numbers::pi)) < 1e-9);
    const auto& p8 = p.points[p.junctions[8].point];
    CHECK(p8.z - p4.z == doctest::Approx(4.0 * b1.xi()).epsilon(1e-10));

    // Arc-length spacing stays below the requested step, and the height
    // coordinate never decreases (the profile is a graph over its axis).
    for (std::size_t i = 0; i + 1 < p.points.size(); ++i) {
        const double dx = p.points[i + 1].x - p.points[i].x;
        const double dz = p.points[i + 1].z - p.points[i].z;
        CHECK(std::hypot(dx, dz) <= step * 1.10001);
        CHECK(dz >= -1e-12);
    }

    CHECK(gauss_map_extent(p) == doctest::Approx(std::numbers::pi).epsilon(1e-9));
    CHECK(count_self_intersections(p) == 0);
}

TEST_CASE("assembled curvature fields are continuous across junctions") {
    const auto p = assemble_profile(1.0, 1, 0.005);
    for (std::size_t j = 1; j < p.junctions.size(); ++j) {
        const std::size_t i = p.junctions[j].point;
        if (i + 1 >= p.points.size()) continue;
        CHECK(std::abs(p.points[i + 1].H - p.points[i].H) < 0.05);
        CHECK(std::abs(p.points[i + 1].gradH2 - p.points[i].gradH2) < 0.05);
    }
}

TEST_CASE("bending energy per cell") {
    CHECK(willmore_energy_per_cell(1.0) == doctest::Approx(kEnergy1).epsilon(1e-9));
    // E(C) scales like sqrt(C).
    CHECK(willmore_energy_per_cell(4.0) ==
          doctest::Approx(2.0 * kEnergy1).epsilon(1e-9));
}

TEST_CASE("csv writers are deterministic") {
    const auto sol = solve_branch(1.0);
    std::ostringstream a, b;
    write_branch_csv(a, sol, 16);
    write_branch_csv(b, sol, 16);
    CHECK(a.str() == b.str());
    CHECK(a.str().substr(0, 18) == "x,u,w,wp,H,gradH2\n");

    const auto p = assemble_profile(1.0, 1, 0.05);
    std::ostringstream c;
    write_profile_csv(c, p);
    std::size_t lines = 0;
    for (char ch : c.str())
        if (ch == '\n') ++lines;
    CHECK(lines == p.points.size() + 1);
}
