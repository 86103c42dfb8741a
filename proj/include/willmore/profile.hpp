#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "willmore/ivp.hpp"

namespace willmore::profile {

struct BranchPoint {
    double x = 0, u = 0, w = 0, wp = 0, wpp = 0;
};

/// Fundamental branch of the flat Willmore cylinder profile on [0, rho]:
/// the graph slope w = u' solves w''(1+w^2) - (5/2) w (w')^2 = C (1+w^2)^{7/2}
/// with w(0) = w'(0) = u(0) = 0, and blows up at the finite half-width rho.
/// The branch is integrated in x up to w = w_cut; the remaining sliver of the
/// domain is recovered from the first-order form by quadrature in w.
class ProfileSolution {
  public:
    double C() const { return C_; }
    double rho() const { return rho_; }
    double xi() const { return xi_; }
    double x_cover() const { return x_cover_; }  // integrated up to here; w(x_cover) = w_cut
    double w_cut() const { return w_cut_; }

    /// Dense state at x in [0, x_cover].
    BranchPoint at(double x) const;

    /// The integrated combination [w''(1+w^2) - (5/2) w (w')^2] / (1+w^2)^{7/2};
    /// a first integral of the profile equation, equal to C for the exact solution.
    double bracket(double x) const;

    /// Slope w at x for x in (x_cover, rho], from the asymptotic blow-up law.
    double tail_w(double x) const;

  private:
    friend ProfileSolution solve_branch(double C, double rtol);
    double C_ = 0, rho_ = 0, xi_ = 0, x_cover_ = 0, w_cut_ = 0;
    ode::IvpSolution ivp_;
};

ProfileSolution solve_branch(double C, double rtol = 1e-12);

/// Mean curvature H(x) = w'/(1+w^2)^{3/2} (trace convention), x in [0, rho].
double mean_curvature(const ProfileSolution& sol, double x);
/// Closed-form mean curvature sqrt(2C) (1 + 1/w^2)^{-1/4} for w > 0.
double mean_curvature_closed_form(double C, double w);
/// Squared surface gradient of H: (1+w^2)^{-1} [ (w''(1+w^2) - 3 w (w')^2) / (1+w^2)^{5/2} ]^2.
double grad_H_squared(const ProfileSolution& sol, double x);

/// First-order route: x(w) and u(w) by quadrature of
/// dx/dw = 1/(sqrt(2Cw) (1+w^2)^{5/4}),  du/dw = sqrt(w/(2C)) / (1+w^2)^{5/4}.
double x_at_w(double C, double w, double rtol = 1e-12);
double u_at_w(double C, double w, double rtol = 1e-12);
double rho_by_quadrature(double C, double rtol = 1e-12);
double xi_by_quadrature(double C, double rtol = 1e-12);

/// Second chart branch: w~' = sqrt(2C) (1+w~^2)^{5/4}, w~(0) = 0, u~(0) = 0.
/// w~ is odd and u~ is even; the branch is integrated on both sides of 0.
class SecondBranch {
  public:
    double C() const { return C_; }
    double x_cover() const { return x_cover_; }  // symmetric: [-x_cover, x_cover]
    double w_cut() const { return w_cut_; }
    /// Half-width of this chart's maximal interval (blow-up abscissa); equals xi.
    double half_width() const { return half_width_; }
    /// Limit of u~ at the blow-up edge; equals rho.
    double height() const { return height_; }

    BranchPoint at(double x_tilde) const;

  private:
    friend SecondBranch solve_second_branch(double C, double rtol);
    double C_ = 0, x_cover_ = 0, w_cut_ = 0, half_width_ = 0, height_ = 0;
    ode::IvpSolution fwd_, bwd_;
};

SecondBranch solve_second_branch(double C, double rtol = 1e-12);

enum class JunctionKind { HZero, HMax };

struct Junction {
    std::size_t point = 0;  // index into AssembledProfile::points
    JunctionKind kind = JunctionKind::HZero;
    double tangent_gap = 0;  // chart-overlap tangent mismatch (radians)
    double h_gap = 0;        // mean-curvature mismatch across the junction
};

struct ProfilePoint {
    double x = 0, z = 0;
    double tangent_angle = 0;  // continuous along the curve
    double H = 0;              // signed mean curvature of the cylinder through this point
    double gradH2 = 0;
};

/// Periodic planar profile in the xz-plane: alternating copies of the two
/// branches glued by chart isometries (translate to the previous endpoint,
/// rotate the axes by 90 degrees), with an orientation parity that flips
/// after each second-branch arc. One period cell is four quarter arcs and
/// advances by (0, 4 xi).
struct AssembledProfile {
    double C = 0;
    int period_cells = 0;
    double step = 0;
    std::vector<ProfilePoint> points;
    std::vector<Junction> junctions;
    std::size_t points_per_cell = 0;
};

AssembledProfile assemble_profile(double C, int periods, double step, double rtol = 1e-12,
                                  double junction_tol = 1e-6);

/// Angular diameter of the set of unit normals along the profile.
double gauss_map_extent(const AssembledProfile& p);

/// Number of self-intersections among non-adjacent polyline segments of the
/// first period cell.
std::size_t count_self_intersections(const AssembledProfile& p);

/// (1/4) * integral of H^2 over one period cell, per unit length in y.
double willmore_energy_per_cell(const ProfileSolution& b1, const SecondBranch& b2);
double willmore_energy_per_cell(double C, double rtol = 1e-12);

void write_branch_csv(std::ostream& os, const ProfileSolution& sol, int n_samples);
void write_profile_csv(std::ostream& os, const AssembledProfile& p);

}  // namespace willmore::profile
