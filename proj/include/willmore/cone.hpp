#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "willmore/ivp.hpp"

namespace willmore::cone {

struct GeneratorSample {
    double s = 0, H = 0, Hp = 0;
};

/// Generator curvature of a Willmore cone: H'' = -H (1 + H^2/2) with either
/// the crest initial data H(0) = a, H'(0) = 0 or the zero-crossing data
/// H(0) = 0, H'(0) = -sqrt(a^2 + a^4/4). The combination
/// (H')^2 + H^2 + H^4/4 is conserved and equals a^2 + a^4/4.
class ConeGeneratorSolution {
  public:
    double a() const { return a_; }
    double c() const { return c_; }            // first positive zero (crest data)
    double energy() const { return a_ * a_ + 0.25 * a_ * a_ * a_ * a_; }
    double period() const { return 4.0 * c_; }
    double s_end() const { return s_end_; }
    /// Max relative deviation of the conserved combination over the
    /// integrator's accepted samples.
    double energy_drift() const { return drift_; }

    double H(double s) const { return ivp_.eval(s, 0); }
    double Hp(double s) const { return ivp_.eval(s, 1); }
    std::vector<GeneratorSample> samples() const;

  private:
    friend ConeGeneratorSolution solve_curvature(double, double, double);
    friend ConeGeneratorSolution solve_curvature_from_zero(double, double, double);
    double a_ = 0, c_ = 0, s_end_ = 0, drift_ = 0;
    ode::IvpSolution ivp_;
};

ConeGeneratorSolution solve_curvature(double a, double s_end, double rtol = 1e-12);
ConeGeneratorSolution solve_curvature_from_zero(double a, double s_end, double rtol = 1e-12);

/// First positive zero of the crest solution, by event detection. The zero
/// provably occurs before pi/2; not finding one before pi is a hard error.
double compute_c(double a, double rtol = 1e-12);

/// Large-a limit profile: Psi'' = -Psi^3/2, Psi(0) = 1, Psi'(0) = 0, with
/// (Psi')^2 = (1 - Psi^4)/4 and first zero alpha. Covered on [0, 2 alpha].
class LimitProfile {
  public:
    double alpha() const { return alpha_; }
    double psi(double s) const { return ivp_.eval(s, 0); }
    double psip(double s) const { return ivp_.eval(s, 1); }

  private:
    friend LimitProfile solve_limit_profile(double rtol);
    double alpha_ = 0;
    ode::IvpSolution ivp_;
};

LimitProfile solve_limit_profile(double rtol = 1e-12);
/// alpha by separating the energy identity: int_0^1 2 dPsi / sqrt(1 - Psi^4).
double alpha_by_quadrature(double rtol = 1e-12);

using Vec3 = std::array<double, 3>;

struct SphereSample {
    double s = 0;
    Vec3 gamma{};
    Vec3 gamma_p{};
};

/// Unit-speed curve on the unit sphere with geodesic curvature H_a(s),
/// integrated in ambient coordinates as gamma'' = -|gamma'|^2 gamma +
/// H (gamma x gamma'), from gamma(0) = (1,0,0), gamma'(0) = (0,1,0)
/// (start point in the xz-plane, start velocity normal to it).
struct SphereCurve {
    double a = 0;
    double s_min = 0, s_max = 0, ds = 0;
    std::vector<SphereSample> samples;  // uniform grid, s_min to s_max inclusive
    /// Max over samples of |1-|gamma||, |1-|gamma'||, |gamma.gamma'| before
    /// the periodic renormalization.
    double constraint_drift = 0;

    std::size_t index_of(double s) const;
    const SphereSample& at(double s) const { return samples[index_of(s)]; }
};

SphereCurve solve_sphere_curve(double a, double s_min, double s_max, double rtol = 1e-12,
                               double ds = 0.002, double drift_tol = 1e-8);

struct SpherePoint {
    Vec3 gamma{};
    Vec3 gamma_p{};
};

/// Curve point at an exact parameter value, by direct integration from 0.
SpherePoint sphere_point(double a, double s, double rtol = 1e-12);

/// Geodesic distance between the curve points at the two zeros of H
/// bracketing the crest: arccos(gamma(-c_a) . gamma(c_a)), clamped.
double compute_T(double a, double rtol = 1e-12);

struct SweepRow {
    double a = 0, c = 0, energy = 0, T = 0;
};

std::vector<SweepRow> sweep(const std::vector<double>& a_values, bool parallel = true);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

struct ClosedConeCandidate {
    int m = 0;
    double a_star = 0;
    double c_star = 0;
    double T_star = 0;
    double length = 0;  // 4 m c_star
    double margin_over_2pi = 0;
};

/// Scan T(a) - pi/m for sign changes on a log grid over [lo, hi] and refine
/// each; closure of the cone generator requires T = pi/m with m >= 2 arcs
/// meeting at angle conditions (m = 1 is the great-circle case and rejected).
std::vector<ClosedConeCandidate> find_closed_cones(int m, double lo, double hi, int n,
                                                   bool parallel = true);

/// Chord-summed length of the closed generator: 2m copies of the sampled arc
/// over one half-period [-c_a, c_a]. Independent of the 4 m c_a bookkeeping.
double closed_curve_arc_length(double a, int m, double ds = 0.002);

/// (H, K) of the cone surface r gamma(s): H = H_a(s)/r, K = 0.
std::pair<double, double> cone_surface_fields(double a, double r, double s);

/// (H + H'' + H^3/2)/r^3 with H'' recomputed by five-point finite
/// differences from the trajectory (not from the equation).
double cone_willmore_residual(double a, double r, double s);
/// Same residual for an arbitrary curvature profile (negative controls).
double cone_willmore_residual(const std::function<double(double)>& curv, double r, double s);

}  // namespace willmore::cone
