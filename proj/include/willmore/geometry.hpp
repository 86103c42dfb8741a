#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "willmore/cone.hpp"
#include "willmore/profile.hpp"

namespace willmore::geom {

using Vec3 = std::array<double, 3>;

/// Rectangular parametric grid: node (i, j) sits at parameters
/// (a0 + i ha, b0 + j hb) and positions are stored row-major (i * nb + j).
struct SurfaceGrid {
    std::size_t na = 0, nb = 0;
    double ha = 0, hb = 0;
    std::vector<Vec3> pos;

    std::size_t idx(std::size_t i, std::size_t j) const { return i * nb + j; }
    const Vec3& at(std::size_t i, std::size_t j) const { return pos[idx(i, j)]; }
    Vec3& at(std::size_t i, std::size_t j) { return pos[idx(i, j)]; }
};

SurfaceGrid make_grid(const std::function<Vec3(double, double)>& f, double a0, double a1,
                      std::size_t na, double b0, double b1, std::size_t nb);

/// First and second fundamental forms from second-order central differences.
/// Mean curvature uses the SUM convention H = (L G - 2 M F + N E)/(E G - F^2)
/// (trace of the shape operator, so the unit sphere has |H| = 2).
/// Boundary nodes lack a stencil and are marked invalid.
struct FundamentalForms {
    std::size_t na = 0, nb = 0;
    std::vector<double> E, F, G, L, M, N;
    std::vector<Vec3> normal;
    std::vector<std::uint8_t> valid;       // full central stencil available
    std::vector<std::uint8_t> degenerate;  // E G - F^2 not positive

    std::size_t idx(std::size_t i, std::size_t j) const { return i * nb + j; }
};

FundamentalForms fundamental_forms(const SurfaceGrid& grid, bool parallel = true);

/// Per-node curvatures; NaN where the forms are invalid or degenerate.
std::vector<double> mean_curvature(const FundamentalForms& ff);
std::vector<double> gauss_curvature(const FundamentalForms& ff);

/// Pointwise Willmore residual Delta_g H + (1/2)(H^2 - 4K) H, with the
/// Laplace-Beltrami operator in divergence form
/// (1/sqrt g) d_i (sqrt g g^{ij} d_j H) on the grid metric. The double
/// differencing shrinks the usable region by two nodes per side; everything
/// else is NaN.
std::vector<double> willmore_residual(const SurfaceGrid& grid,
                                      const std::vector<double>& H_field,
                                      const std::vector<double>& K_field,
                                      bool parallel = true);

/// Largest |residual| over non-NaN nodes.
double max_interior_residual(const std::vector<double>& residual);

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::size_t, 3>> triangles;
    std::vector<double> H, K;  // per vertex
};

/// Extrude the planar profile along the y-axis; per-vertex H comes from the
/// profile (the straight rulings contribute nothing), K = 0. Vertex order is
/// profile-point-major: index = point * n_y + ring.
Mesh build_cylinder_mesh(const profile::AssembledProfile& p, double y_extent,
                         std::size_t n_y);

/// Cone over the sampled spherical curve: vertices r_i gamma(s_j), per-vertex
/// H = H_a(s_j)/r_i, K = 0. The apex (r = 0) is excluded: r0 must be positive.
Mesh build_cone_mesh(const cone::SphereCurve& curve, double r0, double r1,
                     std::size_t n_r);

}  // namespace willmore::geom
