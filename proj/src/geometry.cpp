#include "willmore/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace willmore::geom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

template <typename Body>
void run_rows(std::size_t n, bool parallel, const Body& body) {
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
            body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
}

}  // namespace

SurfaceGrid make_grid(const std::function<Vec3(double, double)>& f, double a0, double a1,
                      std::size_t na, double b0, double b1, std::size_t nb) {
    if (na < 2 || nb < 2) throw std::invalid_argument("make_grid: need at least 2x2 nodes");
    if (!(a1 > a0) || !(b1 > b0)) throw std::invalid_argument("make_grid: empty parameter box");
    SurfaceGrid g;
    g.na = na;
    g.nb = nb;
    g.ha = (a1 - a0) / static_cast<double>(na - 1);
    g.hb = (b1 - b0) / static_cast<double>(nb - 1);
    g.pos.resize(na * nb);
    for (std::size_t i = 0; i < na; ++i) {
        const double a = a0 + static_cast<double>(i) * g.ha;
        for (std::size_t j = 0; j < nb; ++j) {
            const double b = b0 + static_cast<double>(j) * g.hb;
            g.pos[g.idx(i, j)] = f(a, b);
            for (double c : g.pos[g.idx(i, j)])
                if (!std::isfinite(c)) throw std::invalid_argument("make_grid: non-finite position");
        }
    }
    return g;
}

FundamentalForms fundamental_forms(const SurfaceGrid& grid, bool parallel) {
    const std::size_t na = grid.na, nb = grid.nb, n = na * nb;
    FundamentalForms ff;
    ff.na = na;
    ff.nb = nb;
    ff.E.assign(n, kNaN);
    ff.F.assign(n, kNaN);
    ff.G.assign(n, kNaN);
    ff.L.assign(n, kNaN);
    ff.M.assign(n, kNaN);
    ff.N.assign(n, kNaN);
    ff.normal.assign(n, Vec3{kNaN, kNaN, kNaN});
    ff.valid.assign(n, 0);
    ff.degenerate.assign(n, 0);

    const double ha = grid.ha, hb = grid.hb;
    run_rows(na, parallel, [&](std::size_t i) {
        if (i == 0 || i + 1 >= na) return;
        for (std::size_t j = 1; j + 1 < nb; ++j) {
            const std::size_t k = grid.idx(i, j);
            const Vec3 fa = scale(sub(grid.at(i + 1, j), grid.at(i - 1, j)), 0.5 / ha);
            const Vec3 fb = scale(sub(grid.at(i, j + 1), grid.at(i, j - 1)), 0.5 / hb);
            Vec3 faa, fbb, fab;
            for (int c = 0; c < 3; ++c) {
                faa[c] = (grid.at(i + 1, j)[c] - 2.0 * grid.at(i, j)[c] +
                          grid.at(i - 1, j)[c]) /
                         (ha * ha);
                fbb[c] = (grid.at(i, j + 1)[c] - 2.0 * grid.at(i, j)[c] +
                          grid.at(i, j - 1)[c]) /
                         (hb * hb);
                fab[c] = (grid.at(i + 1, j + 1)[c] - grid.at(i + 1, j - 1)[c] -
                          grid.at(i - 1, j + 1)[c] + grid.at(i - 1, j - 1)[c]) /
                         (4.0 * ha * hb);
            }
            const double E = dot(fa, fa), F = dot(fa, fb), G = dot(fb, fb);
            const Vec3 nvec = cross(fa, fb);
            const double nn = norm(nvec);
            ff.E[k] = E;
            ff.F[k] = F;
            ff.G[k] = G;
            ff.valid[k] = 1;
            if (!(E * G - F * F > 0.0) || nn <= 0.0) {
                ff.degenerate[k] = 1;
                continue;
            }
            const Vec3 un = scale(nvec, 1.0 / nn);
            ff.normal[k] = un;
            ff.L[k] = dot(faa, un);
            ff.M[k] = dot(fab, un);
            ff.N[k] = dot(fbb, un);
        }
    });
    return ff;
}

std::vector<double> mean_curvature(const FundamentalForms& ff) {
    std::vector<double> h(ff.E.size(), kNaN);
    for (std::size_t k = 0; k < h.size(); ++k) {
        if (!ff.valid[k] || ff.degenerate[k]) continue;
        const double den = ff.E[k] * ff.G[k] - ff.F[k] * ff.F[k];
        h[k] = (ff.L[k] * ff.G[k] - 2.0 * ff.M[k] * ff.F[k] + ff.N[k] * ff.E[k]) / den;
    }
    return h;
}

std::vector<double> gauss_curvature(const FundamentalForms& ff) {
    std::vector<double> kk(ff.E.size(), kNaN);
    for (std::size_t k = 0; k < kk.size(); ++k) {
        if (!ff.valid[k] || ff.degenerate[k]) continue;
        const double den = ff.E[k] * ff.G[k] - ff.F[k] * ff.F[k];
        kk[k] = (ff.L[k] * ff.N[k] - ff.M[k] * ff.M[k]) / den;
    }
    return kk;
}

std::vector<double> willmore_residual(const SurfaceGrid& grid,
                                      const std::vector<double>& H_field,
                                      const std::vector<double>& K_field, bool parallel) {
    const std::size_t na = grid.na, nb = grid.nb, n = na * nb;
    if (H_field.size() != n || K_field.size() != n)
        throw std::invalid_argument("willmore_residual: field size mismatch");

    // Metric terms at every node with a first-derivative stencil.
    std::vector<double> P(n, kNaN), Q(n, kNaN), sqrtg(n, kNaN);
    const double ha = grid.ha, hb = grid.hb;
    run_rows(na, parallel, [&](std::size_t i) {
        if (i == 0 || i + 1 >= na) return;
        for (std::size_t j = 1; j + 1 < nb; ++j) {
            const std::size_t k = grid.idx(i, j);
            const Vec3 fa = scale(sub(grid.at(i + 1, j), grid.at(i - 1, j)), 0.5 / ha);
            const Vec3 fb = scale(sub(grid.at(i, j + 1), grid.at(i, j - 1)), 0.5 / hb);
            const double E = dot(fa, fa), F = dot(fa, fb), G = dot(fb, fb);
            const double det = E * G - F * F;
            if (!(det > 0.0)) continue;
            const double sg = std::sqrt(det);
            const double Ha = (H_field[grid.idx(i + 1, j)] - H_field[grid.idx(i - 1, j)]) /
                              (2.0 * ha);
            const double Hb = (H_field[grid.idx(i, j + 1)] - H_field[grid.idx(i, j - 1)]) /
                              (2.0 * hb);
            // Contravariant metric: g^11 = G/det, g^22 = E/det, g^12 = -F/det.
            P[k] = sg * (G * Ha - F * Hb) / det;
            Q[k] = sg * (E * Hb - F * Ha) / det;
            sqrtg[k] = sg;
        }
    });

    std::vector<double> res(n, kNaN);
    run_rows(na, parallel, [&](std::size_t i) {
        if (i < 2 || i + 2 >= na) return;
        for (std::size_t j = 2; j + 2 < nb; ++j) {
            const std::size_t k = grid.idx(i, j);
            if (!std::isfinite(sqrtg[k])) continue;
            const double dP = (P[grid.idx(i + 1, j)] - P[grid.idx(i - 1, j)]) / (2.0 * ha);
            const double dQ = (Q[grid.idx(i, j + 1)] - Q[grid.idx(i, j - 1)]) / (2.0 * hb);
            if (!std::isfinite(dP) || !std::isfinite(dQ)) continue;
            const double lap = (dP + dQ) / sqrtg[k];
            const double H = H_field[k], K = K_field[k];
            res[k] = lap + 0.5 * (H * H - 4.0 * K) * H;
        }
    });
    return res;
}

double max_interior_residual(const std::vector<double>& residual) {
    double m = 0.0;
    for (double r : residual)
        if (std::isfinite(r)) m = std::max(m, std::abs(r));
    return m;
}

namespace {

void add_quad(Mesh& mesh, std::size_t v00, std::size_t v10, std::size_t v11,
              std::size_t v01) {
    // Split along the shorter diagonal to avoid slivers on curved strips.
    const double d0 = norm(sub(mesh.vertices[v00], mesh.vertices[v11]));
    const double d1 = norm(sub(mesh.vertices[v10], mesh.vertices[v01]));
    if (d0 <= d1) {
        mesh.triangles.push_back({v00, v10, v11});
        mesh.triangles.push_back({v00, v11, v01});
    } else {
        mesh.triangles.push_back({v10, v11, v01});
        mesh.triangles.push_back({v10, v01, v00});
    }
}

}  // namespace

Mesh build_cylinder_mesh(const profile::AssembledProfile& p, double y_extent,
                         std::size_t n_y) {
    if (p.points.size() < 2) throw std::invalid_argument("build_cylinder_mesh: empty profile");
    if (n_y < 2) throw std::invalid_argument("build_cylinder_mesh: need n_y >= 2");
    if (!(y_extent > 0.0)) throw std::invalid_argument("build_cylinder_mesh: y_extent <= 0");

    Mesh mesh;
    const std::size_t np = p.points.size();
    mesh.vertices.reserve(np * n_y);
    mesh.H.reserve(np * n_y);
    mesh.K.assign(np * n_y, 0.0);
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < n_y; ++j) {
            const double y = -0.5 * y_extent +
                             y_extent * static_cast<double>(j) / static_cast<double>(n_y - 1);
            mesh.vertices.push_back({p.points[i].x, y, p.points[i].z});
            mesh.H.push_back(p.points[i].H);
        }
    }
    for (std::size_t i = 0; i + 1 < np; ++i)
        for (std::size_t j = 0; j + 1 < n_y; ++j)
            add_quad(mesh, i * n_y + j, (i + 1) * n_y + j, (i + 1) * n_y + j + 1,
                     i * n_y + j + 1);
    return mesh;
}

Mesh build_cone_mesh(const cone::SphereCurve& curve, double r0, double r1,
                     std::size_t n_r) {
    if (!(r0 > 0.0)) throw std::invalid_argument("build_cone_mesh: apex excluded, r0 must be > 0");
    if (!(r1 > r0)) throw std::invalid_argument("build_cone_mesh: need r1 > r0");
    if (n_r < 2) throw std::invalid_argument("build_cone_mesh: need n_r >= 2");
    if (curve.samples.size() < 2)
        throw std::invalid_argument("build_cone_mesh: curve has too few samples");

    const double s_reach = std::max(std::abs(curve.s_min), std::abs(curve.s_max)) + 0.5;
    const auto gen = cone::solve_curvature(curve.a, s_reach);

    Mesh mesh;
    const std::size_t ns = curve.samples.size();
    mesh.vertices.reserve(n_r * ns);
    mesh.H.reserve(n_r * ns);
    mesh.K.assign(n_r * ns, 0.0);
    for (std::size_t i = 0; i < n_r; ++i) {
        const double r =
            r0 + (r1 - r0) * static_cast<double>(i) / static_cast<double>(n_r - 1);
        for (std::size_t j = 0; j < ns; ++j) {
            const auto& g = curve.samples[j].gamma;
            mesh.vertices.push_back({r * g[0], r * g[1], r * g[2]});
            mesh.H.push_back(gen.H(std::abs(curve.samples[j].s)) / r);
        }
    }
    for (std::size_t i = 0; i + 1 < n_r; ++i)
        for (std::size_t j = 0; j + 1 < ns; ++j)
            add_quad(mesh, i * ns + j, (i + 1) * ns + j, (i + 1) * ns + j + 1, i * ns + j + 1);
    return mesh;
}

}  // namespace willmore::geom
