#include "willmore/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace willmore::roots {

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("find_root: need lo < hi");
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!(flo * fhi < 0.0)) throw std::invalid_argument("find_root: no sign change on bracket");

    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        // Secant candidate, fall back to bisection when it leaves the bracket
        // or fails to shrink it fast enough.
        double x = lo - flo * (hi - lo) / (fhi - flo);
        const double mid = 0.5 * (lo + hi);
        if (!(x > lo && x < hi)) x = mid;
        // Keep the secant point away from the bracket ends.
        const double margin = 0.01 * (hi - lo);
        x = std::min(std::max(x, lo + margin), hi - margin);
        if (it % 3 == 2) x = mid;  // guaranteed geometric shrink

        const double fx = f(x);
        if (fx == 0.0) return x;
        if (flo * fx < 0.0) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    return std::abs(flo) < std::abs(fhi) ? lo : hi;
}

std::vector<double> scan_roots(const std::function<double(double)>& f,
                               std::span<const double> grid, double tol) {
    std::vector<double> out;
    if (grid.size() < 2) return out;
    double fprev = f(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double fcur = f(grid[i]);
        if (fprev == 0.0) {
            out.push_back(grid[i - 1]);
        } else if (fprev * fcur < 0.0) {
            out.push_back(find_root(f, grid[i - 1], grid[i], tol));
        }
        fprev = fcur;
    }
    if (fprev == 0.0) out.push_back(grid.back());
    return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw std::invalid_argument("log_grid: bad range");
    std::vector<double> g(n);
    const double l0 = std::log(lo), l1 = std::log(hi);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = std::exp(l0 + (l1 - l0) * static_cast<double>(i) / static_cast<double>(n - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

}  // namespace willmore::roots
