#pragma once

#include <functional>
#include <span>
#include <vector>

namespace willmore::roots {

/// Bracketed scalar root: bisection with secant acceleration. Deterministic;
/// requires f(lo) and f(hi) of opposite sign (or one of them zero).
/// Throws std::invalid_argument on an invalid bracket.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-13);

/// Scan a grid for sign changes and refine each bracket. Returns all roots found,
/// in ascending grid order. Grid values must be strictly monotone.
std::vector<double> scan_roots(const std::function<double(double)>& f,
                               std::span<const double> grid, double tol = 1e-13);

/// Log-spaced grid helper for parameter sweeps.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace willmore::roots
