#include "willmore/quadrature.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace willmore::quad {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double xk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                          0.741531185599394, 0.586087235467691, 0.405845151377397,
                          0.207784955007898, 0.0};
constexpr double wk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                          0.140653259715525, 0.169004726639267, 0.190350578064785,
                          0.204432940075298, 0.209482141084728};
constexpr double wg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

struct Gk {
    double value, error;
};

Gk gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double fs = (i == 7) ? f(c) : f(c - hw * xk[i]) + f(c + hw * xk[i]);
        resk += wk[i] * fs;
        if (i % 2 == 1) resg += wg[i / 2] * fs;  // Gauss-7 nodes are the odd Kronrod nodes
    }
    resk *= hw;
    resg *= hw;
    const double err = std::abs(resk - resg);
    return {resk, std::max(err, std::abs(resk) * 1e-16)};
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, double rtol,
                 double atol) {
    if (a == b) return {0.0, 0.0, true};
    if (!(rtol > 0.0)) throw std::invalid_argument("quad::integrate: rtol must be positive");

    constexpr std::size_t max_intervals = 4096;
    const double uround = std::numeric_limits<double>::epsilon();

    // Worst-interval-first refinement with a hard interval budget, so the
    // routine terminates even when the error estimates are roundoff-limited.
    std::priority_queue<Interval> heap;
    const Gk first = gk15(f, a, b);
    heap.push({a, b, first.value, first.error});
    double value = first.value, error = first.error;

    while (heap.size() < max_intervals) {
        const double tol = std::max(atol, rtol * std::max(std::abs(value), 1e-300));
        if (error <= tol) break;
        if (error <= 50.0 * uround * std::abs(value)) break;  // roundoff floor
        const Interval worst = heap.top();
        if (std::abs(worst.b - worst.a) <=
            4.0 * uround * std::max(std::abs(worst.a), std::abs(worst.b)))
            break;  // cannot subdivide further
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        const Gk gl = gk15(f, worst.a, m);
        const Gk gr = gk15(f, m, worst.b);
        value += gl.value + gr.value - worst.value;
        error += gl.error + gr.error - worst.error;
        heap.push({worst.a, m, gl.value, gl.error});
        heap.push({m, worst.b, gr.value, gr.error});
    }

    const double tol = std::max(atol, rtol * std::max(std::abs(value), 1e-300));
    const bool converged = error <= std::max(tol, 50.0 * uround * std::abs(value));
    return {value, error, converged};
}

Result integrate_improper(const std::function<double(double)>& f, double a, double b,
                          EndpointSpec spec, double rtol) {
    if (std::isinf(b)) {
        // Finite head plus transformed tail w = c / t^2.
        const double c = std::max(a + 1.0, std::max(2.0 * a, 1.0));
        EndpointSpec head = spec;
        head.sqrt_singularity_upper = false;
        Result r1 = integrate_improper(f, a, c, head, rtol);
        auto tail = [&](double t) { return f(c / (t * t)) * 2.0 * c / (t * t * t); };
        Result r2 = integrate(tail, 0.0, 1.0, rtol);
        return {r1.value + r2.value, r1.error + r2.error, r1.converged && r2.converged};
    }
    if (spec.sqrt_singularity_lower && spec.sqrt_singularity_upper) {
        const double m = 0.5 * (a + b);
        Result r1 = integrate_improper(f, a, m, {true, false}, rtol);
        Result r2 = integrate_improper(f, m, b, {false, true}, rtol);
        return {r1.value + r2.value, r1.error + r2.error, r1.converged && r2.converged};
    }
    if (spec.sqrt_singularity_lower) {
        auto g = [&](double t) { return f(a + t * t) * 2.0 * t; };
        return integrate(g, 0.0, std::sqrt(b - a), rtol);
    }
    if (spec.sqrt_singularity_upper) {
        auto g = [&](double t) { return f(b - t * t) * 2.0 * t; };
        return integrate(g, 0.0, std::sqrt(b - a), rtol);
    }
    return integrate(f, a, b, rtol);
}

}  // namespace willmore::quad
