#pragma once

#include <functional>
#include <limits>

namespace willmore::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;     // accumulated Kronrod error estimate
    bool converged = true;  // false: refinement budget exhausted, value is partial
};

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Adaptive Gauss7/Kronrod15 on a finite interval with smooth integrand.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double rtol = 1e-12, double atol = 0.0);

struct EndpointSpec {
    bool sqrt_singularity_lower = false;  // f ~ (w-a)^{-1/2} near a
    bool sqrt_singularity_upper = false;  // f ~ (b-w)^{-1/2} near b
};

/// Improper integral with endpoint substitutions: w = a + t^2 (or b - t^2) at an
/// inverse-square-root endpoint, w = c/t^2 for an infinite upper limit (requires
/// tail decay at least O(w^{-3/2})).
Result integrate_improper(const std::function<double(double)>& f, double a, double b,
                          EndpointSpec spec = {}, double rtol = 1e-12);

}  // namespace willmore::quad
