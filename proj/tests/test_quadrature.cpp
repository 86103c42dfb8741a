#include <doctest.h>

#include <cmath>
#include <numbers>

#include "willmore/quadrature.hpp"

using namespace willmore;

TEST_CASE("inverse square root endpoint") {
    auto r = quad::integrate_improper([](double w) { return 1.0 / std::sqrt(w); }, 0.0, 1.0,
                                      {.sqrt_singularity_lower = true});
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("arctangent tail") {
    auto r = quad::integrate_improper([](double w) { return 1.0 / (1.0 + w * w); }, 0.0,
                                      quad::infinity);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("smooth finite integral") {
    auto r = quad::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("splitting invariance at an interior point") {
    auto f = [](double w) { return std::exp(-w) / std::sqrt(w); };
    const double rtol = 1e-10;
    auto whole = quad::integrate_improper(f, 0.0, quad::infinity,
                                          {.sqrt_singularity_lower = true}, rtol);
    auto left = quad::integrate_improper(f, 0.0, 0.7, {.sqrt_singularity_lower = true}, rtol);
    auto right = quad::integrate_improper(f, 0.7, quad::infinity, {}, rtol);
    CHECK(whole.converged);
    CHECK(std::abs(whole.value - (left.value + right.value)) <=
          2.0 * rtol * std::abs(whole.value));
    // Gamma(1/2) = sqrt(pi)
    CHECK(whole.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-10));
}

TEST_CASE("upper sqrt singularity") {
    auto r = quad::integrate_improper([](double w) { return 1.0 / std::sqrt(1.0 - w); }, 0.0,
                                      1.0, {.sqrt_singularity_upper = true});
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}
