#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "willmore/ivp.hpp"

using namespace willmore;

namespace {

ode::IvpProblem scalar_problem(std::function<double(double, double)> f, double y0) {
    ode::IvpProblem p;
    p.dimension = 1;
    p.t0 = 0.0;
    p.y0 = {y0};
    p.rhs = [f = std::move(f)](double t, std::span<const double> y, std::span<double> dy) {
        dy[0] = f(t, y[0]);
    };
    return p;
}

}  // namespace

TEST_CASE("zero right-hand side stays constant") {
    auto p = scalar_problem([](double, double) { return 0.0; }, 3.0);
    auto sol = ode::integrate(p, 1.0);
    CHECK(sol.reason() == ode::StopReason::ReachedEnd);
    CHECK(sol.eval(1.0, 0) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("exponential growth hits e at t=1") {
    auto p = scalar_problem([](double, double y) { return y; }, 1.0);
    ode::IvpOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;
    auto sol = ode::integrate(p, 1.0, opts);
    CHECK(sol.eval(1.0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-11));
}

TEST_CASE("quadratic blow-up reported as step underflow near t=1") {
    auto p = scalar_problem([](double, double y) { return y * y; }, 1.0);
    auto sol = ode::integrate(p, 2.0);
    CHECK(sol.reason() == ode::StopReason::StepUnderflow);
    CHECK(sol.t_end() > 0.999);
    CHECK(sol.t_end() <= 1.0);
}

TEST_CASE("event location for linear decay") {
    auto p = scalar_problem([](double, double) { return -1.0; }, 1.0);
    p.events.push_back([](double, std::span<const double> y) { return y[0]; });
    auto sol = ode::integrate(p, 5.0);
    CHECK(sol.reason() == ode::StopReason::EventHit);
    CHECK(sol.event_index() == 0);
    CHECK(sol.t_end() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dense output reproduces stored samples") {
    auto p = scalar_problem([](double t, double) { return std::cos(t); }, 0.0);
    auto sol = ode::integrate(p, 6.0);
    for (std::size_t i = 0; i < sol.times().size(); ++i) {
        CHECK(sol.eval(sol.times()[i], 0) ==
              doctest::Approx(sol.states()[i][0]).epsilon(1e-12));
    }
    // And interpolates well between samples.
    CHECK(sol.eval(2.5, 0) == doctest::Approx(std::sin(2.5)).epsilon(1e-9));
}

TEST_CASE("halving rtol never increases the error") {
    SUBCASE("exponential") {
        double prev_err = 1e300;
        for (double rtol : {1e-6, 3e-7, 1e-7, 3e-8, 1e-8, 1e-9, 1e-10}) {
            auto p = scalar_problem([](double, double y) { return y; }, 1.0);
            ode::IvpOptions o;
            o.rtol = rtol;
            o.atol = rtol * 1e-2;
            auto sol = ode::integrate(p, 1.0, o);
            const double err = std::abs(sol.eval(1.0, 0) - std::exp(1.0));
            CHECK(err <= prev_err * 1.5 + 1e-15);  // small slack for step-grid jitter
            prev_err = std::max(err, 1e-16);
        }
    }
    SUBCASE("reciprocal blow-up solution before the pole") {
        double prev_err = 1e300;
        for (double rtol : {1e-6, 1e-8, 1e-10}) {
            auto p = scalar_problem([](double, double y) { return y * y; }, 1.0);
            ode::IvpOptions o;
            o.rtol = rtol;
            o.atol = rtol * 1e-2;
            auto sol = ode::integrate(p, 0.9, o);
            const double err = std::abs(sol.eval(0.9, 0) - 10.0);
            CHECK(err <= prev_err + 1e-15);
            prev_err = err;
        }
    }
}

TEST_CASE("backward integration") {
    auto p = scalar_problem([](double, double y) { return y; }, 1.0);
    auto sol = ode::integrate(p, -1.0, {.rtol = 1e-12, .atol = 1e-14});
    CHECK(sol.eval(-1.0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-11));
}

TEST_CASE("invalid input rejected") {
    auto p = scalar_problem([](double, double y) { return y; }, 1.0);
    CHECK_THROWS_AS(ode::integrate(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ode::integrate(p, 1.0, {.rtol = 0.0}), std::invalid_argument);
}
