#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "willmore/roots.hpp"

using namespace willmore;

TEST_CASE("linear root") {
    CHECK(roots::find_root([](double x) { return x - 1.0; }, 0.0, 2.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cosine root is pi/2") {
    CHECK(roots::find_root([](double x) { return std::cos(x); }, 1.0, 2.0) ==
          doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
}

TEST_CASE("quadratic 2e^2+4e-a^2 against the closed form") {
    const double a = 0.1;
    auto f = [a](double e) { return 2.0 * e * e + 4.0 * e - a * a; };
    const double expected = (-2.0 + std::sqrt(4.0 + 2.0 * a * a)) / 2.0;
    CHECK(roots::find_root(f, 0.0, 0.1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("invalid bracket rejected") {
    CHECK_THROWS_AS(roots::find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("grid scan finds every sign change") {
    std::vector<double> grid;
    for (int i = 0; i <= 100; ++i) grid.push_back(0.1 + 10.0 * i / 100.0);
    auto rts = roots::scan_roots([](double x) { return std::sin(x); }, grid);
    REQUIRE(rts.size() == 3);
    CHECK(rts[0] == doctest::Approx(std::numbers::pi).epsilon(1e-10));
    CHECK(rts[1] == doctest::Approx(2 * std::numbers::pi).epsilon(1e-10));
    CHECK(rts[2] == doctest::Approx(3 * std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("log grid endpoints exact") {
    auto g = roots::log_grid(1e-3, 1e2, 400);
    CHECK(g.size() == 400);
    CHECK(g.front() == 1e-3);
    CHECK(g.back() == 1e2);
    CHECK(g[1] > g[0]);
}
