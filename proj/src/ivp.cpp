#include "willmore/ivp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace willmore::ode {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output coefficients.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

bool finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

bool IvpSolution::covers(double t) const {
    const double lo = std::min(times_.front(), times_.back());
    const double hi = std::max(times_.front(), times_.back());
    const double slack = 1e-12 * (hi - lo) + 1e-300;
    return t >= lo - slack && t <= hi + slack;
}

std::size_t IvpSolution::locate(double t) const {
    // steps_[k] covers [times_[k], times_[k+1]] (in traversal order).
    std::size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double t1 = times_[mid + 1];
        if (direction_ > 0 ? (t > t1) : (t < t1))
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

void IvpSolution::eval(double t, std::span<double> y) const {
    if (!covers(t)) throw std::domain_error("IvpSolution::eval: t outside covered interval");
    if (steps_.empty()) {
        for (std::size_t i = 0; i < dim_; ++i) y[i] = states_.front()[i];
        return;
    }
    const DenseStep& s = steps_[locate(t)];
    const double th = (t - s.t) / s.h;
    const double th1 = 1.0 - th;
    for (std::size_t i = 0; i < dim_; ++i)
        y[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
}

double IvpSolution::eval(double t, std::size_t component) const {
    if (!covers(t)) throw std::domain_error("IvpSolution::eval: t outside covered interval");
    if (steps_.empty()) return states_.front()[component];
    const DenseStep& s = steps_[locate(t)];
    const double th = (t - s.t) / s.h;
    const double th1 = 1.0 - th;
    const std::size_t i = component;
    return s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
}

IvpSolution integrate(const IvpProblem& p, double t_end, const IvpOptions& opts) {
    if (p.dimension == 0 || p.dimension != p.y0.size())
        throw std::invalid_argument("integrate: dimension/initial state mismatch");
    if (!(opts.rtol > 0.0) || !(opts.atol > 0.0))
        throw std::invalid_argument("integrate: tolerances must be positive");
    if (t_end == p.t0) throw std::invalid_argument("integrate: t_end equals t0");

    const std::size_t n = p.dimension;
    const int dir = t_end > p.t0 ? 1 : -1;
    const double hmax = opts.max_step > 0.0 ? opts.max_step : std::abs(t_end - p.t0);

    IvpSolution sol;
    sol.dim_ = n;
    sol.direction_ = dir;
    sol.times_.push_back(p.t0);
    sol.states_.push_back(p.y0);

    std::vector<double> y = p.y0, ynew(n), ytmp(n), yerr(n);
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    double t = p.t0;

    p.rhs(t, y, k1);
    if (!finite(k1)) throw std::invalid_argument("integrate: rhs not evaluable at (t0, y0)");

    std::vector<double> g0(p.events.size());
    for (std::size_t e = 0; e < p.events.size(); ++e) g0[e] = p.events[e](t, y);

    // Initial step size (simplified Hairer heuristic).
    double h = opts.initial_step;
    if (h == 0.0) {
        double d0 = 0.0, d1n = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sc = opts.atol + opts.rtol * std::abs(y[i]);
            d0 = std::max(d0, std::abs(y[i]) / sc);
            d1n = std::max(d1n, std::abs(k1[i]) / sc);
        }
        h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h = std::min(h, hmax);
    }
    h = std::abs(h) * dir;

    const double uround = std::numeric_limits<double>::epsilon();
    bool done = false;
    long nsteps = 0;

    while (!done) {
        if (++nsteps > opts.max_steps) throw std::runtime_error("integrate: max step count exceeded");

        if (dir * (t + h - t_end) > 0.0) h = t_end - t;
        const bool last = std::abs(t + h - t_end) <= uround * std::abs(t_end) * 4.0;

        if (std::abs(h) <= std::abs(t) * uround * 16.0 + 1e-30) {
            sol.reason_ = StopReason::StepUnderflow;
            break;
        }

        // Stages.
        auto axpy = [&](double tfrac, std::span<double> kout,
                        std::initializer_list<std::pair<double, const std::vector<double>*>> parts) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = 0.0;
                for (auto& [c, kv] : parts) acc += c * (*kv)[i];
                ytmp[i] = y[i] + h * acc;
            }
            p.rhs(t + tfrac * h, ytmp, kout);
        };

        axpy(c2, k2, {{a21, &k1}});
        axpy(c3, k3, {{a31, &k1}, {a32, &k2}});
        axpy(c4, k4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        axpy(c5, k5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        axpy(1.0, k6, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        p.rhs(t + h, ynew, k7);

        bool reject;
        double err = 0.0;
        if (!finite(ynew) || !finite(k7)) {
            reject = true;
            err = 10.0;
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                               e7 * k7[i]);
                const double sc =
                    opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
                err += (yerr[i] / sc) * (yerr[i] / sc);
            }
            err = std::sqrt(err / static_cast<double>(n));
            reject = err > 1.0;
        }

        if (reject) {
            const double fac = std::max(0.1, 0.9 * std::pow(std::max(err, 1e-10), -0.2));
            h *= std::min(fac, 0.9);
            continue;
        }

        // Accepted: build dense output for this step.
        IvpSolution::DenseStep ds;
        ds.t = t;
        ds.h = h;
        ds.r1.resize(n);
        ds.r2.resize(n);
        ds.r3.resize(n);
        ds.r4.resize(n);
        ds.r5.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = ynew[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            ds.r1[i] = y[i];
            ds.r2[i] = ydiff;
            ds.r3[i] = bspl;
            ds.r4[i] = ydiff - h * k7[i] - bspl;
            ds.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                            d7 * k7[i]);
        }
        sol.steps_.push_back(std::move(ds));

        const double tnew = t + h;

        // Event check on this step via dense output.
        int hit = -1;
        double thit = tnew;
        for (std::size_t e = 0; e < p.events.size(); ++e) {
            const double g1 = p.events[e](tnew, ynew);
            if (std::isfinite(g0[e]) && std::isfinite(g1) && g0[e] != 0.0 &&
                ((g0[e] < 0.0 && g1 >= 0.0) || (g0[e] > 0.0 && g1 <= 0.0))) {
                // Bisect on the dense interpolant.
                double lo = t, hi_ = tnew, glo = g0[e];
                std::vector<double> ymid(n);
                for (int it = 0; it < 128 && std::abs(hi_ - lo) >
                                                  uround * 8.0 * std::max(1.0, std::abs(tnew));
                     ++it) {
                    const double mid = 0.5 * (lo + hi_);
                    {
                        const auto& s = sol.steps_.back();
                        const double th = (mid - s.t) / s.h, th1 = 1.0 - th;
                        for (std::size_t i = 0; i < n; ++i)
                            ymid[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] +
                                                       th * (s.r4[i] + th1 * s.r5[i])));
                    }
                    const double gm = p.events[e](mid, ymid);
                    if ((glo < 0.0 && gm >= 0.0) || (glo > 0.0 && gm <= 0.0))
                        hi_ = mid;
                    else {
                        lo = mid;
                        glo = gm;
                    }
                }
                if (hit < 0 || dir * (hi_ - thit) < 0.0) {
                    hit = static_cast<int>(e);
                    thit = hi_;
                }
            }
            g0[e] = g1;
        }

        if (hit >= 0) {
            // Truncate at the event.
            std::vector<double> yev(n);
            const auto& s = sol.steps_.back();
            const double th = (thit - s.t) / s.h, th1 = 1.0 - th;
            for (std::size_t i = 0; i < n; ++i)
                yev[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
            // Keep the full-step dense polynomial (it is valid up to thit);
            // only the covered time range shrinks.
            sol.times_.push_back(thit);
            sol.states_.push_back(std::move(yev));
            sol.reason_ = StopReason::EventHit;
            sol.event_index_ = hit;
            break;
        }

        t = tnew;
        y = ynew;
        std::swap(k1, k7);  // FSAL
        sol.times_.push_back(t);
        sol.states_.push_back(y);

        if (max_abs(y) > opts.magnitude_guard) {
            sol.reason_ = StopReason::StepUnderflow;  // blow-up signal
            break;
        }
        if (last) {
            sol.reason_ = StopReason::ReachedEnd;
            done = true;
            break;
        }

        const double fac =
            std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 10.0);
        h *= fac;
        if (std::abs(h) > hmax) h = hmax * dir;
    }

    return sol;
}

}  // namespace willmore::ode
