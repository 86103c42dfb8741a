#pragma once

#include <functional>
#include <span>
#include <vector>

namespace willmore::ode {

using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
using EventFn = std::function<double(double t, std::span<const double> y)>;

struct IvpProblem {
    std::size_t dimension = 0;
    Rhs rhs;
    double t0 = 0.0;
    std::vector<double> y0;
    std::vector<EventFn> events;  // integration halts at the first sign change
};

enum class StopReason { ReachedEnd, EventHit, StepUnderflow };

struct IvpOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0 -> chosen automatically
    double max_step = 0.0;      // 0 -> |t_end - t0|
    long max_steps = 4'000'000;
    double magnitude_guard = 1e12;  // |y_i| beyond this is treated as blow-up
};

/// Result of an adaptive Dormand-Prince 5(4) integration. Holds the accepted
/// step points and per-step dense-output coefficients, so the solution can be
/// evaluated anywhere on the covered interval.
class IvpSolution {
  public:
    StopReason reason() const { return reason_; }
    int event_index() const { return event_index_; }

    double t_begin() const { return times_.front(); }
    double t_end() const { return times_.back(); }

    const std::vector<double>& times() const { return times_; }
    const std::vector<std::vector<double>>& states() const { return states_; }

    /// Dense evaluation; t must lie on the covered interval.
    void eval(double t, std::span<double> y) const;
    double eval(double t, std::size_t component) const;

    bool covers(double t) const;

  private:
    friend IvpSolution integrate(const IvpProblem&, double, const IvpOptions&);

    struct DenseStep {
        double t, h;
        // Hairer's rcont1..rcont5 continuous-extension coefficients.
        std::vector<double> r1, r2, r3, r4, r5;
    };
    std::size_t locate(double t) const;

    StopReason reason_ = StopReason::ReachedEnd;
    int event_index_ = -1;
    int direction_ = 1;
    std::size_t dim_ = 0;
    std::vector<double> times_;
    std::vector<std::vector<double>> states_;
    std::vector<DenseStep> steps_;
};

IvpSolution integrate(const IvpProblem& problem, double t_end, const IvpOptions& opts = {});

}  // namespace willmore::ode
