#pragma once

// Explicit Runge-Kutta integration for Eigen-valued ODEs y' = f(t, y):
// classic fixed-step RK4 and the adaptive Dormand-Prince 5(4) pair.

#include "zenoqst/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace zenoqst {

enum class StepMethod { rk4, dopri45 };
enum class TracePolicy { off, warn, renormalize };
enum class UnitaryMethod { spectral, ode };

struct IntegratorSettings {
    StepMethod method = StepMethod::dopri45;
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double max_step = 0.5;  // 1/g; also the RK4 step
    TracePolicy trace_policy = TracePolicy::warn;
    UnitaryMethod unitary = UnitaryMethod::spectral;
    std::size_t max_steps = 50'000'000;

    void validate() const;
    // Tolerances halved; for RK4 the step is halved instead.
    IntegratorSettings refined() const;
};

struct EvolutionDiagnostics {
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t rhs_evaluations = 0;
    double max_trace_deviation = 0.0;
    double max_hermiticity_deviation = 0.0;  // before per-step symmetrization
    double max_norm_deviation = 0.0;
    double min_eigenvalue = std::numeric_limits<double>::infinity();
    std::vector<std::string> warnings;

    void merge(const EvolutionDiagnostics& other);
};

namespace detail {

template <class State>
double error_ratio(const State& err, const State& y0, const State& y1, double atol, double rtol) {
    const auto scale = (atol + rtol * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
    return (err.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

// Integrates y from t0 to t1 in place. `rhs(t, y, dy)` writes dy; `post_step(y)`
// runs after each accepted step and may modify y. `step_hint` carries the
// adaptive step size between calls (0 selects a default first step).
template <class State, class Rhs, class PostStep>
void integrate(Rhs&& rhs, State& y, double t0, double t1, const IntegratorSettings& s, PostStep&& post_step,
               EvolutionDiagnostics& diag, double& step_hint) {
    const double span = t1 - t0;
    if (span < 0.0) throw std::invalid_argument("integrate: t1 < t0");
    if (span == 0.0) return;

    State k1(y), k2(y), k3(y), k4(y), k5(y), k6(y), k7(y), tmp(y);

    if (s.method == StepMethod::rk4) {
        const auto n = static_cast<std::size_t>(std::ceil(span / s.max_step - 1e-12));
        const double h = span / static_cast<double>(std::max<std::size_t>(n, 1));
        double t = t0;
        for (std::size_t i = 0; i < std::max<std::size_t>(n, 1); ++i) {
            rhs(t, y, k1);
            tmp = y + (0.5 * h) * k1;
            rhs(t + 0.5 * h, tmp, k2);
            tmp = y + (0.5 * h) * k2;
            rhs(t + 0.5 * h, tmp, k3);
            tmp = y + h * k3;
            rhs(t + h, tmp, k4);
            y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = t0 + static_cast<double>(i + 1) * h;
            diag.rhs_evaluations += 4;
            ++diag.steps;
            post_step(y);
        }
        return;
    }

    // Dormand-Prince 5(4) tableau.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t0;
    double h = step_hint > 0.0 ? step_hint : std::min(0.01, s.max_step);
    State y_new(y), err(y);
    bool have_k1 = false;
    std::size_t attempts = 0;
    while (t < t1) {
        if (++attempts > s.max_steps) throw NumericalError("integrate: exceeded max_steps");
        h = std::min({h, s.max_step, t1 - t});
        const bool last = (t + h >= t1);
        if (h < 1e-13 * std::max(1.0, std::abs(t)))
            throw NumericalError("integrate: step size underflow at t = " + std::to_string(t));

        if (!have_k1) {
            rhs(t, y, k1);
            ++diag.rhs_evaluations;
        }
        tmp = y + h * (a21 * k1);
        rhs(t + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, tmp, k6);
        y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y_new, k7);
        diag.rhs_evaluations += 6;
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double ratio = detail::error_ratio(err, y, y_new, s.abs_tol, s.rel_tol);
        if (!std::isfinite(ratio)) throw NumericalError("integrate: non-finite error estimate");
        const double factor = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
        if (ratio <= 1.0) {
            t = last ? t1 : t + h;
            y = y_new;
            ++diag.steps;
            post_step(y);
            // post_step may modify y; k1 is recomputed rather than taken from k7.
            have_k1 = false;
            if (!last) step_hint = h * factor;
            h *= factor;
        } else {
            ++diag.rejected_steps;
            have_k1 = true;
            h *= std::min(factor, 1.0);
        }
    }
}

}  // namespace zenoqst
