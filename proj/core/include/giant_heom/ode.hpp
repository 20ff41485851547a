#pragma once

// Explicit Runge-Kutta integration of y' = f(t, y) for Eigen vectors.
//
// Adaptive mode is Dormand-Prince 5(4) with a max-norm error estimate;
// fixed mode is classical RK4. Both land exactly on every requested output
// time. Results are deterministic for a given configuration.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "giant_heom/errors.hpp"

namespace giant_heom::ode {

enum class Method { adaptive, fixed };

struct IntegratorConfig {
    Method method{Method::adaptive};
    double rtol{1e-8};
    double atol{1e-10};
    double initial_step{0.0};  // 0 selects a step from the first derivative
    double max_step{std::numeric_limits<double>::infinity()};
    double min_step{1e-12};
    double fixed_step{1e-2};   // fixed mode only
    std::size_t max_steps{50'000'000};

    friend bool operator==(const IntegratorConfig&, const IntegratorConfig&) = default;
};

struct IntegratorStats {
    std::size_t accepted{0};
    std::size_t rejected{0};
    std::size_t rhs_evaluations{0};
};

namespace detail {

template <class V>
bool all_finite(const V& v) {
    return v.allFinite();
}

template <class V>
double error_norm(const V& err, const V& y0, const V& y1, double atol, double rtol) {
    double out = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        out = std::max(out, std::abs(err(i)) / scale);
    }
    return out;
}

}  // namespace detail

// `rhs(t, y, dydt)` writes the derivative; `observe(k, t_k, y)` is called at
// each output time (including outputs[0] when it equals t0). Throws
// SolverError with the failure time on step underflow, step-count overflow
// or a non-finite state.
template <class V, class Rhs, class Observer>
IntegratorStats integrate(Rhs&& rhs, double t0, V& y, const std::vector<double>& outputs,
                          Observer&& observe, const IntegratorConfig& cfg) {
    IntegratorStats stats;
    if (outputs.empty()) return stats;
    if (outputs.front() < t0) throw DomainError("integrate: outputs start before t0");
    for (std::size_t k = 1; k < outputs.size(); ++k) {
        if (!(outputs[k] > outputs[k - 1])) throw DomainError("integrate: outputs must increase strictly");
    }

    const Eigen::Index n = y.size();
    V k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);
    double t = t0;
    std::size_t next = 0;
    if (outputs.front() == t0) {
        observe(next, t, y);
        ++next;
    }
    if (next == outputs.size()) return stats;

    const auto eval = [&](double tt, const V& yy, V& out) {
        rhs(tt, yy, out);
        ++stats.rhs_evaluations;
    };

    if (cfg.method == Method::fixed) {
        if (!(cfg.fixed_step > 0.0)) throw DomainError("integrate: fixed_step must be positive");
        for (; next < outputs.size(); ++next) {
            const double target = outputs[next];
            const auto steps = static_cast<std::size_t>(std::ceil((target - t) / cfg.fixed_step - 1e-12));
            const double h = (target - t) / static_cast<double>(std::max<std::size_t>(steps, 1));
            for (std::size_t s = 0; s < std::max<std::size_t>(steps, 1); ++s) {
                eval(t, y, k1);
                tmp = y + 0.5 * h * k1;
                eval(t + 0.5 * h, tmp, k2);
                tmp = y + 0.5 * h * k2;
                eval(t + 0.5 * h, tmp, k3);
                tmp = y + h * k3;
                eval(t + h, tmp, k4);
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t = (s + 1 == std::max<std::size_t>(steps, 1)) ? target : t + h;
                ++stats.accepted;
                if (!detail::all_finite(y)) throw SolverError("non-finite state", t);
            }
            observe(next, t, y);
        }
        return stats;
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

    eval(t, y, k1);
    double h = cfg.initial_step;
    if (!(h > 0.0)) {
        const double d0 = y.cwiseAbs().maxCoeff();
        const double d1 = k1.cwiseAbs().maxCoeff();
        h = (d0 > 1e-5 && d1 > 1e-5) ? 0.01 * d0 / d1 : 1e-6;
        h = std::max(h, 1e-6);
    }
    h = std::min(h, cfg.max_step);

    std::size_t steps = 0;
    while (next < outputs.size()) {
        const double target = outputs[next];
        bool hit = false;
        double step = h;
        if (t + step >= target || target - (t + step) < 1e-12 * std::max(1.0, std::abs(target))) {
            step = target - t;
            hit = true;
        }
        if (++steps > cfg.max_steps) throw SolverError("maximum number of steps exceeded", t);

        tmp = y + step * a21 * k1;
        eval(t + c2 * step, tmp, k2);
        tmp = y + step * (a31 * k1 + a32 * k2);
        eval(t + c3 * step, tmp, k3);
        tmp = y + step * (a41 * k1 + a42 * k2 + a43 * k3);
        eval(t + c4 * step, tmp, k4);
        tmp = y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        eval(t + c5 * step, tmp, k5);
        tmp = y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        eval(t + step, tmp, k6);
        ynew = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        eval(t + step, ynew, k7);
        err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        if (!detail::all_finite(ynew)) {
            throw SolverError("non-finite state", t);
        }
        const double en = detail::error_norm(err, y, ynew, cfg.atol, cfg.rtol);
        const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        if (en <= 1.0) {
            t = hit ? target : t + step;
            y.swap(ynew);
            k1.swap(k7);
            ++stats.accepted;
            if (hit) {
                observe(next, t, y);
                ++next;
                // A clipped step says nothing about the natural step size.
                h = std::max(h, std::min(step * factor, cfg.max_step));
            } else {
                h = std::min(step * factor, cfg.max_step);
            }
        } else {
            ++stats.rejected;
            h = step * std::min(factor, 1.0);
        }
        if (h < cfg.min_step) throw SolverError("step size underflow", t);
    }
    return stats;
}

}  // namespace giant_heom::ode
