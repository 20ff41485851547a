#include "giant_heom/rwa_exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "giant_heom/errors.hpp"
#include "giant_heom/quadrature.hpp"

namespace giant_heom::rwa_exact {

using std::numbers::pi;

cplx GreenFunction::at(double time) const { return quadrature::hermite_uniform(g, g_dot, dt, time); }

double GreenFunction::max_abs() const {
    double out = 0.0;
    for (const cplx& v : g) out = std::max(out, std::abs(v));
    return out;
}

double max_step(const bath::BathParams& p) {
    const double period = 2.0 * pi / p.omega_c;
    return (p.tau > 0.0 ? std::min(period, p.tau) : period) / 64.0;
}

GreenFunction solve_green(const bath::BathParams& p, double t_max, double dt) {
    p.validate();
    if (!p.beta.is_zero_temperature()) {
        throw ConfigError("exact solver: requires beta = inf (single-excitation RWA holds at T = 0 only)");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max: must be > 0");
    if (!(dt > 0.0)) throw ConfigError("dt: must be > 0");
    const double limit = max_step(p);
    if (dt > limit * (1.0 + 1e-12)) {
        throw ConfigError("exact solver: dt = " + std::to_string(dt) + " is too coarse; use dt <= " +
                          std::to_string(limit) + " (min(2 pi/omega_c, tau)/64)");
    }
    if (p.tau > 0.0) dt = p.tau / std::ceil(p.tau / dt - 1e-9);
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));

    const double w0 = p.omega0;
    const cplx i{0.0, 1.0};
    const auto kernel = [&](double s) { return bath::bcf_zero_temperature(p, s) * std::exp(i * w0 * s); };
    const auto kernel_dot = [&](double s) {
        return (bath::bcf_zero_temperature_derivative(p, s) + i * w0 * bath::bcf_zero_temperature(p, s)) *
               std::exp(i * w0 * s);
    };

    std::vector<cplx> k(n_steps + 1);
    for (std::size_t n = 0; n <= n_steps; ++n) k[n] = kernel(dt * static_cast<double>(n));
    const std::vector<cplx> f = quadrature::cumulative_integral(kernel, dt, n_steps);
    const cplx kd0 = kernel_dot(0.0);
    const double c12 = dt * dt / 12.0;

    GreenFunction out;
    out.dt = dt;
    out.omega0 = w0;
    out.t.resize(n_steps + 1);
    out.g.assign(n_steps + 1, cplx{0.0, 0.0});
    out.g_dot.assign(n_steps + 1, cplx{0.0, 0.0});
    out.t[0] = 0.0;
    out.g[0] = 1.0;
    out.g_dot[0] = 0.0;

    for (std::size_t n = 1; n <= n_steps; ++n) {
        out.t[n] = dt * static_cast<double>(n);
        cplx sf = 0.5 * f[n] * out.g[0];
        cplx sk = 0.5 * k[n] * out.g[0];
        for (std::size_t j = 1; j < n; ++j) {
            sf += f[n - j] * out.g[j];
            sk += k[n - j] * out.g[j];
        }
        const cplx gn = (1.0 - dt * sf + c12 * k[n]) / (1.0 + c12 * k[0]);
        out.g[n] = gn;
        const cplx tk = dt * (sk + 0.5 * k[0] * gn);
        out.g_dot[n] = (-tk + c12 * (kernel_dot(out.t[n]) - kd0 * gn)) / (1.0 - c12 * k[0]);
        if (!std::isfinite(gn.real()) || !std::isfinite(gn.imag())) {
            throw SolverError("exact solver: non-finite Green function", out.t[n]);
        }
    }
    return out;
}

double richardson_estimate(const bath::BathParams& p, double t_max, double dt) {
    const GreenFunction coarse = solve_green(p, t_max, dt);
    const GreenFunction fine = solve_green(p, t_max, coarse.dt / 2.0);
    double out = 0.0;
    for (std::size_t n = 0; n < coarse.size() && 2 * n < fine.size(); ++n) {
        out = std::max(out, std::abs(coarse.g[n] - fine.g[2 * n]));
    }
    return out;
}

qubit::Trajectory dynamical_map(const GreenFunction& green, const qubit::QubitState& rho0, Picture picture) {
    const qubit::Matrix2& r0 = rho0.matrix();
    const cplx i{0.0, 1.0};
    qubit::Trajectory out;
    for (std::size_t n = 0; n < green.size(); ++n) {
        const cplx g = green.g[n];
        const double p_ee = std::norm(g) * r0(1, 1).real();
        cplx eg = g * r0(1, 0);
        if (picture == Picture::schrodinger) eg *= std::exp(-i * green.omega0 * green.t[n]);
        qubit::Matrix2 rho;
        rho << 1.0 - p_ee, std::conj(eg), eg, p_ee;
        out.push_back(green.t[n], rho);
    }
    return out;
}

double RateFunctions::min_gamma_minus() const {
    double out = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < t.size(); ++n) {
        if (!undefined[n]) out = std::min(out, gamma_minus[n]);
    }
    return out;
}

RateFunctions extract_rates(const GreenFunction& green) {
    RateFunctions out;
    const std::size_t n = green.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out.t = green.t;
    out.gamma_minus.resize(n);
    out.lamb_shift.resize(n);
    out.undefined.resize(n);
    bool in_run = false;
    double run_start = 0.0;
    double run_end = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(green.g[k]) < kSingularGreen) {
            out.undefined[k] = 1;
            out.gamma_minus[k] = nan;
            out.lamb_shift[k] = nan;
        } else {
            const cplx r = green.g_dot[k] / green.g[k];
            out.undefined[k] = 0;
            out.gamma_minus[k] = -r.real();
            out.lamb_shift[k] = -r.imag();
        }
        const bool negative = !out.undefined[k] && out.gamma_minus[k] < 0.0;
        if (negative) {
            if (!in_run) run_start = green.t[k];
            run_end = green.t[k];
            in_run = true;
        } else if (in_run) {
            out.negative_intervals.push_back({run_start, run_end});
            in_run = false;
        }
    }
    if (in_run) out.negative_intervals.push_back({run_start, run_end});
    return out;
}

qubit::Trajectory propagate_time_local(const RateFunctions& rates, double omega0, const qubit::QubitState& rho0) {
    const cplx i{0.0, 1.0};
    // State (rho_ee, x) with rho_eg = x exp(-i w0 t); the bare rotation is exact and
    // RK4 only sees the slow rates. rho_gg and rho_ge follow from trace and Hermiticity.
    const auto deriv = [&](std::size_t k, double ee, cplx eg, double& dee, cplx& deg) {
        const double gm = rates.gamma_minus[k];
        dee = -2.0 * gm * ee;
        deg = -(gm + i * rates.lamb_shift[k]) * eg;
    };
    const auto record = [&](qubit::Trajectory& traj, double t, double ee, cplx x) {
        const cplx eg = x * std::polar(1.0, -omega0 * t);
        qubit::Matrix2 rho;
        rho << 1.0 - ee, std::conj(eg), eg, ee;
        traj.push_back(t, rho);
    };

    qubit::Trajectory out;
    double ee = rho0.matrix()(1, 1).real();
    if (rates.t.empty() || rates.undefined[0]) return out;
    cplx eg = rho0.matrix()(1, 0) * std::polar(1.0, omega0 * rates.t[0]);
    record(out, rates.t[0], ee, eg);
    for (std::size_t k = 0; k + 2 < rates.t.size(); k += 2) {
        if (rates.undefined[k + 1] || rates.undefined[k + 2]) break;
        const double h = rates.t[k + 2] - rates.t[k];
        double d1, d2, d3, d4;
        cplx e1, e2, e3, e4;
        deriv(k, ee, eg, d1, e1);
        deriv(k + 1, ee + 0.5 * h * d1, eg + 0.5 * h * e1, d2, e2);
        deriv(k + 1, ee + 0.5 * h * d2, eg + 0.5 * h * e2, d3, e3);
        deriv(k + 2, ee + h * d3, eg + h * e3, d4, e4);
        ee += h / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
        eg += h / 6.0 * (e1 + 2.0 * e2 + 2.0 * e3 + e4);
        record(out, rates.t[k + 2], ee, eg);
    }
    return out;
}

double closure_defect(const GreenFunction& green, const qubit::QubitState& rho0) {
    const RateFunctions rates = extract_rates(green);
    const qubit::Trajectory local = propagate_time_local(rates, green.omega0, rho0);
    const qubit::Trajectory exact = dynamical_map(green, rho0, Picture::schrodinger);
    double out = 0.0;
    for (std::size_t m = 0; m < local.size(); ++m) {
        out = std::max(out, (local.rho[m] - exact.rho[2 * m]).cwiseAbs().maxCoeff());
    }
    return out;
}

}  // namespace giant_heom::rwa_exact
