#include "giant_heom/redfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "giant_heom/errors.hpp"
#include "giant_heom/quadrature.hpp"

namespace giant_heom::redfield {

cplx RedfieldCoefficients::plus_at(double time) const {
    return quadrature::hermite_uniform(gamma_plus, gamma_plus_dot, dt, time);
}

cplx RedfieldCoefficients::minus_at(double time) const {
    return quadrature::hermite_uniform(gamma_minus, gamma_minus_dot, dt, time);
}

double max_step(double omega0, double omega_c) { return std::min(1.0 / omega0, 1.0 / omega_c) / 4.0; }

RedfieldCoefficients compute_coefficients(const BcfFunction& bcf, double omega0, double t_max, double dt) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max: must be > 0");
    if (!(dt > 0.0)) throw ConfigError("dt: must be > 0");
    const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    const cplx i{0.0, 1.0};
    const auto plus = [&](double s) { return bcf(s) * std::exp(-i * omega0 * s); };
    const auto minus = [&](double s) { return bcf(s) * std::exp(i * omega0 * s); };

    RedfieldCoefficients out;
    out.dt = dt;
    out.omega0 = omega0;
    out.gamma_plus = quadrature::cumulative_integral(plus, dt, n_steps);
    out.gamma_minus = quadrature::cumulative_integral(minus, dt, n_steps);
    out.t.resize(n_steps + 1);
    out.gamma_plus_dot.resize(n_steps + 1);
    out.gamma_minus_dot.resize(n_steps + 1);
    for (std::size_t n = 0; n <= n_steps; ++n) {
        const double t = dt * static_cast<double>(n);
        out.t[n] = t;
        const cplx c = bcf(t);
        out.gamma_plus_dot[n] = c * std::exp(-i * omega0 * t);
        out.gamma_minus_dot[n] = c * std::exp(i * omega0 * t);
    }
    return out;
}

RedfieldCoefficients compute_coefficients(const bath::BathParams& p, double t_max, double dt) {
    p.validate();
    const double limit = max_step(p.omega0, p.omega_c);
    if (dt > limit * (1.0 + 1e-12)) {
        throw ConfigError("redfield: dt = " + std::to_string(dt) + " is too coarse; use dt <= " +
                          std::to_string(limit));
    }
    return compute_coefficients([&p](double s) { return bath::bcf_analytic(p, s); }, p.omega0, t_max, dt);
}

ode::IntegratorConfig default_integrator() {
    ode::IntegratorConfig cfg;
    cfg.rtol = 1e-10;
    cfg.atol = 1e-12;
    cfg.max_step = 0.25;
    return cfg;
}

RedfieldResult propagate_redfield(const RedfieldCoefficients& coeffs, double omega0, const qubit::QubitState& rho0,
                                  const std::vector<double>& t_grid, Mode mode,
                                  const ode::IntegratorConfig& integrator) {
    if (t_grid.empty() || t_grid.front() != 0.0) throw DomainError("propagate_redfield: t_grid must start at 0");
    if (t_grid.back() > coeffs.t_max() * (1.0 + 1e-12)) {
        throw DomainError("propagate_redfield: coefficients end at t = " + std::to_string(coeffs.t_max()));
    }
    const cplx i{0.0, 1.0};
    // Row-major (gg, ge, eg, ee).
    const auto rhs = [&](double t, const Eigen::VectorXcd& r, Eigen::VectorXcd& d) {
        const double tt = std::min(t, coeffs.t_max());
        const cplx gm = coeffs.minus_at(tt);
        const double w = omega0 + gm.imag();
        const double rm = gm.real();
        // -i w [|e><e|, rho] + rm (2 s- rho s+ - {|e><e|, rho})
        d(0) = 2.0 * rm * r(3);
        d(1) = (i * w - rm) * r(1);
        d(2) = (-i * w - rm) * r(2);
        d(3) = -2.0 * rm * r(3);
        if (mode == Mode::rwa_full) {
            const cplx gp = coeffs.plus_at(tt);
            const double rp = gp.real();
            const double wp = gp.imag();
            // -i wp [|g><g|, rho] + rp (2 s+ rho s- - {|g><g|, rho})
            d(0) += -2.0 * rp * r(0);
            d(1) += (-i * wp - rp) * r(1);
            d(2) += (i * wp - rp) * r(2);
            d(3) += 2.0 * rp * r(0);
        }
    };

    Eigen::VectorXcd y(4);
    const qubit::Matrix2& m = rho0.matrix();
    y << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    RedfieldResult out;
    const auto observe = [&](std::size_t, double t, const Eigen::VectorXcd& s) {
        qubit::Matrix2 rho;
        rho << s(0), s(1), s(2), s(3);
        out.trajectory.push_back(t, rho);
    };
    ode::integrate(rhs, 0.0, y, t_grid, observe, integrator);
    out.positivity_flagged = out.trajectory.max_positivity_defect > kPositivityFlag;
    return out;
}

}  // namespace giant_heom::redfield
