#pragma once

// Second-order time-local (Redfield) dynamics with coefficients
//   Gamma_pm(t) = int_0^t C(s) exp(-+ i w0 s) ds.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/ode.hpp"
#include "giant_heom/qubit.hpp"

namespace giant_heom::redfield {

using cplx = std::complex<double>;
using BcfFunction = std::function<cplx(double)>;

struct RedfieldCoefficients {
    double dt{0.0};
    double omega0{1.0};
    std::vector<double> t;
    std::vector<cplx> gamma_plus;
    std::vector<cplx> gamma_minus;
    std::vector<cplx> gamma_plus_dot;   // C(t) exp(-i w0 t)
    std::vector<cplx> gamma_minus_dot;  // C(t) exp(+i w0 t)

    double t_max() const { return t.empty() ? 0.0 : t.back(); }
    // Cubic Hermite interpolation; throws DomainError outside [0, t_max].
    cplx plus_at(double time) const;
    cplx minus_at(double time) const;
};

// Largest accepted table step: min(1/w0, 1/omega_c)/4.
double max_step(double omega0, double omega_c);

// Tabulates Gamma_pm of the analytic BCF on t_n = n dt with per-interval
// Gauss-Legendre quadrature. Throws ConfigError when dt exceeds max_step.
RedfieldCoefficients compute_coefficients(const bath::BathParams& p, double t_max, double dt);

// Same from an arbitrary correlation function (used with the quadrature oracle).
RedfieldCoefficients compute_coefficients(const BcfFunction& bcf, double omega0, double t_max, double dt);

enum class Mode {
    rwa_minus,  // -i(w0 + Im G-)[s+s-, .] + Re G- D[s-]
    rwa_full,   // adds -i Im G+ [s-s+, .] + Re G+ D[s+]
};

// D[s] rho = 2 s rho s^dagger - {s^dagger s, rho}.
inline constexpr double kPositivityFlag = 1e-3;

struct RedfieldResult {
    qubit::Trajectory trajectory;
    bool positivity_flagged{false};  // max positivity defect above kPositivityFlag
};

ode::IntegratorConfig default_integrator();

RedfieldResult propagate_redfield(const RedfieldCoefficients& coeffs, double omega0,
                                  const qubit::QubitState& rho0, const std::vector<double>& t_grid,
                                  Mode mode, const ode::IntegratorConfig& integrator = default_integrator());

}  // namespace giant_heom::redfield
