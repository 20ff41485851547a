#pragma once

// Second-order Hamiltonian of mean force for the giant atom,
//   H* ~ H_S + (dw/2) sigma_z + c,
// built from the imaginary-time integrals
//   I1 = int_0^b dt1 int_0^t1 ds C~(s) sinh(w0 s),
//   I2 = int_0^b dt1 int_0^t1 ds C~(s) [cosh(w0 (2 t1 - s)) + exp(-w0 s)].
// The t1 integrals are done in closed form, leaving one-dimensional
// quadratures over s in [0, beta].

#include "giant_heom/bath.hpp"

namespace giant_heom::meanforce {

struct Integrals {
    double i1{0.0};
    double i2{0.0};
    double max_imag_residue{0.0};  // max |Im C~| / |C~| seen by the quadrature
};

struct MeanForceResult {
    double beta{0.0};         // +inf at T = 0
    double i1{0.0};
    double i2{0.0};
    double delta_omega{0.0};
    double c_offset{0.0};
    double p_ee_star{0.0};
    double p_ee_bare{0.0};
    double log_partition{0.0};  // log Z* including the offset
};

inline constexpr double kQuadratureTolerance = 1e-10;
inline constexpr double kImagResidueLimit = 1e-8;

// Throws DomainError at T = 0 and ConvergenceError when the quadrature misses
// `rel_tol` or the imaginary residue of C~ exceeds kImagResidueLimit.
Integrals compute_integrals(const bath::BathParams& p, double rel_tol = kQuadratureTolerance);

// Excited population of a two-level Gibbs state with level splitting `gap`.
double gibbs_excited_population(double gap, double beta);

// dw, c, P*_ee and the bare Gibbs population. Throws ConvergenceError
// ("perturbative breakdown") when 1 + I2 <= 0 or 1 + I1 + I2 <= 0.
MeanForceResult mean_force_population(double i1, double i2, double beta, double omega0);

// compute_integrals + mean_force_population; at T = 0 returns the analytic
// limit P*_ee = P_ee^bare = 0.
MeanForceResult mean_force(const bath::BathParams& p);

}  // namespace giant_heom::meanforce
