#pragma once

// Exact zero-temperature dynamics in the single-excitation sector under the
// rotating-wave approximation.
//
// The excited-state amplitude (interaction picture) obeys
//   dG/dt = -int_0^t C(s) G(t - s) exp(i w0 s) ds,   G(0) = 1,
// which is integrated once into the second-kind Volterra equation
//   G(t) = 1 - int_0^t F(t - u) G(u) du,   F(t) = int_0^t C(s) exp(i w0 s) ds,
// and marched with the trapezoidal rule plus its endpoint correction.

#include <complex>
#include <cstddef>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/qubit.hpp"

namespace giant_heom::rwa_exact {

using cplx = std::complex<double>;

struct GreenFunction {
    double dt{0.0};
    double omega0{1.0};
    std::vector<double> t;
    std::vector<cplx> g;      // G(t_n)
    std::vector<cplx> g_dot;  // dG/dt at t_n

    std::size_t size() const noexcept { return t.size(); }
    // Cubic Hermite interpolation from G and dG/dt.
    cplx at(double time) const;
    double max_abs() const;
};

// Largest step accepted by solve_green: min(2 pi/omega_c, tau)/64, or
// (2 pi/omega_c)/64 when tau = 0.
double max_step(const bath::BathParams& p);

// dt is shrunk to tau/m so that tau lies on the grid. Throws ConfigError
// at finite temperature or when dt exceeds max_step(p).
GreenFunction solve_green(const bath::BathParams& p, double t_max, double dt);

// Max |G_dt - G_{dt/2}| over the common grid points.
double richardson_estimate(const bath::BathParams& p, double t_max, double dt);

enum class Picture { schrodinger, interaction };

// rho_ee(t) = |G|^2 rho_ee(0), rho_eg(t) = G rho_eg(0) (times exp(-i w0 t) in
// the Schroedinger picture), rho_gg = 1 - rho_ee.
qubit::Trajectory dynamical_map(const GreenFunction& green, const qubit::QubitState& rho0,
                                Picture picture = Picture::schrodinger);

inline constexpr double kSingularGreen = 1e-12;

struct RateFunctions {
    std::vector<double> t;
    std::vector<double> gamma_minus;  // -Re(G'/G); NaN where undefined
    std::vector<double> lamb_shift;   // -Im(G'/G); NaN where undefined
    std::vector<unsigned char> undefined;

    struct Interval {
        double begin;
        double end;
    };
    std::vector<Interval> negative_intervals;  // maximal grid runs with gamma_minus < 0

    double min_gamma_minus() const;  // over defined points
};

RateFunctions extract_rates(const GreenFunction& green);

// Integrates the time-local equation
//   d rho/dt = -i (w0 + h)[s+ s-, rho] + gamma_minus D[s-] rho,
//   D[s] rho = 2 s rho s^dagger - {s^dagger s, rho},
// with the w0 rotation taken exactly and RK4 of step 2 dt on the rest (all
// stages on the grid), stopping before the first undefined rate. Returns the trajectory on the even grid points.
qubit::Trajectory propagate_time_local(const RateFunctions& rates, double omega0,
                                       const qubit::QubitState& rho0);

// Max-abs entry deviation between propagate_time_local and dynamical_map.
double closure_defect(const GreenFunction& green, const qubit::QubitState& rho0);

}  // namespace giant_heom::rwa_exact
