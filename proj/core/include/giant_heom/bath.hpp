#pragma once

// Structured bath of the two-contact giant atom.
//
// Reduced units throughout: hbar = 1, frequencies in units of omega0 and
// times in units of 1/omega0. The spectral coupling is Ohmic,
// gamma(w) = eta * w * exp(-w / omega_c), extended as an odd function to
// w < 0, and the two contacts separated by the delay tau modulate it with
// cos^2(w tau / 2).

#include <complex>
#include <numbers>

namespace giant_heom::bath {

// Inverse temperature beta = hbar / (k_B T). Zero temperature is a distinct
// state rather than a large finite number, because the thermal closed forms
// degenerate at beta = inf.
class InverseTemperature {
public:
    static InverseTemperature zero_temperature() noexcept { return InverseTemperature{}; }
    static InverseTemperature finite(double beta);

    bool is_zero_temperature() const noexcept { return zero_temperature_; }
    bool is_finite() const noexcept { return !zero_temperature_; }

    // Finite value; throws DomainError at zero temperature.
    double value() const;

    // beta as a double, +inf at zero temperature.
    double as_double() const noexcept;

    friend bool operator==(const InverseTemperature&, const InverseTemperature&) = default;

private:
    InverseTemperature() = default;
    bool zero_temperature_{true};
    double value_{0.0};
};

struct BathParams {
    double eta{1e-2};                              // dimensionless coupling strength
    double omega0{1.0};                            // atomic transition frequency
    double omega_c{2.0};                           // Ohmic cutoff frequency
    double tau{2.0 * std::numbers::pi * 20.0};     // delay between the two contacts
    InverseTemperature beta{InverseTemperature::zero_temperature()};

    // Throws ConfigError naming the first invalid field.
    void validate() const;

    // eta = 1e-2, omega_c = 2 omega0, omega0 tau / 2pi = 20, T = 0.
    static BathParams reference_defaults() { return BathParams{}; }

    friend bool operator==(const BathParams&, const BathParams&) = default;
};

// gamma(w) = eta w exp(-w/omega_c) for w >= 0, -gamma(-w) otherwise.
double spectral_coupling(const BathParams& p, double omega);

// J(beta, w) = 2 gamma(w) cos^2(w tau/2) / (1 - exp(-beta w)).
// Continuous at w = 0 (value 2 eta / beta) and equal to 2 gamma(w) cos^2 Theta(w) at T = 0.
double effective_spectral_density(const BathParams& p, double omega);

// Bath correlation function C(t) = <B(t) B(0)>, closed form.
// Finite temperature: trigamma representation. Zero temperature:
// C(t) = (eta wc^2/pi) [(1 + i wc t)^-2 + 1/2 (1 + i wc (t - tau))^-2 + 1/2 (1 + i wc (t + tau))^-2].
std::complex<double> bcf_analytic(const BathParams& p, double t);

// Zero-temperature closed form and its time derivative, independent of p.beta.
std::complex<double> bcf_zero_temperature(const BathParams& p, double t);
std::complex<double> bcf_zero_temperature_derivative(const BathParams& p, double t);

// Imaginary-time correlation C~(s) for 0 <= s <= beta (finite beta only).
// Equals C(-i s); throws DomainError outside [0, beta] or at T = 0.
std::complex<double> bcf_imaginary_time(const BathParams& p, double s);

struct QuadratureResult {
    std::complex<double> value;
    double abs_error{0.0};   // estimated absolute error
    bool converged{false};   // estimate below the requested tolerance
};

struct BcfQuadratureOptions {
    double window_over_cutoff{40.0};  // integrate over [-W, W], W = window_over_cutoff * omega_c
    double abs_tolerance{1e-10};      // target absolute error (units of omega0^2)
};

// C(t) = (1/pi) int J(beta, w) exp(-i w t) dw by Gauss-Kronrod on panels of one
// oscillation period, bisected until each meets an absolute error budget. Independent of
// the closed forms above; never returns a silently wrong value: check `converged`.
QuadratureResult bcf_quadrature(const BathParams& p, double t,
                                const BcfQuadratureOptions& options = {});

}  // namespace giant_heom::bath
