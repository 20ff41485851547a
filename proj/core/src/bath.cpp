#include "giant_heom/bath.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "giant_heom/errors.hpp"
#include "giant_heom/special.hpp"

namespace giant_heom::bath {

using cplx = std::complex<double>;
using std::numbers::pi;

InverseTemperature InverseTemperature::finite(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw DomainError("inverse temperature must be positive and finite, got " +
                          std::to_string(beta));
    }
    InverseTemperature out;
    out.zero_temperature_ = false;
    out.value_ = beta;
    return out;
}

double InverseTemperature::value() const {
    if (zero_temperature_) throw DomainError("inverse temperature is infinite (T = 0)");
    return value_;
}

double InverseTemperature::as_double() const noexcept {
    return zero_temperature_ ? std::numeric_limits<double>::infinity() : value_;
}

void BathParams::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("eta: must be > 0");
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ConfigError("omega0: must be > 0");
    if (!(omega_c > 0.0) || !std::isfinite(omega_c)) throw ConfigError("omega_c: must be > 0");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("tau: must be >= 0");
}

double spectral_coupling(const BathParams& p, double omega) {
    const double w = std::abs(omega);
    const double g = p.eta * w * std::exp(-w / p.omega_c);
    return omega >= 0.0 ? g : -g;
}

double effective_spectral_density(const BathParams& p, double omega) {
    const double c = std::cos(0.5 * omega * p.tau);
    const double cos2 = c * c;
    if (p.beta.is_zero_temperature()) {
        return omega > 0.0 ? 2.0 * spectral_coupling(p, omega) * cos2 : 0.0;
    }
    const double beta = p.beta.value();
    // 2 eta w e^{-|w|/wc} / (1 - e^{-beta w}); w / (1 - e^{-beta w}) -> 1/beta at w = 0.
    const double bose = omega == 0.0 ? 1.0 / beta : omega / -std::expm1(-beta * omega);
    return 2.0 * p.eta * bose * std::exp(-std::abs(omega) / p.omega_c) * cos2;
}

namespace {

// C(t) at finite temperature for complex time; real t gives the real-time
// BCF, t = -i s the imaginary-time one.
cplx bcf_thermal(const BathParams& p, cplx t) {
    using special::trigamma;
    const double beta = p.beta.value();
    const double bw = beta * p.omega_c;
    const cplx i{0.0, 1.0};
    const auto fwd = [&](cplx x) { return (1.0 + i * p.omega_c * x) / bw; };
    const auto bwd = [&](cplx x) { return 1.0 + (1.0 - i * p.omega_c * x) / bw; };
    const cplx sum = 2.0 * trigamma(fwd(t)) + trigamma(fwd(t - p.tau)) + trigamma(fwd(t + p.tau)) +
                     2.0 * trigamma(bwd(t)) + trigamma(bwd(t + p.tau)) + trigamma(bwd(t - p.tau));
    return p.eta / (2.0 * pi * beta * beta) * sum;
}

}  // namespace

cplx bcf_zero_temperature(const BathParams& p, double t) {
    const cplx i{0.0, 1.0};
    const double wc = p.omega_c;
    const auto term = [&](double x) {
        const cplx d = 1.0 + i * wc * x;
        return 1.0 / (d * d);
    };
    return p.eta * wc * wc / pi * (term(t) + 0.5 * term(t - p.tau) + 0.5 * term(t + p.tau));
}

cplx bcf_zero_temperature_derivative(const BathParams& p, double t) {
    const cplx i{0.0, 1.0};
    const double wc = p.omega_c;
    const auto term = [&](double x) {
        const cplx d = 1.0 + i * wc * x;
        return 1.0 / (d * d * d);
    };
    return p.eta * wc * wc / pi * (-2.0 * i * wc) *
           (term(t) + 0.5 * term(t - p.tau) + 0.5 * term(t + p.tau));
}

cplx bcf_analytic(const BathParams& p, double t) {
    if (p.beta.is_zero_temperature()) return bcf_zero_temperature(p, t);
    return bcf_thermal(p, cplx{t, 0.0});
}

cplx bcf_imaginary_time(const BathParams& p, double s) {
    if (p.beta.is_zero_temperature()) {
        throw DomainError("bcf_imaginary_time: requires finite beta");
    }
    const double beta = p.beta.value();
    if (!(s >= 0.0 && s <= beta)) {
        throw DomainError("bcf_imaginary_time: s = " + std::to_string(s) + " outside [0, beta]");
    }
    return bcf_thermal(p, cplx{0.0, -s});
}

QuadratureResult bcf_quadrature(const BathParams& p, double t, const BcfQuadratureOptions& options) {
    using boost::math::quadrature::gauss_kronrod;
    const double window = options.window_over_cutoff * p.omega_c;

    // One panel per fastest oscillation of cos^2(w tau/2) e^{-i w t}, and never
    // wider than the Ohmic envelope scale.
    const double fastest = std::abs(t) + p.tau;
    double width = p.omega_c;
    if (fastest > 0.0) width = std::min(width, 2.0 * pi / fastest);
    const auto panels = static_cast<std::size_t>(std::ceil(window / width));
    width = window / static_cast<double>(panels);

    const auto integrand = [&](double w) -> cplx {
        const double j = effective_spectral_density(p, w);
        return j / pi * cplx{std::cos(w * t), -std::sin(w * t)};
    };

    // Absolute error budget per unit frequency. A relative criterion stalls at
    // roundoff on panels that straddle zeros of cos^2(w tau/2).
    const double sides = p.beta.is_finite() ? 2.0 : 1.0;
    const double density = 1e-2 * options.abs_tolerance / (sides * window);
    constexpr int kMaxDepth = 10;

    QuadratureResult out{cplx{0.0, 0.0}, 0.0, false};
    const auto refine = [&](auto&& self, double a, double b, int depth) -> void {
        double err = 0.0;
        const cplx v = gauss_kronrod<double, 31>::integrate(integrand, a, b, 0, 0.0, &err);
        if (err <= density * (b - a) || depth == 0) {
            out.value += v;
            out.abs_error += err;
            return;
        }
        const double m = 0.5 * (a + b);
        self(self, a, m, depth - 1);
        self(self, m, b, depth - 1);
    };
    const auto integrate_side = [&](double sign) {
        for (std::size_t k = 0; k < panels; ++k) {
            double a = sign * width * static_cast<double>(k);
            double b = sign * width * static_cast<double>(k + 1);
            if (a > b) std::swap(a, b);
            refine(refine, a, b, kMaxDepth);
        }
    };
    integrate_side(+1.0);
    if (p.beta.is_finite()) integrate_side(-1.0);

    out.converged = std::isfinite(out.value.real()) && std::isfinite(out.value.imag()) &&
                    out.abs_error <= options.abs_tolerance;
    return out;
}

}  // namespace giant_heom::bath
