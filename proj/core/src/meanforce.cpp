#include "giant_heom/meanforce.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "giant_heom/errors.hpp"

namespace giant_heom::meanforce {

namespace {

struct QuadOut {
    double value;
    double error;
};

template <class F>
QuadOut integrate(F&& f, double a, double b, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol, &error, &l1);
    return {value, error};
}

}  // namespace

Integrals compute_integrals(const bath::BathParams& p, double rel_tol) {
    p.validate();
    if (p.beta.is_zero_temperature()) {
        throw DomainError("mean-force integrals require a finite temperature");
    }
    const double beta = p.beta.value();
    const double w0 = p.omega0;
    Integrals out;
    const auto c_tilde = [&](double s) {
        const std::complex<double> c = bath::bcf_imaginary_time(p, std::min(std::max(s, 0.0), beta));
        const double mag = std::abs(c);
        if (mag > 0.0) out.max_imag_residue = std::max(out.max_imag_residue, std::abs(c.imag()) / mag);
        return c.real();
    };
    const auto f1 = [&](double s) { return c_tilde(s) * std::sinh(w0 * s) * (beta - s); };
    const auto f2 = [&](double s) {
        const double inner = (std::sinh(w0 * (2.0 * beta - s)) - std::sinh(w0 * s)) / (2.0 * w0) +
                             std::exp(-w0 * s) * (beta - s);
        return c_tilde(s) * inner;
    };
    const QuadOut q1 = integrate(f1, 0.0, beta, rel_tol);
    const QuadOut q2 = integrate(f2, 0.0, beta, rel_tol);
    out.i1 = q1.value;
    out.i2 = q2.value;
    const auto check = [&](const QuadOut& q, const char* name) {
        if (!std::isfinite(q.value) || q.error > 10.0 * rel_tol * std::abs(q.value) + 1e-300) {
            throw ConvergenceError(std::string("mean-force quadrature for ") + name + " did not converge");
        }
    };
    check(q1, "I1");
    check(q2, "I2");
    if (out.max_imag_residue > kImagResidueLimit) {
        throw ConvergenceError("imaginary-time BCF has an imaginary residue of " +
                               std::to_string(out.max_imag_residue));
    }
    return out;
}

double gibbs_excited_population(double gap, double beta) { return 1.0 / (1.0 + std::exp(beta * gap)); }

MeanForceResult mean_force_population(double i1, double i2, double beta, double omega0) {
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("mean_force_population: beta must be finite");
    if (!(1.0 + i2 > 0.0) || !(1.0 + i1 + i2 > 0.0)) {
        throw ConvergenceError("perturbative breakdown: 1 + I2 = " + std::to_string(1.0 + i2) +
                               ", 1 + I1 + I2 = " + std::to_string(1.0 + i1 + i2));
    }
    const double l12 = std::log1p(i1 + i2);
    const double l2 = std::log1p(i2);
    MeanForceResult out;
    out.beta = beta;
    out.i1 = i1;
    out.i2 = i2;
    out.delta_omega = -(l12 - l2) / beta;
    out.c_offset = -(l12 + l2) / (2.0 * beta);
    // The offset multiplies both Boltzmann weights and cancels in the ratio.
    out.p_ee_star = 1.0 / (1.0 + std::exp(beta * omega0 - l12 + l2));
    out.p_ee_bare = gibbs_excited_population(omega0, beta);
    const double e_g = -out.delta_omega / 2.0;
    const double e_e = omega0 + out.delta_omega / 2.0;
    const double lo = std::min(e_g, e_e);
    out.log_partition = -beta * (out.c_offset + lo) +
                        std::log(std::exp(-beta * (e_g - lo)) + std::exp(-beta * (e_e - lo)));
    return out;
}

MeanForceResult mean_force(const bath::BathParams& p) {
    p.validate();
    if (p.beta.is_zero_temperature()) {
        MeanForceResult out;
        out.beta = std::numeric_limits<double>::infinity();
        return out;
    }
    const Integrals in = compute_integrals(p);
    return mean_force_population(in.i1, in.i2, p.beta.value(), p.omega0);
}

}  // namespace giant_heom::meanforce
