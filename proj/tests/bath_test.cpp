#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/errors.hpp"

using namespace giant_heom;
using bath::BathParams;
using bath::InverseTemperature;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

BathParams desk(double beta) {
    BathParams p;
    p.tau = 2.0 * pi * 4.0;
    if (beta > 0.0) p.beta = InverseTemperature::finite(beta);
    return p;
}

// Imaginary-time correlation straight from its frequency integral,
// (1/pi) int J(beta, w) exp(-w s) dw, split into one-period panels.
double imaginary_time_oracle(const BathParams& p, double s) {
    using boost::math::quadrature::gauss_kronrod;
    const auto f = [&](double w) { return bath::effective_spectral_density(p, w) * std::exp(-w * s) / pi; };
    const double width = 2.0 * pi / p.tau;
    const double window = 40.0 * p.omega_c;
    double acc = 0.0;
    for (double a = -window; a < window; a += width) {
        acc += gauss_kronrod<double, 61>::integrate(f, a, a + width, 8, 1e-13);
    }
    return acc;
}

}  // namespace

TEST(Bath, DefaultsAreTheReferenceParameters) {
    const BathParams p = BathParams::reference_defaults();
    EXPECT_EQ(p.eta, 1e-2);
    EXPECT_EQ(p.omega0, 1.0);
    EXPECT_EQ(p.omega_c, 2.0);
    EXPECT_NEAR(p.tau * p.omega0 / (2.0 * pi), 20.0, 1e-12);
    EXPECT_TRUE(p.beta.is_zero_temperature());
}

TEST(Bath, ValidateNamesTheField) {
    BathParams p;
    p.eta = -1.0;
    try {
        p.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("eta"), std::string::npos);
    }
    p = BathParams{};
    p.tau = -0.1;
    EXPECT_THROW(p.validate(), ConfigError);
    p = BathParams{};
    p.omega_c = 0.0;
    EXPECT_THROW(p.validate(), ConfigError);
    EXPECT_THROW(InverseTemperature::finite(0.0), DomainError);
    EXPECT_THROW(InverseTemperature::finite(-1.0), DomainError);
    EXPECT_THROW(InverseTemperature::zero_temperature().value(), DomainError);
    EXPECT_TRUE(std::isinf(InverseTemperature::zero_temperature().as_double()));
}

TEST(Bath, SpectralCouplingIsOddOhmic) {
    const BathParams p;
    EXPECT_NEAR(bath::spectral_coupling(p, 1.0), 1e-2 * std::exp(-0.5), 1e-16);
    for (double w : {0.1, 0.7, 3.0, 11.0}) {
        EXPECT_DOUBLE_EQ(bath::spectral_coupling(p, -w), -bath::spectral_coupling(p, w));
    }
    EXPECT_EQ(bath::spectral_coupling(p, 0.0), 0.0);
}

TEST(Bath, EffectiveDensityLimits) {
    BathParams p = desk(-1.0);
    // Zero temperature: one-sided, 2 gamma cos^2.
    for (double w : {0.3, 1.0, 2.5}) {
        const double c = std::cos(0.5 * w * p.tau);
        EXPECT_NEAR(bath::effective_spectral_density(p, w), 2.0 * bath::spectral_coupling(p, w) * c * c, 1e-16);
        EXPECT_EQ(bath::effective_spectral_density(p, -w), 0.0);
    }
    // Dark frequency of the two-contact interference.
    EXPECT_NEAR(bath::effective_spectral_density(p, pi / p.tau), 0.0, 1e-18);

    p.beta = InverseTemperature::finite(0.7);
    EXPECT_NEAR(bath::effective_spectral_density(p, 0.0), 2.0 * p.eta / 0.7, 1e-15);
    EXPECT_NEAR(bath::effective_spectral_density(p, 1e-9), 2.0 * p.eta / 0.7, 1e-10);
    // Detailed balance J(-w) = exp(-beta w) J(w).
    for (double w : {0.05, 0.4, 1.0, 3.3}) {
        const double jp = bath::effective_spectral_density(p, w);
        const double jm = bath::effective_spectral_density(p, -w);
        EXPECT_NEAR(jm, std::exp(-0.7 * w) * jp, 1e-14 * jp) << w;
    }
}

TEST(Bath, ClosedFormMatchesQuadratureOracle) {
    for (double beta : {0.1, 0.5, 1.0, -1.0}) {
        const BathParams p = desk(beta);
        double num = 0.0;
        double den = 0.0;
        const std::size_t n = 96;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = 1.5 * p.tau * double(k) / double(n - 1);
            const auto q = bath::bcf_quadrature(p, t);
            ASSERT_TRUE(q.converged) << "beta " << beta << " t " << t;
            const cplx c = bath::bcf_analytic(p, t);
            num += std::norm(c - q.value);
            den += std::norm(q.value);
            EXPECT_LT(std::abs(c - q.value), 1e-9) << "beta " << beta << " t " << t;
        }
        EXPECT_LT(std::sqrt(num / den), 1e-6) << "beta " << beta;
    }
}

TEST(Bath, ZeroTemperatureValueAtOrigin) {
    // C(0) = (eta wc^2 / pi) (1 + Re (1 + i wc tau)^-2).
    const BathParams p;
    const double wt = p.omega_c * p.tau;
    const double expected = p.eta * p.omega_c * p.omega_c / pi * (1.0 + (1.0 - wt * wt) / ((1.0 + wt * wt) * (1.0 + wt * wt)));
    EXPECT_NEAR(bath::bcf_analytic(p, 0.0).real(), expected, 1e-16);
    EXPECT_EQ(bath::bcf_analytic(p, 0.0).imag(), 0.0);
}

TEST(Bath, Hermiticity) {
    for (double beta : {0.5, -1.0}) {
        const BathParams p = desk(beta);
        for (double t : {0.3, 4.0, 17.0, p.tau, 40.0}) {
            const cplx a = bath::bcf_analytic(p, -t);
            const cplx b = std::conj(bath::bcf_analytic(p, t));
            EXPECT_LT(std::abs(a - b), 1e-10 * std::abs(b) + 1e-18) << t;
        }
    }
}

TEST(Bath, ImaginaryPartIsTemperatureIndependent) {
    const BathParams cold = desk(-1.0);
    for (double beta : {0.1, 0.5, 2.0}) {
        const BathParams hot = desk(beta);
        for (double t : {0.2, 1.0, 5.0, hot.tau - 0.5, hot.tau, 31.0}) {
            EXPECT_NEAR(bath::bcf_analytic(hot, t).imag(), bath::bcf_analytic(cold, t).imag(), 1e-10)
                << "beta " << beta << " t " << t;
        }
    }
}

TEST(Bath, HighTemperatureScalesAsInverseBeta) {
    const double c1 = bath::bcf_analytic(desk(0.1), 0.0).real();
    const double c2 = bath::bcf_analytic(desk(0.05), 0.0).real();
    EXPECT_NEAR(c2 / c1, 2.0, 0.1);
}

TEST(Bath, DelayedPeakHasHalfTheWeight) {
    for (double beta : {-1.0, 1.0, 0.1}) {
        const BathParams p = desk(beta);
        const double ratio = bath::bcf_analytic(p, 0.0).real() / bath::bcf_analytic(p, p.tau).real();
        EXPECT_NEAR(ratio, 2.0, 1e-3) << beta;
        // |C| has local maxima at 0 and tau.
        const double peak = std::abs(bath::bcf_analytic(p, p.tau));
        EXPECT_GT(peak, std::abs(bath::bcf_analytic(p, p.tau - 0.5)));
        EXPECT_GT(peak, std::abs(bath::bcf_analytic(p, p.tau + 0.5)));
    }
}

TEST(Bath, ThermalTailsStayNonNegative) {
    // For beta omega0 < 2 the real part does not undershoot after either peak.
    for (double beta : {1.0, 0.5, 0.1}) {
        const BathParams p = desk(beta);
        double lowest = 1.0;
        for (int k = 1; k <= 3000; ++k) {
            const double t = 1.5 * p.tau * k / 3000.0;
            lowest = std::min(lowest, bath::bcf_analytic(p, t).real());
        }
        EXPECT_GE(lowest, 0.0) << beta;
    }
    // At zero temperature the vacuum tail is negative.
    const BathParams cold = desk(-1.0);
    EXPECT_LT(bath::bcf_analytic(cold, 2.0).real(), 0.0);
    EXPECT_LT(bath::bcf_analytic(cold, cold.tau + 2.0).real(), 0.0);
}

TEST(Bath, ZeroTemperatureDerivative) {
    const BathParams p = desk(-1.0);
    const double h = 1e-5;
    for (double t : {0.0, 0.4, 3.0, p.tau, 29.0}) {
        const cplx fd = (bath::bcf_zero_temperature(p, t + h) - bath::bcf_zero_temperature(p, t - h)) / (2.0 * h);
        EXPECT_LT(std::abs(fd - bath::bcf_zero_temperature_derivative(p, t)), 1e-9) << t;
    }
}

TEST(Bath, ImaginaryTimeMatchesFrequencyIntegral) {
    const BathParams p = desk(1.0);
    for (double s : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
        const cplx c = bath::bcf_imaginary_time(p, s);
        const double ref = imaginary_time_oracle(p, s);
        EXPECT_NEAR(c.real(), ref, 1e-10 * std::abs(ref)) << s;
        EXPECT_LT(std::abs(c.imag()), 1e-12 * std::abs(c.real())) << s;
    }
    EXPECT_EQ(bath::bcf_imaginary_time(p, 0.0), bath::bcf_analytic(p, 0.0));
}

TEST(Bath, ImaginaryTimeKmsSymmetry) {
    const BathParams p = desk(0.8);
    for (double s : {0.0, 0.05, 0.2, 0.33}) {
        const cplx a = bath::bcf_imaginary_time(p, s);
        const cplx b = bath::bcf_imaginary_time(p, 0.8 - s);
        EXPECT_LT(std::abs(a - b), 1e-12 * std::abs(a)) << s;
    }
}

TEST(Bath, ImaginaryTimeDomain) {
    const BathParams p = desk(0.8);
    EXPECT_THROW(bath::bcf_imaginary_time(p, -0.01), DomainError);
    EXPECT_THROW(bath::bcf_imaginary_time(p, 0.81), DomainError);
    EXPECT_THROW(bath::bcf_imaginary_time(desk(-1.0), 0.1), DomainError);
}

TEST(Bath, QuadratureAtPaperScale) {
    const BathParams p;
    for (double t : {0.0, 10.0, p.tau, 1.5 * p.tau}) {
        const auto q = bath::bcf_quadrature(p, t);
        EXPECT_TRUE(q.converged);
        EXPECT_LT(std::abs(q.value - bath::bcf_analytic(p, t)), 1e-10) << t;
    }
}
