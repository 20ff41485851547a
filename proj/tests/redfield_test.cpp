#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/errors.hpp"
#include "giant_heom/redfield.hpp"

using namespace giant_heom;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

bath::BathParams small_atom(double beta = -1.0) {
    bath::BathParams p;
    p.tau = 0.0;
    if (beta > 0.0) p.beta = bath::InverseTemperature::finite(beta);
    return p;
}

std::vector<double> uniform(double t_max, std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = t_max * double(k) / double(n - 1);
    return g;
}

}  // namespace

TEST(Redfield, CoefficientsStartAtZero) {
    const auto c = redfield::compute_coefficients(small_atom(), 5.0, 0.05);
    EXPECT_EQ(c.gamma_plus[0], cplx(0.0, 0.0));
    EXPECT_EQ(c.gamma_minus[0], cplx(0.0, 0.0));
    EXPECT_EQ(c.t.size(), 101u);
    EXPECT_NEAR(c.t_max(), 5.0, 1e-12);
}

TEST(Redfield, MarkovianLimitIsTheSpectralDensity) {
    // Re Gamma_-(inf) = J(w0) = 2 gamma(w0) cos^2(w0 tau/2); Re Gamma_+(inf) = J(-w0) = 0 at T = 0.
    for (double tau : {0.0, 2.0 * pi * 20.0}) {
        auto p = small_atom();
        p.tau = tau;
        const double t_end = 4.0 * tau + 300.0;
        const auto c = redfield::compute_coefficients(p, t_end, 0.05);
        EXPECT_NEAR(c.gamma_minus.back().real(), 2.0 * bath::spectral_coupling(p, 1.0), 1e-5) << tau;
        EXPECT_NEAR(c.gamma_minus.back().real(), 0.012131, 1e-5);
        EXPECT_LT(std::abs(c.gamma_plus.back().real()), 1e-5) << tau;
    }
}

TEST(Redfield, ThermalRatesObeyDetailedBalance) {
    const auto p = small_atom(1.0);
    const auto c = redfield::compute_coefficients(p, 400.0, 0.05);
    const double up = c.gamma_plus.back().real();
    const double down = c.gamma_minus.back().real();
    EXPECT_NEAR(down, bath::effective_spectral_density(p, 1.0), 1e-5);
    EXPECT_NEAR(up / down, std::exp(-1.0), 2e-3);
}

TEST(Redfield, AnalyticCoefficientsMatchQuadratureOracle) {
    bath::BathParams p;
    p.tau = 2.0 * pi * 1.0;
    p.beta = bath::InverseTemperature::finite(0.5);
    const double t_max = 12.0, dt = 0.1;
    const auto a = redfield::compute_coefficients(p, t_max, dt);
    const auto oracle = [&](double s) { return bath::bcf_quadrature(p, s).value; };
    const auto b = redfield::compute_coefficients(oracle, p.omega0, t_max, dt);
    for (std::size_t n = 0; n < a.t.size(); ++n) {
        EXPECT_LT(std::abs(a.gamma_minus[n] - b.gamma_minus[n]), 1e-6) << a.t[n];
        EXPECT_LT(std::abs(a.gamma_plus[n] - b.gamma_plus[n]), 1e-6) << a.t[n];
    }
}

TEST(Redfield, CoefficientsAreLinearInCoupling) {
    auto p = small_atom(2.0);
    const auto a = redfield::compute_coefficients(p, 20.0, 0.1);
    p.eta *= 3.0;
    const auto b = redfield::compute_coefficients(p, 20.0, 0.1);
    for (std::size_t n = 0; n < a.t.size(); ++n) {
        EXPECT_LT(std::abs(b.gamma_minus[n] - 3.0 * a.gamma_minus[n]), 1e-14);
    }
}

TEST(Redfield, InterpolationAndRange) {
    const auto c = redfield::compute_coefficients(small_atom(), 10.0, 0.1);
    EXPECT_LT(std::abs(c.minus_at(3.0) - c.gamma_minus[30]), 1e-15);
    EXPECT_THROW(c.minus_at(10.5), DomainError);
    EXPECT_THROW(c.plus_at(-0.1), DomainError);
    EXPECT_THROW(redfield::compute_coefficients(small_atom(), 10.0, 0.2), ConfigError);
    EXPECT_NEAR(redfield::max_step(1.0, 2.0), 0.125, 1e-15);
}

TEST(Redfield, ZeroTemperaturePopulationIsExponentialOfRate) {
    const auto p = small_atom();
    const auto c = redfield::compute_coefficients(p, 60.0, 0.02);
    const auto grid = uniform(60.0, 61);
    const auto r = redfield::propagate_redfield(c, 1.0, qubit::QubitState::excited(), grid, redfield::Mode::rwa_minus);
    // P_ee(t) = exp(-2 int_0^t Re Gamma_-), integrated here by Simpson on the table.
    double integral = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const std::size_t j = 50 * k;
        double piece = 0.0;
        for (std::size_t m = j - 50; m < j; m += 2) {
            piece += c.dt / 3.0 *
                     (c.gamma_minus[m].real() + 4.0 * c.gamma_minus[m + 1].real() + c.gamma_minus[m + 2].real());
        }
        integral += piece;
        EXPECT_NEAR(r.trajectory.rho[k](1, 1).real(), std::exp(-2.0 * integral), 1e-7) << grid[k];
    }
    EXPECT_FALSE(r.positivity_flagged);
    EXPECT_LT(r.trajectory.max_trace_defect, 1e-12);
}

TEST(Redfield, FullModeRelaxesToGibbs) {
    const auto p = small_atom(1.0);
    const auto c = redfield::compute_coefficients(p, 600.0, 0.05);
    const auto r = redfield::propagate_redfield(c, 1.0, qubit::QubitState::excited(), uniform(600.0, 61),
                                                redfield::Mode::rwa_full);
    const double gibbs = 1.0 / (1.0 + std::exp(1.0));
    EXPECT_NEAR(r.trajectory.rho.back()(1, 1).real(), gibbs, 2e-3);
    EXPECT_FALSE(r.positivity_flagged);
}

TEST(Redfield, GridBeyondTableIsRejected) {
    const auto c = redfield::compute_coefficients(small_atom(), 10.0, 0.1);
    EXPECT_THROW(redfield::propagate_redfield(c, 1.0, qubit::QubitState::excited(), {0.0, 11.0},
                                              redfield::Mode::rwa_minus),
                 DomainError);
    EXPECT_THROW(redfield::propagate_redfield(c, 1.0, qubit::QubitState::excited(), {1.0, 2.0},
                                              redfield::Mode::rwa_minus),
                 DomainError);
}
