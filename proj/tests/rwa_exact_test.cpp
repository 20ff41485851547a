#include <gtest/gtest.h>

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/errors.hpp"
#include "giant_heom/expfit.hpp"
#include "giant_heom/ode.hpp"
#include "giant_heom/rwa_exact.hpp"

using namespace giant_heom;
using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

bath::BathParams desk() {
    bath::BathParams p;
    p.tau = 2.0 * pi * 4.0;
    return p;
}

// Pseudomode oracle: fit the memory kernel K(s) = C(s) exp(i w0 s) with a
// complex exponential sum and integrate the equivalent local ODE system
//   G' = -sum_k phi_k,   phi_k' = a_k G - b_k phi_k.
std::vector<cplx> pseudomode_green(const bath::BathParams& p, const std::vector<double>& times) {
    const expfit::SamplingGrid grid{3.0 * p.tau, 3001};
    std::vector<cplx> k(grid.n_samples);
    for (std::size_t i = 0; i < k.size(); ++i) {
        const double s = grid.time(i);
        k[i] = bath::bcf_zero_temperature(p, s) * std::exp(cplx{0.0, p.omega0 * s});
    }
    const auto fit = expfit::fit_signal(k, grid, 1e-8);
    const auto& terms = fit.sum.terms();
    const auto n = static_cast<Eigen::Index>(terms.size());
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n + 1);
    y(0) = 1.0;
    const auto rhs = [&](double, const Eigen::VectorXcd& s, Eigen::VectorXcd& ds) {
        ds(0) = -s.tail(n).sum();
        for (Eigen::Index j = 0; j < n; ++j) ds(j + 1) = terms[j].c * s(0) - terms[j].g * s(j + 1);
    };
    ode::IntegratorConfig cfg;
    cfg.rtol = 1e-11;
    cfg.atol = 1e-13;
    std::vector<cplx> out;
    ode::integrate(rhs, 0.0, y, times, [&](std::size_t, double, const Eigen::VectorXcd& s) { out.push_back(s(0)); }, cfg);
    return out;
}

}  // namespace

TEST(RwaExact, InitialConditions) {
    const auto g = rwa_exact::solve_green(desk(), 10.0, 0.01);
    EXPECT_EQ(g.g[0], cplx(1.0, 0.0));
    EXPECT_EQ(g.g_dot[0], cplx(0.0, 0.0));
    const auto rates = rwa_exact::extract_rates(g);
    EXPECT_EQ(rates.gamma_minus[0], 0.0);
    EXPECT_EQ(rates.lamb_shift[0], 0.0);
}

TEST(RwaExact, StepSnapsToTheDelay) {
    const auto p = desk();
    const auto g = rwa_exact::solve_green(p, 60.0, 0.045);
    const double m = p.tau / g.dt;
    EXPECT_NEAR(m, std::round(m), 1e-9);
    EXPECT_LE(g.dt, 0.045);
    EXPECT_GE(g.t.back(), 60.0 - 1e-9);
}

TEST(RwaExact, RejectsUnsupportedInput) {
    auto p = desk();
    EXPECT_THROW(rwa_exact::solve_green(p, 10.0, 1.1 * rwa_exact::max_step(p)), ConfigError);
    EXPECT_THROW(rwa_exact::solve_green(p, 10.0, 0.0), ConfigError);
    EXPECT_THROW(rwa_exact::solve_green(p, -1.0, 0.01), ConfigError);
    p.beta = bath::InverseTemperature::finite(1.0);
    EXPECT_THROW(rwa_exact::solve_green(p, 10.0, 0.01), ConfigError);
}

TEST(RwaExact, MaxStepRule) {
    auto p = desk();
    EXPECT_NEAR(rwa_exact::max_step(p), std::min(pi, p.tau) / 64.0, 1e-15);
    p.tau = 0.0;
    EXPECT_NEAR(rwa_exact::max_step(p), pi / 64.0, 1e-15);
    p.tau = 1.0;
    EXPECT_NEAR(rwa_exact::max_step(p), 1.0 / 64.0, 1e-15);
}

TEST(RwaExact, MarkovianDecayRate) {
    // Small atom: population decays at 2 Re Gamma_-(inf) = 2 J(w0) = 4 gamma(w0).
    bath::BathParams p;
    p.tau = 0.0;
    const auto g = rwa_exact::solve_green(p, 120.0, rwa_exact::max_step(p));
    const double rate = 4.0 * bath::spectral_coupling(p, p.omega0);
    const double t1 = 30.0, t2 = 110.0;
    const double fitted = std::log(std::norm(g.at(t1)) / std::norm(g.at(t2))) / (t2 - t1);
    EXPECT_NEAR(fitted, rate, 0.02 * rate);
    const auto rates = rwa_exact::extract_rates(g);
    EXPECT_NEAR(rates.gamma_minus.back(), 0.5 * rate, 0.02 * rate);
}

TEST(RwaExact, AgreesWithPseudomodeOracle) {
    const auto p = desk();
    std::vector<double> times;
    for (int k = 0; k <= 120; ++k) times.push_back(0.75 * k);
    const auto ref = pseudomode_green(p, times);
    const auto g = rwa_exact::solve_green(p, 90.0, 0.02);
    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) worst = std::max(worst, std::abs(g.at(times[k]) - ref[k]));
    EXPECT_LT(worst, 1e-6);
}

TEST(RwaExact, RichardsonConvergence) {
    const auto p = desk();
    const double e1 = rwa_exact::richardson_estimate(p, 60.0, 0.04);
    const double e2 = rwa_exact::richardson_estimate(p, 60.0, 0.02);
    EXPECT_LT(e2, 1e-7);
    EXPECT_GT(e1 / e2, 3.0);
}

TEST(RwaExact, AmplitudeIsBounded) {
    const auto g = rwa_exact::solve_green(desk(), 150.0, 0.02);
    EXPECT_LE(g.max_abs(), 1.0 + 1e-10);
}

TEST(RwaExact, DynamicalMapIsLinearAndTracePreserving) {
    const auto g = rwa_exact::solve_green(desk(), 40.0, 0.02);
    const auto a = rwa_exact::dynamical_map(g, qubit::QubitState::excited());
    const auto b = rwa_exact::dynamical_map(g, qubit::QubitState::plus());
    qubit::Matrix2 mix = 0.3 * qubit::QubitState::excited().matrix() + 0.7 * qubit::QubitState::plus().matrix();
    const auto c = rwa_exact::dynamical_map(g, qubit::QubitState::from_matrix(mix));
    for (std::size_t n = 0; n < c.size(); n += 50) {
        EXPECT_LT((c.rho[n] - (0.3 * a.rho[n] + 0.7 * b.rho[n])).cwiseAbs().maxCoeff(), 1e-14);
    }
    EXPECT_LT(c.max_trace_defect, 1e-14);
    EXPECT_LT(c.max_positivity_defect, 1e-12);
}

TEST(RwaExact, InteractionPictureDropsTheBareRotation) {
    const auto g = rwa_exact::solve_green(desk(), 5.0, 0.02);
    const auto s = rwa_exact::dynamical_map(g, qubit::QubitState::plus(), rwa_exact::Picture::schrodinger);
    const auto i = rwa_exact::dynamical_map(g, qubit::QubitState::plus(), rwa_exact::Picture::interaction);
    const std::size_t n = g.size() - 1;
    EXPECT_LT(std::abs(s.rho[n](1, 0) - i.rho[n](1, 0) * std::exp(cplx{0.0, -g.t[n]})), 1e-14);
}

TEST(RwaExact, TimeLocalClosure) {
    const auto g = rwa_exact::solve_green(desk(), 120.0, 0.02);
    EXPECT_LT(rwa_exact::closure_defect(g, qubit::QubitState::excited()), 1e-6);
    EXPECT_LT(rwa_exact::closure_defect(g, qubit::QubitState::plus()), 1e-6);
}

TEST(RwaExact, NegativeIntervalsAreMaximalRuns) {
    rwa_exact::GreenFunction g;
    g.dt = 1.0;
    g.t = {0, 1, 2, 3, 4, 5};
    g.g = {1.0, 1.0, 1.0, 0.0, 1.0, 1.0};
    g.g_dot = {0.0, 0.1, 0.2, 0.0, -0.1, 0.1};
    const auto r = rwa_exact::extract_rates(g);
    EXPECT_EQ(r.undefined, (std::vector<unsigned char>{0, 0, 0, 1, 0, 0}));
    ASSERT_EQ(r.negative_intervals.size(), 2u);
    EXPECT_EQ(r.negative_intervals[0].begin, 1.0);
    EXPECT_EQ(r.negative_intervals[0].end, 2.0);
    EXPECT_EQ(r.negative_intervals[1].begin, 5.0);
    EXPECT_DOUBLE_EQ(r.min_gamma_minus(), -0.2);
    EXPECT_TRUE(std::isnan(r.gamma_minus[3]));
}
