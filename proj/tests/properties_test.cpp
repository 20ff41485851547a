// Randomized property checks with fixed seeds.
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/expfit.hpp"
#include "giant_heom/heom.hpp"
#include "giant_heom/qubit.hpp"
#include "giant_heom/rwa_exact.hpp"
#include "giant_heom/scenarios.hpp"

using namespace giant_heom;
using cplx = std::complex<double>;

namespace {

// Stable rates with pairwise distance >= 0.15.
std::vector<cplx> separated_rates(std::mt19937& gen, std::size_t n, bool conjugate_pairs) {
    std::uniform_real_distribution<double> re(0.02, 0.5);
    std::uniform_real_distribution<double> im(conjugate_pairs ? 0.2 : -2.0, 2.0);
    std::vector<cplx> out;
    while (out.size() < n) {
        const cplx g{re(gen), im(gen)};
        bool ok = true;
        for (const cplx& h : out) ok = ok && std::abs(g - h) >= 0.15 && std::abs(g - std::conj(h)) >= 0.15;
        if (ok) out.push_back(g);
    }
    return out;
}

double relative_error_between_samples(const expfit::ExponentialSum& fit, const expfit::ExponentialSum& truth,
                                      const expfit::SamplingGrid& grid) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < grid.n_samples; ++i) {
        const double t = grid.time(i) + 0.37 * grid.spacing();
        num += std::norm(fit.evaluate(t) - truth.evaluate(t));
        den += std::norm(truth.evaluate(t));
    }
    return std::sqrt(num / den);
}

qubit::QubitState random_state(std::mt19937& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double p = u(gen);
    const double r = std::sqrt(p * (1.0 - p)) * u(gen);
    const cplx c = std::polar(r, 6.283185307179586 * u(gen));
    qubit::Matrix2 m;
    m << 1.0 - p, std::conj(c), c, p;
    return qubit::QubitState::from_matrix(m);
}

}  // namespace

TEST(Properties, ComplexExponentialSumsRoundTrip) {
    std::mt19937 gen(2024);
    std::normal_distribution<double> amp;
    const expfit::SamplingGrid grid{60.0, 601};
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + trial % 10;
        const auto rates = separated_rates(gen, n, false);
        std::vector<expfit::ExpTerm> terms;
        for (const cplx& g : rates) terms.push_back({cplx{amp(gen), amp(gen)}, g});
        const expfit::ExponentialSum truth(terms);
        std::vector<cplx> y(grid.n_samples);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = truth.evaluate(grid.time(i));
        const auto fit = expfit::fit_signal(y, grid, 1e-10);
        EXPECT_TRUE(fit.report.converged) << "trial " << trial;
        EXPECT_LE(fit.report.n_terms, n) << "trial " << trial;
        EXPECT_LE(relative_error_between_samples(fit.sum, truth, grid), 1e-8) << "trial " << trial;
    }
}

TEST(Properties, RealExponentialSumsRoundTrip) {
    std::mt19937 gen(99);
    std::normal_distribution<double> amp;
    const expfit::SamplingGrid grid{60.0, 601};
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t pairs = 1 + trial % 5;  // up to 10 terms
        const auto rates = separated_rates(gen, pairs, true);
        std::vector<expfit::ExpTerm> terms;
        for (const cplx& g : rates) {
            const cplx c{amp(gen), amp(gen)};
            terms.push_back({c, g});
            terms.push_back({std::conj(c), std::conj(g)});
        }
        const expfit::ExponentialSum truth(terms);
        const auto y = expfit::sample_signal([&](double t) { return truth.evaluate(t).real(); }, grid.t_max,
                                             grid.n_samples);
        const auto fit = expfit::fit_signal(y, grid, 1e-10);
        EXPECT_TRUE(fit.report.converged) << "trial " << trial;
        EXPECT_LE(fit.report.n_terms, 2 * pairs) << "trial " << trial;
        EXPECT_LE(relative_error_between_samples(fit.sum, truth, grid), 1e-8) << "trial " << trial;
        EXPECT_GE(fit.sum.min_decay_rate(), 0.0);
    }
}

TEST(Properties, BcfHermiticityAtRandomPoints) {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> t(-200.0, 200.0);
    std::uniform_real_distribution<double> b(0.05, 5.0);
    for (int i = 0; i < 500; ++i) {
        bath::BathParams p;
        if (i % 2) p.beta = bath::InverseTemperature::finite(b(gen));
        const double s = t(gen);
        const cplx a = bath::bcf_analytic(p, -s);
        const cplx c = std::conj(bath::bcf_analytic(p, s));
        EXPECT_LT(std::abs(a - c), 1e-10 * std::abs(c) + 1e-20);
    }
}

TEST(Properties, HeomTraceGeneratorIsTraceless) {
    std::mt19937 gen(17);
    std::normal_distribution<double> d;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t nr = 1 + trial % 3, ni = 1 + trial % 2;
        std::vector<expfit::ExpTerm> r, im;
        for (std::size_t k = 0; k < nr; ++k) r.push_back({cplx{d(gen), d(gen)}, cplx{std::abs(d(gen)), d(gen)}});
        for (std::size_t k = 0; k < ni; ++k) im.push_back({cplx{d(gen), d(gen)}, cplx{std::abs(d(gen)), d(gen)}});
        const auto space = heom::HierarchySpace::enumerate(nr, ni, 2 + trial % 2);
        const heom::Generator g(space, expfit::ExponentialSum(r), expfit::ExponentialSum(im), 1.0,
                                {.scaled = trial % 2 == 1});
        heom::AdoVector x(g.dimension()), y(g.dimension());
        for (auto& v : x) v = cplx{d(gen), d(gen)};
        g.apply(x, y);
        EXPECT_LT(std::abs(y(0) + y(3)), 1e-12 * x.cwiseAbs().maxCoeff() * 100.0);
    }
}

TEST(Properties, ExactMapIsPositiveForRandomStates) {
    bath::BathParams p;
    p.tau = 2.0 * 3.141592653589793 * 4.0;
    const auto green = rwa_exact::solve_green(p, 60.0, 0.04);
    std::mt19937 gen(8);
    for (int i = 0; i < 20; ++i) {
        const auto traj = rwa_exact::dynamical_map(green, random_state(gen));
        EXPECT_LT(traj.max_positivity_defect, 1e-12);
        EXPECT_LT(traj.max_trace_defect, 1e-14);
        EXPECT_LT(traj.max_hermiticity_defect, 1e-15);
    }
}

TEST(Properties, ConfigRoundTripForRandomConfigs) {
    std::mt19937 gen(41);
    std::uniform_real_distribution<double> u(0.01, 3.0);
    for (int i = 0; i < 50; ++i) {
        scenarios::ScenarioConfig c;
        c.eta = u(gen) * 1e-2;
        c.omega_c = u(gen);
        c.omega0_tau_over_2pi = u(gen) * 5.0;
        if (i % 3) c.beta_omega0 = u(gen);
        c.depth = 1 + i % 4;
        c.t_max = 10.0 * u(gen);
        c.n_points = 2 + static_cast<std::size_t>(100 * u(gen));
        c.eps_r = 1e-3 * u(gen);
        c.rtol = 1e-9 * u(gen);
        if (i % 2) c.exact_dt = 1e-3 * u(gen);
        c.init = static_cast<qubit::InitialState>(i % 3);
        EXPECT_EQ(scenarios::parse_config(scenarios::to_json(c)), c) << i;
    }
}
