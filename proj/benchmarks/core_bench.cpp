#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "giant_heom/bath.hpp"
#include "giant_heom/expfit.hpp"
#include "giant_heom/heom.hpp"
#include "giant_heom/rwa_exact.hpp"
#include "giant_heom/special.hpp"

using namespace giant_heom;
using cplx = std::complex<double>;

namespace {

bath::BathParams desk() {
    bath::BathParams p;
    p.tau = 2.0 * std::numbers::pi * 4.0;
    return p;
}

expfit::ExponentialSum synthetic(std::size_t n, double sign) {
    std::vector<expfit::ExpTerm> terms;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 0.3 * double(k + 1);
        terms.push_back({cplx{1e-3, sign * 1e-4}, cplx{0.1 + 0.01 * double(k), w}});
    }
    return expfit::ExponentialSum(std::move(terms));
}

void BM_GeneratorApply(benchmark::State& state) {
    const std::size_t k = static_cast<std::size_t>(state.range(0));
    const auto space = heom::HierarchySpace::enumerate(k, k, 2);
    const heom::Generator g(space, synthetic(k, 1.0), synthetic(k, -1.0), 1.0);
    heom::AdoVector x = heom::AdoVector::Constant(g.dimension(), cplx{1.0, 0.5});
    heom::AdoVector y(g.dimension());
    for (auto _ : state) {
        g.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.counters["ados"] = double(space.size());
}
BENCHMARK(BM_GeneratorApply)->Arg(10)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_EspritRates(benchmark::State& state) {
    const auto p = desk();
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const double t_max = 3.0 * p.tau;
    const auto y = expfit::sample_signal([&](double t) { return bath::bcf_analytic(p, t).real(); }, t_max, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(expfit::esprit_rates(y, t_max / double(n - 1), 60));
    }
}
BENCHMARK(BM_EspritRates)->Arg(501)->Arg(1001)->Unit(benchmark::kMillisecond);

void BM_Trigamma(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        x += 1e-3;
        benchmark::DoNotOptimize(special::trigamma(cplx{1.0 + x, 3.0 - x}));
    }
}
BENCHMARK(BM_Trigamma);

void BM_FiniteTemperatureBcf(benchmark::State& state) {
    auto p = desk();
    p.beta = bath::InverseTemperature::finite(1.0);
    double t = 0.0;
    for (auto _ : state) {
        t += 1e-2;
        benchmark::DoNotOptimize(bath::bcf_analytic(p, t));
    }
}
BENCHMARK(BM_FiniteTemperatureBcf);

void BM_VolterraGreen(benchmark::State& state) {
    const auto p = desk();
    const double t_max = double(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwa_exact::solve_green(p, t_max, rwa_exact::max_step(p)));
    }
}
BENCHMARK(BM_VolterraGreen)->Arg(50)->Arg(150)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
