#include <benchmark/benchmark.h>

#include <cmath>

#include "semirv/asym.hpp"
#include "semirv/oracle.hpp"
#include "semirv/risk.hpp"
#include "semirv/rng.hpp"
#include "semirv/special.hpp"

using namespace semirv;

namespace {

SemiRVDistribution exp1() {
    return SemiRVDistribution::make(1.0, TailFunctionSpec(ConstantFamily{1.0}),
                                    DistKind::Continuous);
}

void BM_LnGamma(benchmark::State& state) {
    double x = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ln_gamma(x));
        x += 0.1;
        if (x > 180.0) x = 0.3;
    }
}
BENCHMARK(BM_LnGamma);

void BM_Quantile(benchmark::State& state) {
    const auto d = SemiRVDistribution::make(
        1.0, TailFunctionSpec(LogPowerFamily{1.0, 1.0}), DistKind::Continuous);
    CounterRng rng(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(d.quantile(rng.next_double()));
    }
}
BENCHMARK(BM_Quantile);

void BM_ConvTail2(benchmark::State& state) {
    const auto a = exp1();
    const auto b = SemiRVDistribution::make(
        1.0, TailFunctionSpec(LogPowerFamily{1.0, 1.0}), DistKind::Continuous);
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(conv_tail_2(a, b, x).log_value);
    }
}
BENCHMARK(BM_ConvTail2)->Arg(20)->Arg(80)->Arg(320);

void BM_GridBracket(benchmark::State& state) {
    const auto d = exp1();
    GridConvolutionPlan plan;
    plan.step = 1.0 / static_cast<double>(state.range(0));
    plan.x_max = 30.0;
    const std::vector<double> grid = {5.0, 10.0, 15.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(conv_tail_n_grid_bracket({d, d, d}, plan, grid));
    }
}
BENCHMARK(BM_GridBracket)->Arg(256)->Arg(1024)->Arg(4096);

void BM_LatticeConvTail(benchmark::State& state) {
    const auto g = SemiRVDistribution::make(
        std::log(2.0), TailFunctionSpec(ConstantFamily{1.0}), DistKind::Lattice);
    const long long k = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lattice_conv_tail({g, g, g}, k));
    }
}
BENCHMARK(BM_LatticeConvTail)->Arg(64)->Arg(256);

void BM_RuinPaths(benchmark::State& state) {
    std::vector<TailFunctionSpec> f(2, TailFunctionSpec(ConstantFamily{1.0}));
    const auto cfg = RiskModelConfig::make(1.0, f, f);
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ruin_mc(cfg, 100.0, 2, n, 1).point);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RuinPaths)->Arg(1 << 14)->Arg(1 << 17);

void BM_FunctionConvolveN(benchmark::State& state) {
    const TailFunctionSpec f(LogPowerFamily{-1.0, 1.0});
    const std::vector<TailFunctionSpec> fs(3, f);
    for (auto _ : state) {
        benchmark::DoNotOptimize(function_convolve_n(fs, 100.0));
    }
}
BENCHMARK(BM_FunctionConvolveN);

}  // namespace

BENCHMARK_MAIN();
