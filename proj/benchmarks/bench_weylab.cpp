#include "weylab/weylab.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>

using namespace weylab;

namespace {

std::vector<GridFunction> symbols(int n, int count) {
    const auto g = make_grid(1, n);
    EnsembleSpec e;
    e.seed = 3;
    e.count = count;
    e.center_radius = e.modulation_radius = std::min(0.75, g.L / 8.0);
    return ensemble_generate(e, g);
}

void BM_TwistedConvolution(benchmark::State& state) {
    const auto s = symbols(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(twisted_convolution(s[0], s[1]));
}
BENCHMARK(BM_TwistedConvolution)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

// direct double sum over the grid, O(n^{4d}); the reference for the FFT route
void BM_TwistedConvolutionSlow(benchmark::State& state) {
    const auto s = symbols(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(twisted_convolution_slow(s[0], s[1]));
}
BENCHMARK(BM_TwistedConvolutionSlow)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_WeylProduct(benchmark::State& state) {
    const auto s = symbols(static_cast<int>(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(weyl_product(s[0], s[1]));
}
BENCHMARK(BM_WeylProduct)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SymplecticStft(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto s = symbols(n, 1);
    const auto w = standard_window(make_grid(1, n), Measure::quadrature);
    for (auto _ : state) benchmark::DoNotOptimize(symplectic_stft(s[0], w));
}
BENCHMARK(BM_SymplecticStft)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// streamed pass evaluating state.range(1) weighted mixed norms at once
void BM_ModulationNorms(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto s = symbols(n, 1);
    const auto w = standard_window(make_grid(1, n), Measure::quadrature);
    std::vector<MixedNormSpec> specs;
    for (int k = 0; k < state.range(1); ++k) {
        MixedNormSpec m;
        m.p = Exponent::from_value(Rational(k + 1));
        m.weight = WeightSpec::parse(k % 2 == 0 ? "poly:s=1@Y" : "poly:s=-1@Y", 4);
        specs.push_back(m);
    }
    for (auto _ : state) benchmark::DoNotOptimize(modulation_norms(s[0], w, specs, ModulationFlavor::W));
}
BENCHMARK(BM_ModulationNorms)->Args({16, 1})->Args({32, 1})->Args({32, 6})->Unit(benchmark::kMillisecond);

void BM_OperatorMatrix(benchmark::State& state) {
    const auto s = symbols(static_cast<int>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(operator_matrix(s[0], MatrixA::weyl(1)));
}
BENCHMARK(BM_OperatorMatrix)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
