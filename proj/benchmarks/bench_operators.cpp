#include <benchmark/benchmark.h>

#include <cmath>

#include "fracalc/calculus.hpp"
#include "fracalc/operators.hpp"
#include "fracalc/sobolev.hpp"

using namespace fracalc;

namespace {

SampledFunction bump_sample(std::size_t n, DomainKind kind = DomainKind::FiniteInterval) {
    const Grid g = (kind == DomainKind::FiniteInterval)
                       ? make_uniform_grid(0.0, 1.0, n, kind)
                       : make_uniform_grid(-8.0, 8.0, n, kind);
    const double c = (kind == DomainKind::FiniteInterval) ? 0.5 : 0.0;
    const double hw = (kind == DomainKind::FiniteInterval) ? 0.35 : 2.0;
    return sample(g, [=](double x) { return calculus::smooth_bump(x, c, hw); });
}

}  // namespace

static void BM_RLIntegral(benchmark::State& state) {
    const auto f = bump_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = rl_integral(f, 0.5, Direction::Left);
        benchmark::DoNotOptimize(r.output.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RLIntegral)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_RLDerivative(benchmark::State& state) {
    const auto f = bump_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = rl_derivative(f, 0.5, Direction::Left);
        benchmark::DoNotOptimize(r.output.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RLDerivative)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_GLDerivative(benchmark::State& state) {
    const auto f = bump_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto r = gl_derivative(f, 0.5, Direction::Left);
        benchmark::DoNotOptimize(r.output.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GLDerivative)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_FourierDerivative(benchmark::State& state) {
    const auto f =
        bump_sample(static_cast<std::size_t>(state.range(0)), DomainKind::TruncatedLine);
    for (auto _ : state) {
        auto r = fourier_derivative(f, 0.5);
        benchmark::DoNotOptimize(r.output.values.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FourierDerivative)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void BM_GagliardoSeminorm(benchmark::State& state) {
    const auto f = bump_sample(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sobolev::gagliardo_seminorm(f, 0.4, 2.0));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GagliardoSeminorm)->RangeMultiplier(2)->Range(256, 2048)->Complexity();

static void BM_Mollify(benchmark::State& state) {
    const auto f =
        bump_sample(static_cast<std::size_t>(state.range(0)), DomainKind::TruncatedLine);
    for (auto _ : state) {
        auto r = calculus::mollify(f, 0.25);
        benchmark::DoNotOptimize(r.values.data());
    }
}
BENCHMARK(BM_Mollify)->RangeMultiplier(2)->Range(512, 4096);

BENCHMARK_MAIN();
