#include <benchmark/benchmark.h>

#include <cmath>

#include <subdiv/bisector_chain.hpp>
#include <subdiv/quad_chain.hpp>
#include <subdiv/quadrature.hpp>
#include <subdiv/random.hpp>
#include <subdiv/stats.hpp>
#include <subdiv/subtriangle_chain.hpp>

using namespace subdiv;

static void BM_NextUniform(benchmark::State& state) {
    RandomSource src(1, 0);
    double acc = 0.0;
    for (auto _ : state) acc += src.next_uniform();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_NextUniform);

static void BM_PairStep(benchmark::State& state) {
    RandomSource src(1, 0);
    quadchain::PairState s{{1, 0}, {0, 1}, 0};
    for (auto _ : state) {
        s = quadchain::pair_step(s, src.next_bit());
        if (s.step % 64 == 0) s = {{1, 0}, {0, 1}, 0};  // keep |u-v| away from zero
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_PairStep);

static void BM_QuadChild(benchmark::State& state) {
    const Quadrilateral q{{0, 0}, {4, 0}, {5, 3}, {1, 4}};
    int index = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(quadchain::quad_child(q, index));
        index = (index + 1) & 3;
    }
}
BENCHMARK(BM_QuadChild);

static void BM_BisectorStepPermutation(benchmark::State& state) {
    RandomSource src(1, 0);
    AngleTriple t = equilateral_triple();
    for (auto _ : state) {
        t = bisector::step_permutation(t, src);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_BisectorStepPermutation);

static void BM_BisectorStepChild(benchmark::State& state) {
    RandomSource src(1, 0);
    AngleTriple t = equilateral_triple();
    for (auto _ : state) {
        t = bisector::step_child(t, src);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_BisectorStepChild);

static void BM_SubtriangleStep(benchmark::State& state) {
    RandomSource src(1, 0);
    ShapeCoord s = equilateral_shape();
    for (auto _ : state) {
        const auto res = subtriangle::step(s, src.next_triple());
        s = res.shape;
        if (s.y < 1e-300) s = equilateral_shape();
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_SubtriangleStep);

static void BM_MaxSideY0(benchmark::State& state) {
    RandomSource src(1, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(subtriangle::max_side_y0(0.75, src.next_triple()));
    }
}
BENCHMARK(BM_MaxSideY0);

static void BM_CondRGivenAb(benchmark::State& state) {
    double xa = 0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(subtriangle::cond_r_given_ab(0.75, xa, 0.4));
        xa = xa < 0.9 ? xa + 1e-4 : 0.1;
    }
}
BENCHMARK(BM_CondRGivenAb);

static void BM_Integrate1dLog(benchmark::State& state) {
    for (auto _ : state) {
        const auto r = quadrature::integrate_1d([](double x) { return std::log(x); }, 0.0, 1.0, 1e-10);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_Integrate1dLog);

static void BM_KsTest(benchmark::State& state) {
    RandomSource src(1, 0);
    std::vector<double> samples(static_cast<std::size_t>(state.range(0)));
    for (double& v : samples) v = src.next_uniform();
    for (auto _ : state) {
        auto copy = samples;
        const auto rep = stats::ks_test(std::move(copy), [](double x) { return x; });
        benchmark::DoNotOptimize(rep.p_value);
    }
}
BENCHMARK(BM_KsTest)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
