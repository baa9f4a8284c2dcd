#include <benchmark/benchmark.h>

#include <expcert/exact.hpp>
#include <expcert/graphs.hpp>
#include <expcert/verifier.hpp>

using namespace expcert;

static void BM_QEval(benchmark::State &state)
{
    const Interval alpha(0.25, 0.2500001);
    const Interval beta(0.5, 0.5000001);
    for (auto _ : state) {
        benchmark::DoNotOptimize(q_eval(6, alpha, beta));
    }
}
BENCHMARK(BM_QEval);

static void BM_VerifyClaim(benchmark::State &state)
{
    const int d = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_claim(d));
    }
}
BENCHMARK(BM_VerifyClaim)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

static void BM_Convexity(benchmark::State &state)
{
    const int d = static_cast<int>(state.range(0));
    const BigRational margin = parse_rational("1e-6");
    for (auto _ : state) {
        benchmark::DoNotOptimize(convexity_check(d, margin));
    }
}
BENCHMARK(BM_Convexity)->DenseRange(5, 8)->Unit(benchmark::kMillisecond);

static void BM_ProbabilityBound(benchmark::State &state)
{
    const std::int64_t v = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(probability_bound(v / 10, v / 4, v, 8));
    }
}
BENCHMARK(BM_ProbabilityBound)->RangeMultiplier(10)->Range(100, 100000);

static void BM_UnionBound(benchmark::State &state)
{
    const RegionSpec spec(state.range(0), builtin_profile(8));
    for (auto _ : state) {
        benchmark::DoNotOptimize(union_bound_exhaustive(spec));
    }
}
BENCHMARK(BM_UnionBound)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_ExpansionReport(benchmark::State &state)
{
    const int v = static_cast<int>(state.range(0));
    const BipartiteMultigraph g = sample(v, 8, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(expansion_report(g));
    }
}
BENCHMARK(BM_ExpansionReport)->DenseRange(10, 18, 4)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
