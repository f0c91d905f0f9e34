#include <benchmark/benchmark.h>

#include "bvlab/oracle.hpp"
#include "bvlab/probe.hpp"
#include "bvlab/slope_sampling.hpp"
#include "bvlab/viscosity.hpp"

using namespace bvlab;

namespace {

NonAutonomousIntegrand fig1() { return {MuEllipticProfile(1.4), HoelderWeight(0.25)}; }

void BM_FluxInverse(benchmark::State& st) {
    const MuEllipticProfile prof(1.4);
    const HoelderWeight w(0.25);
    const FluxSample s{w(0.3), w.excess(0.3)};
    double gamma = 1e-3;
    for (auto _ : st) {
        benchmark::DoNotOptimize(flux_inverse(prof, s, w.m(), 1e-3, gamma));
        gamma = gamma < 0.5 ? gamma * 1.01 : 1e-3;
    }
}
BENCHMARK(BM_FluxInverse);

void BM_ComputeM0(benchmark::State& st) {
    const double mu = st.range(0) / 100.0;
    for (auto _ : st) benchmark::DoNotOptimize(compute_M0(mu, 0.25).value);
}
BENCHMARK(BM_ComputeM0)->Arg(130)->Arg(140)->Arg(190)->Unit(benchmark::kMillisecond);

void BM_SamplingSetup(benchmark::State& st) {
    const Grid1D g(-1.0, 1.0, static_cast<int>(st.range(0)));
    const auto F = fig1();
    for (auto _ : st) benchmark::DoNotOptimize(SlopeSampling(F, g).size());
}
BENCHMARK(BM_SamplingSetup)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond);

void BM_Shooting(benchmark::State& st) {
    const Grid1D g(-1.0, 1.0, static_cast<int>(st.range(0)));
    const SlopeSampling S(fig1(), g);
    for (auto _ : st) benchmark::DoNotOptimize(solve_shooting(S, 1e-2, {0.0, 20.0}).flux_C);
    st.SetComplexityN(st.range(0));
}
BENCHMARK(BM_Shooting)->RangeMultiplier(4)->Range(1 << 10, 1 << 14)->Unit(benchmark::kMillisecond)->Complexity();

void BM_NewtonFromShooting(benchmark::State& st) {
    const Grid1D g(-1.0, 1.0, 1 << 12);
    const SlopeSampling S(fig1(), g);
    const auto sh = solve_shooting(S, 1e-2, {0.0, 20.0});
    for (auto _ : st) benchmark::DoNotOptimize(solve_newton(S, 1e-2, {0.0, 20.0}, sh.u).residual);
}
BENCHMARK(BM_NewtonFromShooting)->Unit(benchmark::kMillisecond);

void BM_OracleJumpBranch(benchmark::State& st) {
    const Grid1D g(-1.0, 1.0, static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(solve_oracle(1.4, 0.25, g, 20.0).jump_size);
}
BENCHMARK(BM_OracleJumpBranch)->Arg(1 << 10)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

void BM_Nikolskii(benchmark::State& st) {
    const Grid1D g(-1.0, 1.0, 1 << 14);
    const auto o = solve_oracle(1.1, 0.25, g, 20.0);
    const CellField d{g, o.minimizer.slopes()};
    const Interval K{-0.5, 0.5};
    const auto hs = default_h_range(g, K);
    for (auto _ : st) benchmark::DoNotOptimize(nikolskii_with_weight(d, 0.125, 1.0875, 1.1, 0.25, K, hs).sup);
}
BENCHMARK(BM_Nikolskii)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
