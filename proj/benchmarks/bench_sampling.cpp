#include <benchmark/benchmark.h>

#include "isingmis/ising.hpp"
#include "isingmis/simulate.hpp"

using namespace isingmis;

namespace {

void bm_ising_log_table(benchmark::State& state) {
    GraphSpec g = build_fmri_like_network(int(state.range(0)), 0.5, RngSeed{7});
    for (auto _ : state) {
        benchmark::DoNotOptimize(ising_log_table(g));
    }
}

void bm_sample_exact(benchmark::State& state) {
    const GraphSpec g = build_figure1_network();
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_ising(g, int(state.range(0)), SampleMethod::Exact, RngSeed{11}));
    }
}

void bm_sample_gibbs(benchmark::State& state) {
    const GraphSpec g = build_figure1_network();
    GibbsOptions opts;
    opts.burn_in_sweeps = 100;
    opts.thin_sweeps = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_ising(g, int(state.range(0)), SampleMethod::Gibbs, RngSeed{11}, opts));
    }
}

}  // namespace

BENCHMARK(bm_ising_log_table)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(bm_sample_exact)->Arg(60)->Arg(1000);
BENCHMARK(bm_sample_gibbs)->Arg(60)->Arg(1000);
