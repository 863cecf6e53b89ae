#include <benchmark/benchmark.h>

#include "isingmis/em.hpp"
#include "isingmis/ising.hpp"
#include "isingmis/rwl.hpp"
#include "isingmis/simulate.hpp"

using namespace isingmis;

namespace {

struct EmInputs {
    SpinMatrix observed{0, 0};
    MisclassLaw law;
    RwlFit initial;
    NodeSet candidates;
};

EmInputs make_inputs(int n) {
    const GraphSpec g = build_figure1_network();
    const NodeSet candidates = figure1_candidates();
    const SpinMatrix clean = sample_ising(g, n, SampleMethod::Exact, RngSeed{3});
    std::vector<double> gammas(12, 0.0);
    for (NodeId c : candidates) gammas[std::size_t(c)] = 0.3;
    const MisclassLaw law = MisclassLaw::per_node(gammas);
    EmInputs in;
    in.observed = apply_misclassification(clean, law, RngSeed{4});
    in.law = law;
    in.initial = rwl_fit(in.observed, 0.12);
    in.candidates = candidates;
    return in;
}

void bm_estep_weights(benchmark::State& state) {
    const EmInputs in = make_inputs(int(state.range(0)));
    EMResult seeded = em_update(in.initial, in.observed, in.law, in.candidates, 0.12, 1);
    const EMState& st = seeded.state;
    const GraphComponent* comp = nullptr;
    for (const GraphComponent& c : st.partition.components) {
        if (!c.candidates.empty()) comp = &c;
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(estep_weights(st, in.observed, in.law, comp->nodes));
    }
}

void bm_em_update(benchmark::State& state) {
    const EmInputs in = make_inputs(60);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            em_update(in.initial, in.observed, in.law, in.candidates, 0.12, int(state.range(0))));
    }
}

}  // namespace

BENCHMARK(bm_estep_weights)->Arg(60)->Arg(1000);
BENCHMARK(bm_em_update)->Arg(1)->Arg(3);
