#include <benchmark/benchmark.h>

#include "isingmis/ising.hpp"
#include "isingmis/logreg.hpp"
#include "isingmis/rwl.hpp"
#include "isingmis/simulate.hpp"

using namespace isingmis;

namespace {

LogRegProblem node_problem(const SpinMatrix& data, int r, double lambda) {
    LogRegProblem prob;
    prob.m = data.n();
    prob.k = data.p() - 1;
    prob.lambda = lambda;
    for (int i = 0; i < data.n(); ++i) {
        prob.response.push_back(data(i, r));
        for (int t = 0; t < data.p(); ++t) {
            if (t != r) prob.design.push_back(double(data(i, t)));
        }
    }
    return prob;
}

void bm_fit_l1_logistic(benchmark::State& state) {
    const GraphSpec g = build_figure1_network();
    const SpinMatrix data =
        sample_ising(g, int(state.range(0)), SampleMethod::Exact, RngSeed{42});
    const LogRegProblem prob = node_problem(data, 0, 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_l1_logistic(prob));
    }
}

void bm_rwl_path(benchmark::State& state) {
    const GraphSpec g = build_figure1_network();
    const SpinMatrix data = sample_ising(g, 60, SampleMethod::Exact, RngSeed{42});
    const auto grid = default_lambda_grid(12, 60, int(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rwl_path(data, grid));
    }
}

}  // namespace

BENCHMARK(bm_fit_l1_logistic)->Arg(60)->Arg(500)->Arg(5000);
BENCHMARK(bm_rwl_path)->Arg(10)->Arg(30);
