#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "cranplan/simulator.hpp"

namespace {

using namespace cranplan;

CostModelParams bench_params() {
    CostModelParams params;
    params.alpha_prb = {{25, 400.0}, {50, 700.0}, {100, 1300.0}};
    for (int m = 0; m <= 27; ++m) params.beta_mcs[m] = 4.0 + 4.5 * m;
    return params;
}

Scenario pool_scenario(int n_rrhs, std::uint64_t ttis) {
    Scenario s;
    s.params = bench_params();
    s.topology = Topology::kConsolidated;
    s.duration_ttis = ttis;
    s.seed = 99;
    const int n_vms = (n_rrhs + 3) / 4;
    for (int v = 0; v < n_vms; ++v)
        s.vms.push_back(BbuVmSpec{"vm-" + std::to_string(v), 4, CpuFrequency(3.2)});
    const int prbs[] = {25, 50, 100};
    for (int r = 0; r < n_rrhs; ++r) {
        RrhSpec rrh{"rrh-" + std::to_string(r), PrbAllocation(prbs[r % 3]),
                    McsIndex((r * 7) % 28)};
        rrh.activity = 0.25 + 0.15 * (r % 5);
        s.rrhs.push_back(std::move(rrh));
        s.assignment[s.rrhs.back().id] = s.vms[static_cast<std::size_t>(r % n_vms)].id;
    }
    return s;
}

void BM_SimulateRun(benchmark::State& state) {
    const auto scenario = pool_scenario(static_cast<int>(state.range(0)),
                                        static_cast<std::uint64_t>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(scenario));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1));
}
BENCHMARK(BM_SimulateRun)->Args({4, 1000})->Args({16, 1000})->Args({64, 1000})->Args({16, 10000});

void BM_ProvisionConsolidated(benchmark::State& state) {
    const auto params = bench_params();
    const auto scenario = pool_scenario(static_cast<int>(state.range(0)), 1);
    const BbuVmSpec tmpl{"bbu", 4, CpuFrequency(3.2)};
    for (auto _ : state) {
        benchmark::DoNotOptimize(provision_consolidated(scenario.rrhs, tmpl, 85.0, params));
    }
}
BENCHMARK(BM_ProvisionConsolidated)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
