#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cranplan/cost_models.hpp"
#include "cranplan/fitting.hpp"
#include "cranplan/lte.hpp"

namespace {

using namespace cranplan;

CostModelParams full_params() {
    CostModelParams params;
    params.alpha_prb = {{25, 400.0}, {50, 700.0}, {100, 1300.0}};
    for (int m = 0; m <= 27; ++m) params.beta_mcs[m] = 4.0 + 4.5 * m;
    return params;
}

void BM_SubframeTime(benchmark::State& state) {
    const auto params = full_params();
    const CpuFrequency f(3.1);
    const PrbAllocation prb(100);
    const McsIndex mcs(27);
    for (auto _ : state) {
        benchmark::DoNotOptimize(subframe_time_us(params, f, prb, mcs));
    }
}
BENCHMARK(BM_SubframeTime);

void BM_MaxDlRate(benchmark::State& state) {
    const PrbAllocation prb(100);
    const McsIndex mcs(27);
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_dl_rate_mbps(prb, mcs));
    }
}
BENCHMARK(BM_MaxDlRate);

void BM_LinkLookup(benchmark::State& state) {
    const auto& table = LinkQualityTable::reference();
    const PrbAllocation prb(50);
    double atten = 60.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(link_throughput_mbps(table, atten, prb));
        atten = atten >= 80.0 ? 60.0 : atten + 0.25;
    }
}
BENCHMARK(BM_LinkLookup);

void BM_FitTiming(benchmark::State& state) {
    const auto params = full_params();
    const std::vector<double> freqs{2.8, 2.9, 3.0, 3.1, 3.2, 3.3, 3.4, 3.5};
    std::vector<TimingRecord> records;
    std::mt19937_64 rng(42);
    const int reps = static_cast<int>(state.range(0));
    for (int rep = 0; rep < reps; ++rep) {
        for (const double f : freqs)
            for (const int prb : {25, 50, 100})
                for (const int mcs : {0, 9, 16, 27}) {
                    const double noise =
                        (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5) * 2.0;
                    records.push_back(TimingRecord{
                        f, prb, mcs,
                        params.alpha_prb.at(prb) / f + params.beta_mcs.at(mcs) + 2.508 + noise});
                }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_timing(records));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(records.size()));
}
BENCHMARK(BM_FitTiming)->Arg(1)->Arg(8)->Arg(64);

}  // namespace
