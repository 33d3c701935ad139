#pragma once

// Seeded generators shared by property tests and the acceptance suite.
// All randomness flows through mt19937_64 raw bits so the fixtures are
// identical on every platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cranplan/cost_models.hpp"
#include "cranplan/fitting.hpp"
#include "cranplan/simulator.hpp"

namespace cranplan::testing {

inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

/// Box-Muller from raw engine bits; std::normal_distribution is
/// implementation-defined and would not reproduce across libraries.
inline double gaussian(std::mt19937_64& rng) {
    double u1 = unit(rng);
    while (u1 <= 0.0) u1 = unit(rng);
    const double u2 = unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

/// A random parameter table satisfying every CostModelParams invariant:
/// alpha positive non-decreasing over {25, 50, 100}, beta non-negative
/// non-decreasing over all 28 MCS indices.
inline CostModelParams random_params(std::mt19937_64& rng) {
    CostModelParams params;
    double alpha = uniform(rng, 100.0, 800.0);
    for (const int prb : {25, 50, 100}) {
        params.alpha_prb[prb] = alpha;
        alpha += uniform(rng, 0.0, 600.0);
    }
    double beta = uniform(rng, 0.0, 40.0);
    for (int mcs = 0; mcs <= 27; ++mcs) {
        params.beta_mcs[mcs] = beta;
        beta += uniform(rng, 0.0, 8.0);
    }
    params.t_const_us = uniform(rng, 0.0, 5.0);
    params.cpu_slope = uniform(rng, 0.1, 1.0);
    params.cpu_intercept = uniform(rng, 0.0, 30.0);
    return params;
}

/// Noiseless timing records on a full grid, straight from the model.
inline std::vector<TimingRecord> timing_grid(const CostModelParams& params,
                                             const std::vector<double>& freqs,
                                             const std::vector<int>& prbs,
                                             const std::vector<int>& mcss) {
    std::vector<TimingRecord> records;
    records.reserve(freqs.size() * prbs.size() * mcss.size());
    for (const double f : freqs)
        for (const int prb : prbs)
            for (const int mcs : mcss)
                records.push_back(TimingRecord{
                    f, prb, mcs,
                    params.alpha_prb.at(prb) / f + params.beta_mcs.at(mcs) + params.t_const_us});
    return records;
}

/// Small random scenario within the oracle-equivalence envelope:
/// up to 3 RRHs, up to 2 VMs, up to 50 TTIs.
inline Scenario random_small_scenario(std::mt19937_64& rng) {
    Scenario scenario;
    scenario.params = random_params(rng);
    scenario.topology = Topology::kConsolidated;
    scenario.duration_ttis = static_cast<std::uint64_t>(uniform_int(rng, 1, 50));
    scenario.seed = rng();
    scenario.deadline_us = uniform(rng, 300.0, 3000.0);

    const int n_vms = uniform_int(rng, 1, 2);
    for (int v = 0; v < n_vms; ++v) {
        scenario.vms.push_back(BbuVmSpec{"vm-" + std::to_string(v + 1),
                                         uniform_int(rng, 1, 2),
                                         CpuFrequency(uniform(rng, 2.8, 3.5))});
    }
    const int n_rrhs = uniform_int(rng, 1, 3);
    const int prb_choices[] = {25, 50, 100};
    for (int r = 0; r < n_rrhs; ++r) {
        RrhSpec rrh{"rrh-" + std::to_string(r + 1),
                    PrbAllocation(prb_choices[uniform_int(rng, 0, 2)]),
                    McsIndex(uniform_int(rng, 0, 27))};
        const int kind = uniform_int(rng, 0, 3);
        rrh.activity = kind == 0 ? 1.0 : (kind == 1 ? 0.0 : uniform(rng, 0.05, 0.95));
        scenario.rrhs.push_back(std::move(rrh));
        scenario.assignment[scenario.rrhs.back().id] =
            scenario.vms[static_cast<std::size_t>(uniform_int(rng, 0, n_vms - 1))].id;
    }
    return scenario;
}

/// Single-VM scenario for the frequency/miss monotonicity suite.
inline Scenario random_single_vm_scenario(std::mt19937_64& rng, double f_ghz) {
    Scenario scenario;
    scenario.params = random_params(rng);
    scenario.topology = Topology::kConsolidated;
    scenario.duration_ttis = static_cast<std::uint64_t>(uniform_int(rng, 20, 80));
    scenario.seed = rng();
    scenario.deadline_us = uniform(rng, 400.0, 2500.0);
    scenario.vms.push_back(BbuVmSpec{"vm-1", uniform_int(rng, 1, 2), CpuFrequency(f_ghz)});
    const int n_rrhs = uniform_int(rng, 1, 4);
    const int prb_choices[] = {25, 50, 100};
    for (int r = 0; r < n_rrhs; ++r) {
        RrhSpec rrh{"rrh-" + std::to_string(r + 1),
                    PrbAllocation(prb_choices[uniform_int(rng, 0, 2)]),
                    McsIndex(uniform_int(rng, 0, 27))};
        rrh.activity = uniform_int(rng, 0, 1) == 0 ? 1.0 : uniform(rng, 0.2, 1.0);
        scenario.rrhs.push_back(std::move(rrh));
        scenario.assignment[scenario.rrhs.back().id] = "vm-1";
    }
    return scenario;
}

}  // namespace cranplan::testing
