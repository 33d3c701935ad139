#include "cranplan/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

namespace cranplan {

namespace {

constexpr std::uint64_t kTtiNs = 1'000'000;  // 1 ms

/// Uniform double in [0, 1) from the engine's raw 64-bit output; the
/// standard distributions are implementation-defined, this is not.
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Box-Muller on raw engine bits, for the same portability reason.
double gaussian_draw(std::mt19937_64& rng) {
    double u1 = unit_draw(rng);
    while (u1 <= 0.0) u1 = unit_draw(rng);
    const double u2 = unit_draw(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

double instance_load_pct(const CostModelParams& params, double phi_mbps) {
    return params.cpu_slope * phi_mbps + params.cpu_intercept;
}

}  // namespace

double offered_phi_mbps(const RrhSpec& rrh) {
    return max_dl_rate_mbps(rrh.prb, rrh.mcs) * rrh.activity;
}

double reported_phi_mbps(const RrhSpec& rrh, const LinkQualityTable& link_table) {
    double rate = max_dl_rate_mbps(rrh.prb, rrh.mcs);
    if (rrh.attenuation_db) {
        const auto cap = link_throughput_mbps(link_table, *rrh.attenuation_db, rrh.prb);
        rate = cap ? std::min(rate, *cap) : 0.0;  // dropped link carries nothing
    }
    return rate * rrh.activity;
}

void validate(const Scenario& scenario) {
    if (scenario.vms.empty()) throw InvalidScenario("scenario needs at least one VM");
    if (scenario.duration_ttis == 0) throw InvalidScenario("duration_ttis must be >= 1");
    if (!(scenario.deadline_us > 0.0) || !std::isfinite(scenario.deadline_us))
        throw InvalidScenario("deadline_us must be positive and finite");
    if (!scenario.params) throw InvalidScenario("scenario has no cost-model parameters");
    if (!std::isfinite(scenario.service_noise_std) || scenario.service_noise_std < 0.0)
        throw InvalidScenario("service_noise_std must be >= 0");

    std::set<std::string> vm_ids;
    for (const auto& vm : scenario.vms) {
        if (vm.id.empty()) throw InvalidScenario("VM id must not be empty");
        if (!vm_ids.insert(vm.id).second) throw InvalidScenario("duplicate VM id \"" + vm.id + "\"");
        if (vm.cores < 1) throw InvalidScenario("VM \"" + vm.id + "\" needs cores >= 1");
        if (vm.f.classification() == FreqClass::kInvalid)
            throw FrequencyBelowMinimum("VM \"" + vm.id + "\" runs at " + std::to_string(vm.f.ghz()) +
                                        " GHz, below the 2.5 GHz floor");
    }

    std::set<std::string> rrh_ids;
    for (const auto& rrh : scenario.rrhs) {
        if (rrh.id.empty()) throw InvalidScenario("RRH id must not be empty");
        if (!rrh_ids.insert(rrh.id).second)
            throw InvalidScenario("duplicate RRH id \"" + rrh.id + "\"");
        if (!(rrh.activity >= 0.0 && rrh.activity <= 1.0))
            throw InvalidScenario("RRH \"" + rrh.id + "\" activity must be in [0, 1]");
        if (rrh.attenuation_db && !std::isfinite(*rrh.attenuation_db))
            throw InvalidScenario("RRH \"" + rrh.id + "\" attenuation must be finite");
    }

    for (const auto& [rrh_id, vm_id] : scenario.assignment) {
        if (!rrh_ids.contains(rrh_id))
            throw InvalidScenario("assignment references unknown RRH \"" + rrh_id + "\"");
        if (!vm_ids.contains(vm_id))
            throw InvalidScenario("assignment references unknown VM \"" + vm_id + "\"");
    }
    for (const auto& rrh : scenario.rrhs) {
        if (!scenario.assignment.contains(rrh.id))
            throw InvalidScenario("RRH \"" + rrh.id + "\" has no VM assignment");
    }

    if (scenario.topology == Topology::kPerRrh) {
        if (scenario.rrhs.size() != scenario.vms.size())
            throw InvalidScenario("per-RRH topology needs exactly one VM per RRH (" +
                                  std::to_string(scenario.rrhs.size()) + " RRHs, " +
                                  std::to_string(scenario.vms.size()) + " VMs)");
        std::set<std::string> used;
        for (const auto& [rrh_id, vm_id] : scenario.assignment) {
            if (!used.insert(vm_id).second)
                throw InvalidScenario("per-RRH topology maps more than one RRH to VM \"" + vm_id +
                                      "\"");
        }
    }
}

SimResult run_traced(const Scenario& scenario) {
    validate(scenario);
    const CostModelParams& params = *scenario.params;

    std::unordered_map<std::string, std::uint32_t> vm_index;
    for (std::uint32_t v = 0; v < scenario.vms.size(); ++v) vm_index[scenario.vms[v].id] = v;

    // Precompute per-RRH routing and deterministic service times.
    std::vector<std::uint32_t> rrh_vm(scenario.rrhs.size());
    std::vector<double> rrh_service_us(scenario.rrhs.size());
    for (std::uint32_t r = 0; r < scenario.rrhs.size(); ++r) {
        rrh_vm[r] = vm_index.at(scenario.assignment.at(scenario.rrhs[r].id));
        rrh_service_us[r] = subframe_time_us(params, scenario.vms[rrh_vm[r]].f,
                                             scenario.rrhs[r].prb, scenario.rrhs[r].mcs);
    }

    const std::uint64_t horizon_ns = scenario.duration_ttis * kTtiNs;
    const std::uint64_t deadline_ns =
        static_cast<std::uint64_t>(std::llround(scenario.deadline_us * 1000.0));

    // Arrivals: one Bernoulli draw per RRH per TTI, in a fixed order so
    // the job stream is a pure function of the seed. activity 0 and 1
    // skip the draw. With jitter enabled, each offered job consumes one
    // further Gaussian draw, still in enqueue order.
    std::mt19937_64 rng(scenario.seed);
    SimResult result;
    std::vector<std::uint64_t> job_service_ns;
    std::vector<std::vector<std::uint32_t>> vm_jobs(scenario.vms.size());
    for (std::uint64_t tti = 0; tti < scenario.duration_ttis; ++tti) {
        const std::uint64_t arrival = tti * kTtiNs;
        for (std::uint32_t r = 0; r < scenario.rrhs.size(); ++r) {
            const double activity = scenario.rrhs[r].activity;
            bool offered;
            if (activity >= 1.0) {
                offered = true;
            } else if (activity <= 0.0) {
                offered = false;
            } else {
                offered = unit_draw(rng) < activity;
            }
            if (!offered) continue;
            double service_us = rrh_service_us[r];
            if (scenario.service_noise_std > 0.0) {
                const double factor =
                    std::max(0.0, 1.0 + scenario.service_noise_std * gaussian_draw(rng));
                service_us *= factor;
            }
            vm_jobs[rrh_vm[r]].push_back(static_cast<std::uint32_t>(result.jobs.size()));
            job_service_ns.push_back(
                static_cast<std::uint64_t>(std::llround(service_us * 1000.0)));
            result.jobs.push_back(JobRecord{r, rrh_vm[r], tti, arrival, 0, 0, false});
        }
    }

    // Per-VM FIFO multi-server fold: each job starts when it has both
    // arrived and a server is free.
    for (std::uint32_t v = 0; v < scenario.vms.size(); ++v) {
        std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> free_at(
            std::greater<>{}, std::vector<std::uint64_t>(scenario.vms[v].cores, 0));
        for (const std::uint32_t j : vm_jobs[v]) {
            JobRecord& job = result.jobs[j];
            const std::uint64_t server = free_at.top();
            free_at.pop();
            job.start_ns = std::max(job.arrival_ns, server);
            job.completion_ns = job.start_ns + job_service_ns[j];
            job.missed = job.completion_ns > job.arrival_ns + deadline_ns;
            free_at.push(job.completion_ns);
        }
    }

    // Aggregate.
    SimMetrics& metrics = result.metrics;
    metrics.seed = scenario.seed;
    metrics.per_vm.reserve(scenario.vms.size());
    for (const auto& vm : scenario.vms) {
        VmMetrics m;
        m.id = vm.id;
        m.cores = vm.cores;
        m.f_ghz = vm.f.ghz();
        metrics.per_vm.push_back(std::move(m));
    }
    metrics.per_rrh.reserve(scenario.rrhs.size());
    for (const auto& rrh : scenario.rrhs) {
        RrhMetrics m;
        m.id = rrh.id;
        m.phi_mbps = reported_phi_mbps(rrh, scenario.link_table);
        metrics.per_rrh.push_back(std::move(m));
    }
    for (const JobRecord& job : result.jobs) {
        VmMetrics& vm = metrics.per_vm[job.vm_index];
        RrhMetrics& rrh = metrics.per_rrh[job.rrh_index];
        ++rrh.offered_subframes;
        if (job.missed) {
            ++rrh.missed;
            ++vm.deadline_misses;
        }
        if (job.completion_ns <= horizon_ns) {
            ++vm.subframes_processed;
            vm.busy_ns += job.completion_ns - job.start_ns;
        }
    }
    for (std::uint32_t v = 0; v < scenario.vms.size(); ++v) {
        VmMetrics& vm = metrics.per_vm[v];
        vm.accounted_util = static_cast<double>(vm.busy_ns) /
                            (static_cast<double>(vm.cores) * static_cast<double>(horizon_ns));
        double predicted = 0.0;
        for (std::uint32_t r = 0; r < scenario.rrhs.size(); ++r) {
            if (rrh_vm[r] != v) continue;
            predicted += instance_load_pct(params, metrics.per_rrh[r].phi_mbps);
        }
        vm.predicted_cpu_pct = predicted;
        vm.overload = predicted > 100.0 * vm.cores / kReferenceVmCores;
    }
    return result;
}

SimMetrics run(const Scenario& scenario) { return run_traced(scenario).metrics; }

ProvisionPlan provision_per_rrh(const std::vector<RrhSpec>& rrhs, const BbuVmSpec& vm_template) {
    ProvisionPlan plan;
    plan.topology = Topology::kPerRrh;
    plan.vms.reserve(rrhs.size());
    for (const auto& rrh : rrhs) {
        BbuVmSpec vm = vm_template;
        vm.id = vm_template.id + "-" + rrh.id;
        plan.assignment[rrh.id] = vm.id;
        plan.vms.push_back(std::move(vm));
    }
    return plan;
}

ProvisionPlan provision_consolidated(const std::vector<RrhSpec>& rrhs,
                                     const BbuVmSpec& vm_template, double cpu_threshold_pct,
                                     const CostModelParams& params) {
    if (!(cpu_threshold_pct > 0.0 && cpu_threshold_pct <= 100.0))
        throw InvalidScenario("cpu_threshold_pct must be in (0, 100]");
    if (vm_template.cores < 1) throw InvalidScenario("VM template needs cores >= 1");

    const double capacity =
        cpu_threshold_pct * vm_template.cores / static_cast<double>(kReferenceVmCores);

    struct Item {
        std::size_t rrh_index;
        double load_pct;
    };
    std::vector<Item> items;
    items.reserve(rrhs.size());
    for (std::size_t i = 0; i < rrhs.size(); ++i) {
        const double load = instance_load_pct(params, offered_phi_mbps(rrhs[i]));
        if (load > capacity)
            throw InfeasibleItem("RRH \"" + rrhs[i].id + "\" predicts " + std::to_string(load) +
                                 "% load, above the per-VM capacity of " + std::to_string(capacity) +
                                 "%");
        items.push_back({i, load});
    }
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) { return a.load_pct > b.load_pct; });

    ProvisionPlan plan;
    plan.topology = Topology::kConsolidated;
    for (const Item& item : items) {
        std::size_t bin = 0;
        for (; bin < plan.vms.size(); ++bin) {
            if (plan.predicted_vm_load_pct[bin] + item.load_pct <= capacity) break;
        }
        if (bin == plan.vms.size()) {
            BbuVmSpec vm = vm_template;
            vm.id = vm_template.id + "-" + std::to_string(plan.vms.size() + 1);
            plan.vms.push_back(std::move(vm));
            plan.predicted_vm_load_pct.push_back(0.0);
        }
        plan.predicted_vm_load_pct[bin] += item.load_pct;
        plan.assignment[rrhs[item.rrh_index].id] = plan.vms[bin].id;
    }
    return plan;
}

CpuFrequency min_frequency_for_deadline(const CostModelParams& params, PrbAllocation prb,
                                        McsIndex mcs, double budget_us) {
    const auto alpha = params.alpha_prb.find(prb.value());
    if (alpha == params.alpha_prb.end())
        throw UnknownParameter("no alpha_prb entry for PRB " + std::to_string(prb.value()));
    const auto beta = params.beta_mcs.find(mcs.value());
    if (beta == params.beta_mcs.end())
        throw UnknownParameter("no beta_mcs entry for MCS " + std::to_string(mcs.value()));
    if (!std::isfinite(budget_us)) throw InfeasibleBudget("budget must be finite");

    const double floor_us = beta->second + params.t_const_us;
    if (budget_us <= floor_us)
        throw InfeasibleBudget("budget " + std::to_string(budget_us) +
                               " us is at or below the frequency-independent floor of " +
                               std::to_string(floor_us) + " us");
    const double f = alpha->second / (budget_us - floor_us);
    return CpuFrequency(std::max(f, CpuFrequency::kMinGhz));
}

}  // namespace cranplan
