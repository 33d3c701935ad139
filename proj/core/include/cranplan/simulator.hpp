#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cranplan/cost_models.hpp"
#include "cranplan/lte.hpp"

namespace cranplan {

/// A remote radio head as a traffic source: one subframe per TTI with
/// probability `activity`. attenuation_db, when set, caps the reported
/// throughput via the link-quality table.
struct RrhSpec {
    std::string id;
    PrbAllocation prb;
    McsIndex mcs;
    double activity = 1.0;
    std::optional<double> attenuation_db;
};

/// A baseband VM: `cores` parallel servers at frequency f.
struct BbuVmSpec {
    std::string id;
    int cores = 1;
    CpuFrequency f;
};

enum class Topology { kPerRrh, kConsolidated };

inline constexpr double kDefaultDeadlineUs = 2000.0;
inline constexpr int kReferenceVmCores = 4;  // platform the CPU-line percentages refer to

struct Scenario {
    std::vector<RrhSpec> rrhs;
    std::vector<BbuVmSpec> vms;
    Topology topology = Topology::kPerRrh;
    std::map<std::string, std::string> assignment;  // RRH id -> VM id
    double deadline_us = kDefaultDeadlineUs;
    std::uint64_t duration_ttis = 0;
    std::uint64_t seed = 0;
    // Seeded multiplicative jitter on per-job service times: each job's
    // service is scaled by max(0, 1 + std * z), z ~ N(0, 1). Off (0) by
    // default; the models are mean-behavior models.
    double service_noise_std = 0.0;
    std::optional<CostModelParams> params;
    LinkQualityTable link_table = LinkQualityTable::reference();
};

struct VmMetrics {
    std::string id;
    int cores = 0;
    double f_ghz = 0.0;
    // Work completed inside the simulated window. Jobs still queued or
    // in service at the horizon are excluded here (but still tracked
    // for deadline misses), which keeps accounted_util in [0, 1] and
    // exactly equal to subframes_processed * service / capacity.
    std::uint64_t busy_ns = 0;
    std::uint64_t subframes_processed = 0;
    std::uint64_t deadline_misses = 0;
    double accounted_util = 0.0;
    double predicted_cpu_pct = 0.0;  // CPU-line prediction, 4-core-reference %
    bool overload = false;           // predicted > 100% * cores/4
};

struct RrhMetrics {
    std::string id;
    std::uint64_t offered_subframes = 0;
    std::uint64_t missed = 0;
    double phi_mbps = 0.0;  // reported throughput, capped by the link table
};

struct SimMetrics {
    std::vector<VmMetrics> per_vm;
    std::vector<RrhMetrics> per_rrh;
    std::uint64_t seed = 0;
};

/// One subframe job, for oracle comparisons and audits.
struct JobRecord {
    std::uint32_t rrh_index = 0;
    std::uint32_t vm_index = 0;
    std::uint64_t tti = 0;
    std::uint64_t arrival_ns = 0;
    std::uint64_t start_ns = 0;
    std::uint64_t completion_ns = 0;
    bool missed = false;
};

struct SimResult {
    SimMetrics metrics;
    std::vector<JobRecord> jobs;  // in enqueue order
};

/// Throws InvalidScenario / FrequencyBelowMinimum when the scenario
/// invariants do not hold: at least one VM, per-RRH topology a
/// bijection, consolidated topology a total assignment, activities in
/// [0, 1], positive deadline and duration, all VM frequencies >= 2.5.
void validate(const Scenario& scenario);

/// Deterministic discrete-event simulation. Every active RRH enqueues
/// one subframe at TTI start (1 ms grid); each VM is a work-conserving
/// FIFO queue with `cores` servers; service times come from the
/// subframe processing-time model, rounded to integer nanoseconds.
/// Jobs enqueued within the window run to completion even past the
/// horizon (no abandonment), so every offered subframe has a definite
/// deadline outcome. Identical scenarios (seed included) produce
/// identical metrics.
SimMetrics run(const Scenario& scenario);
SimResult run_traced(const Scenario& scenario);

struct ProvisionPlan {
    Topology topology = Topology::kPerRrh;
    std::vector<BbuVmSpec> vms;
    std::map<std::string, std::string> assignment;
    std::vector<double> predicted_vm_load_pct;  // CPU-line load per VM, 4-core-reference %
};

/// One VM clone per RRH, bijective assignment.
ProvisionPlan provision_per_rrh(const std::vector<RrhSpec>& rrhs, const BbuVmSpec& vm_template);

/// First-fit-decreasing packing of RRHs into VM clones. The predicted
/// load of a VM hosting k instances is sum_i slope*phi_i + k*intercept
/// (each hosted baseband stack idles at the intercept), with
/// phi_i = max_dl_rate * activity. A VM's capacity is
/// cpu_threshold_pct * cores / 4, relative to the 4-core reference
/// platform. Throws InfeasibleItem when a single RRH cannot fit.
ProvisionPlan provision_consolidated(const std::vector<RrhSpec>& rrhs,
                                     const BbuVmSpec& vm_template, double cpu_threshold_pct,
                                     const CostModelParams& params);

/// Smallest frequency meeting a per-subframe budget:
/// f = alpha / (budget - beta - t_const), clamped up to the 2.5 GHz
/// floor. The returned value classifies EXTRAPOLATED above 3.5 GHz.
/// Throws InfeasibleBudget when no finite frequency suffices.
CpuFrequency min_frequency_for_deadline(const CostModelParams& params, PrbAllocation prb,
                                        McsIndex mcs, double budget_us);

/// Expected offered throughput of an RRH: max_dl_rate * activity.
double offered_phi_mbps(const RrhSpec& rrh);

/// Offered throughput capped by the link table when the RRH has an
/// attenuation (0 when the link would drop).
double reported_phi_mbps(const RrhSpec& rrh, const LinkQualityTable& link_table);

}  // namespace cranplan
