#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cranplan/cost_models.hpp"

namespace cranplan {

/// One profiled subframe: processing time observed at a frequency and
/// radio-resource configuration. f must classify non-INVALID, t_sub > 0.
struct TimingRecord {
    double f_ghz;
    int prb;
    int mcs;
    double t_sub_us;
};

/// One utilization observation: downlink rate and measured CPU
/// percentage (raw readings, so 0..100).
struct UtilizationRecord {
    double phi_mbps;
    double cpu_pct;
};

enum class FitKind { kTiming, kCpuLine };

struct FitReport {
    FitKind kind = FitKind::kTiming;
    CostModelParams params;
    double residual_rms = 0.0;  // us for timing fits, % for the CPU line
    std::size_t n_records = 0;
    std::map<std::pair<int, int>, std::size_t> per_cell_counts;  // (prb, mcs) -> samples
    std::vector<std::string> condition_flags;
};

/// Calibrates alpha_prb and beta_mcs from timing records by linear
/// least squares on T = alpha_prb * (1/f) + beta_mcs + c. The constant
/// c is fixed to *fix_const (default 2.508 us). Passing nullopt fits c
/// jointly; that system is rank-deficient by one, so the smallest
/// observed MCS anchors the gauge with beta = 0 and c takes the shared
/// intercept.
///
/// Solved via Householder QR, not normal equations: the 1/f columns
/// are nearly collinear over the narrow 2.8-3.5 GHz range.
///
/// Fits whose tables violate monotonicity succeed with a
/// MonotonicityWarning flag; strict document loading still rejects them.
FitReport fit_timing(const std::vector<TimingRecord>& records,
                     std::optional<double> fix_const = kDefaultTimeConstUs);

/// Ordinary least squares for CPU[%] = slope * phi + intercept.
FitReport fit_cpu_line(const std::vector<UtilizationRecord>& records);

using CsvRecords = std::variant<std::vector<TimingRecord>, std::vector<UtilizationRecord>>;

/// Parses a measurement CSV, dispatching on the header:
///   f_ghz,prb,mcs,t_sub_us  -> TimingRecords
///   phi_mbps,cpu_pct        -> UtilizationRecords
/// Decimal point '.', no thousands separators. Throws UnknownHeader or
/// MalformedRow (with the 1-based input line).
CsvRecords ingest_csv(std::string_view text);

std::string timing_to_csv(const std::vector<TimingRecord>& records);
std::string utilization_to_csv(const std::vector<UtilizationRecord>& records);

/// Serializes the fitted parameters as a loadable parameter document
/// plus a fit_meta object (residual RMS, sample counts, flags). When
/// base is given, quantities the fit did not touch are copied from it
/// (e.g. the CPU line for a timing fit).
std::string fit_report_to_json(const FitReport& report,
                               const CostModelParams* base = nullptr);

}  // namespace cranplan
