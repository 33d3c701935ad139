#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cranplan/errors.hpp"
#include "cranplan/lte.hpp"

namespace cranplan {

enum class FreqClass {
    kInvalid,       // < 2.5 GHz: baseband stack loses synchronization
    kMarginal,      // [2.5, 2.8): runs, outside the profiled range
    kValidated,     // [2.8, 3.5]: the profiled range
    kExtrapolated,  // > 3.5 GHz
};

std::string_view name(FreqClass c) noexcept;

/// CPU clock frequency in GHz, strictly positive. Frequencies below
/// 2.5 GHz are constructible (so they can be reported and rejected
/// downstream) but classify as kInvalid.
class CpuFrequency {
public:
    static constexpr double kMinGhz = 2.5;
    static constexpr double kValidatedLowGhz = 2.8;
    static constexpr double kValidatedHighGhz = 3.5;

    explicit CpuFrequency(double ghz);

    double ghz() const noexcept { return ghz_; }
    FreqClass classification() const noexcept;
    auto operator<=>(const CpuFrequency&) const = default;

private:
    double ghz_;
};

inline constexpr double kDefaultTimeConstUs = 2.508;
inline constexpr double kDefaultCpuSlope = 0.6237;      // % per Mbps
inline constexpr double kDefaultCpuIntercept = 21.3544; // %

/// Parameters of the two empirical models:
///   T_sub [us]  = alpha_prb / f + beta_mcs + t_const   (f in GHz)
///   CPU  [%]    = cpu_slope * phi + cpu_intercept      (phi in Mbps)
/// alpha entries are in us*GHz; the tables have no built-in values and
/// must come from a parameter document or a fit.
struct CostModelParams {
    std::map<int, double> alpha_prb;  // PRB count -> alpha [us*GHz]
    std::map<int, double> beta_mcs;   // MCS index -> beta [us]
    double t_const_us = kDefaultTimeConstUs;
    double cpu_slope = kDefaultCpuSlope;
    double cpu_intercept = kDefaultCpuIntercept;
};

/// Throws SchemaViolation / MonotonicityViolation when the invariants
/// do not hold: alpha > 0, beta >= 0, t_const >= 0, cpu_slope > 0, and
/// both tables non-decreasing.
void validate(const CostModelParams& params);

struct LinkQualityRow {
    double atten_db;
    int prb;
    double mbps;
};

/// Measured attenuation -> achievable downlink throughput, per PRB.
/// Lookups interpolate linearly in dB; the connection drops above
/// drop_threshold_db.
class LinkQualityTable {
public:
    static constexpr double kDefaultDropThresholdDb = 80.0;

    LinkQualityTable(std::vector<LinkQualityRow> rows,
                     double drop_threshold_db = kDefaultDropThresholdDb);

    /// The measured two-point table: 5/10/20 Mbps at 60 dB and
    /// 0.98/1.64/3.40 Mbps at 80 dB for PRB 25/50/100, drop above 80 dB.
    static const LinkQualityTable& reference();

    const std::vector<LinkQualityRow>& rows() const noexcept { return rows_; }
    double drop_threshold_db() const noexcept { return drop_threshold_db_; }

private:
    std::vector<LinkQualityRow> rows_;  // sorted by (prb, atten_db)
    double drop_threshold_db_;
};

/// Subframe processing time in microseconds:
/// alpha_prb / f + beta_mcs + t_const.
/// Throws FrequencyBelowMinimum below 2.5 GHz and UnknownParameter when
/// the PRB or MCS has no table entry.
double subframe_time_us(const CostModelParams& params, CpuFrequency f,
                        PrbAllocation prb, McsIndex mcs);

struct CpuPrediction {
    double percent;
    bool overload;  // percent > 100: extrapolated past one reference VM
};

/// CPU utilization percentage on the 4-core reference platform for a
/// downlink rate phi in Mbps. Values above 100 are returned as-is with
/// the overload flag set. Throws NegativeThroughput for phi < 0.
CpuPrediction cpu_percent(const CostModelParams& params, double phi_mbps);

/// Achievable downlink rate at the given attenuation, or nullopt when
/// the connection would drop (attenuation above the table threshold).
/// Below the smallest tabulated attenuation the value clamps to that
/// endpoint. Throws UnknownPrb when the table has no rows for the PRB.
std::optional<double> link_throughput_mbps(const LinkQualityTable& table,
                                           double attenuation_db,
                                           PrbAllocation prb);

struct ModelDocument {
    CostModelParams params;
    LinkQualityTable link_table = LinkQualityTable::reference();
};

/// Parses and validates a parameter document (JSON). Required keys:
/// alpha_prb, beta_mcs (maps of decimal-string keys to numbers).
/// Optional: t_const_us, cpu_slope, cpu_intercept, link_table,
/// drop_threshold_db, fit_meta. Unknown keys are rejected.
CostModelParams load_params(std::string_view json_text);

/// Same document, also materializing the link table (reference table
/// when the document has none).
ModelDocument load_model_document(std::string_view json_text);

/// Serializes params (and optionally a link table) back to the
/// document format. Round-trips through load_params.
std::string params_to_json(const CostModelParams& params,
                           const LinkQualityTable* link_table = nullptr);

}  // namespace cranplan
