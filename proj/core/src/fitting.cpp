#include "cranplan/fitting.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "json_detail.hpp"

namespace cranplan {

namespace {

void check_timing_record(const TimingRecord& r, std::size_t index) {
    const std::string where = "timing record " + std::to_string(index) + ": ";
    if (!std::isfinite(r.f_ghz) || r.f_ghz < CpuFrequency::kMinGhz)
        throw SchemaViolation(where + "f_ghz must be >= 2.5 (frequencies below the floor are not usable measurements)");
    if (r.prb < 1 || r.prb > 100)
        throw SchemaViolation(where + "prb must be in [1, 100]");
    if (r.mcs < McsIndex::kMin || r.mcs > McsIndex::kMax)
        throw SchemaViolation(where + "mcs must be in [0, 27]");
    if (!std::isfinite(r.t_sub_us) || r.t_sub_us <= 0.0)
        throw SchemaViolation(where + "t_sub_us must be > 0");
}

void check_utilization_record(const UtilizationRecord& r, std::size_t index) {
    const std::string where = "utilization record " + std::to_string(index) + ": ";
    if (!std::isfinite(r.phi_mbps) || r.phi_mbps < 0.0)
        throw SchemaViolation(where + "phi_mbps must be >= 0");
    if (!std::isfinite(r.cpu_pct) || r.cpu_pct < 0.0 || r.cpu_pct > 100.0)
        throw SchemaViolation(where + "cpu_pct must be in [0, 100]");
}

void append_table_warnings(const std::map<int, double>& table, std::string_view label,
                           bool require_positive, std::vector<std::string>& flags) {
    const double* prev = nullptr;
    for (const auto& [key, value] : table) {
        if (prev && value < *prev)
            flags.push_back("MonotonicityWarning: " + std::string(label) + " decreases at " +
                            std::to_string(key));
        if (require_positive && value <= 0.0)
            flags.push_back("NonPositiveValue: " + std::string(label) + "[" + std::to_string(key) +
                            "] = " + std::to_string(value));
        else if (!require_positive && value < 0.0)
            flags.push_back("NegativeValue: " + std::string(label) + "[" + std::to_string(key) +
                            "] = " + std::to_string(value));
        prev = &value;
    }
}

double residual_rms_of(const Eigen::MatrixXd& design, const Eigen::VectorXd& rhs,
                       const Eigen::VectorXd& solution) {
    const Eigen::VectorXd residuals = design * solution - rhs;
    return std::sqrt(residuals.squaredNorm() / static_cast<double>(rhs.size()));
}

}  // namespace

FitReport fit_timing(const std::vector<TimingRecord>& records, std::optional<double> fix_const) {
    if (records.empty()) throw InsufficientData("no timing records");
    for (std::size_t i = 0; i < records.size(); ++i) check_timing_record(records[i], i);
    if (fix_const && (!std::isfinite(*fix_const) || *fix_const < 0.0))
        throw SchemaViolation("fixed constant must be >= 0");

    std::map<std::pair<int, int>, std::size_t> cell_counts;
    std::map<std::pair<int, int>, std::set<double>> cell_freqs;
    std::set<int> prbs, mcss;
    for (const auto& r : records) {
        const auto cell = std::pair(r.prb, r.mcs);
        ++cell_counts[cell];
        cell_freqs[cell].insert(r.f_ghz);
        prbs.insert(r.prb);
        mcss.insert(r.mcs);
    }
    for (const auto& [cell, freqs] : cell_freqs) {
        if (freqs.size() < 2)
            throw Unidentifiable("cell (PRB " + std::to_string(cell.first) + ", MCS " +
                                 std::to_string(cell.second) +
                                 ") was observed at a single frequency; slope and intercept are "
                                 "not separable");
    }

    const bool fit_const = !fix_const.has_value();
    const int gauge_mcs = *mcss.begin();  // beta anchored to 0 when fitting the constant

    std::map<int, int> prb_col, mcs_col;
    int col = 0;
    for (int prb : prbs) prb_col[prb] = col++;
    for (int mcs : mcss) {
        if (fit_const && mcs == gauge_mcs) continue;
        mcs_col[mcs] = col++;
    }
    const int const_col = fit_const ? col++ : -1;
    const int n_cols = col;
    const int n_rows = static_cast<int>(records.size());
    if (n_rows < n_cols)
        throw InsufficientData("need at least " + std::to_string(n_cols) + " records for " +
                               std::to_string(n_cols) + " free parameters, got " +
                               std::to_string(n_rows));

    Eigen::MatrixXd design = Eigen::MatrixXd::Zero(n_rows, n_cols);
    Eigen::VectorXd rhs(n_rows);
    for (int i = 0; i < n_rows; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        design(i, prb_col.at(r.prb)) = 1.0 / r.f_ghz;
        if (const auto it = mcs_col.find(r.mcs); it != mcs_col.end()) design(i, it->second) = 1.0;
        if (fit_const) design(i, const_col) = 1.0;
        rhs(i) = fit_const ? r.t_sub_us : r.t_sub_us - *fix_const;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < n_cols)
        throw Unidentifiable("design matrix is rank deficient (rank " +
                             std::to_string(qr.rank()) + " of " + std::to_string(n_cols) + ")");
    const Eigen::VectorXd solution = qr.solve(rhs);

    FitReport report;
    report.kind = FitKind::kTiming;
    report.n_records = records.size();
    report.per_cell_counts = std::move(cell_counts);
    for (int prb : prbs) report.params.alpha_prb[prb] = solution(prb_col.at(prb));
    for (int mcs : mcss) {
        const auto it = mcs_col.find(mcs);
        report.params.beta_mcs[mcs] = it == mcs_col.end() ? 0.0 : solution(it->second);
    }
    report.params.t_const_us = fit_const ? solution(const_col) : *fix_const;
    report.residual_rms = residual_rms_of(design, rhs, solution);

    if (fit_const)
        report.condition_flags.push_back("FittedConstGauge: beta anchored to 0 at MCS " +
                                         std::to_string(gauge_mcs));
    append_table_warnings(report.params.alpha_prb, "alpha_prb", /*require_positive=*/true,
                          report.condition_flags);
    append_table_warnings(report.params.beta_mcs, "beta_mcs", /*require_positive=*/false,
                          report.condition_flags);
    return report;
}

FitReport fit_cpu_line(const std::vector<UtilizationRecord>& records) {
    if (records.size() < 2)
        throw InsufficientData("need at least 2 utilization records, got " +
                               std::to_string(records.size()));
    for (std::size_t i = 0; i < records.size(); ++i) check_utilization_record(records[i], i);
    const double first_phi = records.front().phi_mbps;
    const bool degenerate = std::all_of(records.begin(), records.end(), [&](const auto& r) {
        return r.phi_mbps == first_phi;
    });
    if (degenerate) throw DegenerateX("all phi values are equal; a line cannot be fitted");

    const int n = static_cast<int>(records.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        design(i, 0) = records[static_cast<std::size_t>(i)].phi_mbps;
        design(i, 1) = 1.0;
        rhs(i) = records[static_cast<std::size_t>(i)].cpu_pct;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    const Eigen::VectorXd solution = qr.solve(rhs);

    FitReport report;
    report.kind = FitKind::kCpuLine;
    report.n_records = records.size();
    report.params.cpu_slope = solution(0);
    report.params.cpu_intercept = solution(1);
    report.residual_rms = residual_rms_of(design, rhs, solution);
    if (report.params.cpu_slope <= 0.0)
        report.condition_flags.push_back("NonPositiveSlope: fitted cpu_slope = " +
                                         std::to_string(report.params.cpu_slope));
    return report;
}

namespace {

constexpr std::string_view kTimingHeader = "f_ghz,prb,mcs,t_sub_us";
constexpr std::string_view kUtilizationHeader = "phi_mbps,cpu_pct";

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

double parse_double_field(std::string_view field, std::size_t line, std::string_view name) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw MalformedRow(line, std::string(name) + " is not a number: \"" + std::string(field) + "\"");
    return value;
}

int parse_int_field(std::string_view field, std::size_t line, std::string_view name) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw MalformedRow(line, std::string(name) + " is not an integer: \"" + std::string(field) + "\"");
    return value;
}

std::vector<std::pair<std::size_t, std::string_view>> data_lines(std::string_view text) {
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t start = 0, lineno = 1;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        const std::string_view raw = nl == std::string_view::npos
                                         ? text.substr(start)
                                         : text.substr(start, nl - start);
        lines.emplace_back(lineno, raw);
        if (nl == std::string_view::npos) break;
        start = nl + 1;
        ++lineno;
    }
    while (!lines.empty() && trim(lines.back().second).empty()) lines.pop_back();
    return lines;
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

}  // namespace

CsvRecords ingest_csv(std::string_view text) {
    const auto lines = data_lines(text);
    if (lines.empty()) throw UnknownHeader("empty CSV input");
    const std::string_view header = trim(lines.front().second);

    if (header == kTimingHeader) {
        std::vector<TimingRecord> records;
        records.reserve(lines.size() - 1);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto [lineno, raw] = lines[i];
            if (trim(raw).empty()) throw MalformedRow(lineno, "blank line inside data");
            const auto fields = split_fields(raw);
            if (fields.size() != 4)
                throw MalformedRow(lineno, "expected 4 fields, got " + std::to_string(fields.size()));
            TimingRecord r{parse_double_field(fields[0], lineno, "f_ghz"),
                           parse_int_field(fields[1], lineno, "prb"),
                           parse_int_field(fields[2], lineno, "mcs"),
                           parse_double_field(fields[3], lineno, "t_sub_us")};
            try {
                check_timing_record(r, records.size());
            } catch (const SchemaViolation& e) {
                throw MalformedRow(lineno, e.what());
            }
            records.push_back(r);
        }
        return records;
    }
    if (header == kUtilizationHeader) {
        std::vector<UtilizationRecord> records;
        records.reserve(lines.size() - 1);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const auto [lineno, raw] = lines[i];
            if (trim(raw).empty()) throw MalformedRow(lineno, "blank line inside data");
            const auto fields = split_fields(raw);
            if (fields.size() != 2)
                throw MalformedRow(lineno, "expected 2 fields, got " + std::to_string(fields.size()));
            UtilizationRecord r{parse_double_field(fields[0], lineno, "phi_mbps"),
                                parse_double_field(fields[1], lineno, "cpu_pct")};
            try {
                check_utilization_record(r, records.size());
            } catch (const SchemaViolation& e) {
                throw MalformedRow(lineno, e.what());
            }
            records.push_back(r);
        }
        return records;
    }
    throw UnknownHeader("unrecognized CSV header \"" + std::string(header) + "\" (expected \"" +
                        std::string(kTimingHeader) + "\" or \"" + std::string(kUtilizationHeader) +
                        "\")");
}

std::string timing_to_csv(const std::vector<TimingRecord>& records) {
    std::string out(kTimingHeader);
    out += '\n';
    for (const auto& r : records) {
        out += format_double(r.f_ghz);
        out += ',';
        out += std::to_string(r.prb);
        out += ',';
        out += std::to_string(r.mcs);
        out += ',';
        out += format_double(r.t_sub_us);
        out += '\n';
    }
    return out;
}

std::string utilization_to_csv(const std::vector<UtilizationRecord>& records) {
    std::string out(kUtilizationHeader);
    out += '\n';
    for (const auto& r : records) {
        out += format_double(r.phi_mbps);
        out += ',';
        out += format_double(r.cpu_pct);
        out += '\n';
    }
    return out;
}

std::string fit_report_to_json(const FitReport& report, const CostModelParams* base) {
    CostModelParams merged = base ? *base : report.params;
    if (report.kind == FitKind::kTiming) {
        merged.alpha_prb = report.params.alpha_prb;
        merged.beta_mcs = report.params.beta_mcs;
        merged.t_const_us = report.params.t_const_us;
    } else {
        merged.cpu_slope = report.params.cpu_slope;
        merged.cpu_intercept = report.params.cpu_intercept;
    }

    detail::json doc = detail::params_to_json_obj(merged);
    detail::json cells = detail::json::array();
    for (const auto& [cell, count] : report.per_cell_counts)
        cells.push_back(detail::json{{"prb", cell.first}, {"mcs", cell.second}, {"count", count}});
    doc["fit_meta"] = detail::json{
        {"kind", report.kind == FitKind::kTiming ? "timing" : "cpu_line"},
        {"residual_rms", report.residual_rms},
        {"n_records", report.n_records},
        {"per_cell_counts", std::move(cells)},
        {"flags", report.condition_flags},
    };
    return doc.dump(2) + "\n";
}

}  // namespace cranplan
