#include "cranplan/cost_models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "json_detail.hpp"

namespace cranplan {

std::string_view name(FreqClass c) noexcept {
    switch (c) {
        case FreqClass::kInvalid: return "INVALID";
        case FreqClass::kMarginal: return "MARGINAL";
        case FreqClass::kValidated: return "VALIDATED";
        case FreqClass::kExtrapolated: return "EXTRAPOLATED";
    }
    return "?";
}

CpuFrequency::CpuFrequency(double ghz) : ghz_(ghz) {
    if (!(ghz > 0.0) || !std::isfinite(ghz))
        throw InvalidScenario("CPU frequency must be a positive finite GHz value");
}

FreqClass CpuFrequency::classification() const noexcept {
    if (ghz_ < kMinGhz) return FreqClass::kInvalid;
    if (ghz_ < kValidatedLowGhz) return FreqClass::kMarginal;
    if (ghz_ <= kValidatedHighGhz) return FreqClass::kValidated;
    return FreqClass::kExtrapolated;
}

void validate(const CostModelParams& params) {
    double prev = 0.0;
    bool first = true;
    for (const auto& [prb, alpha] : params.alpha_prb) {
        if (prb < 1 || prb > 100)
            throw SchemaViolation("alpha_prb key out of range [1, 100]: " + std::to_string(prb));
        if (!std::isfinite(alpha) || alpha <= 0.0)
            throw SchemaViolation("alpha_prb[" + std::to_string(prb) + "] must be > 0");
        if (!first && alpha < prev)
            throw MonotonicityViolation("alpha_prb must be non-decreasing in PRB (violated at PRB " +
                                        std::to_string(prb) + ")");
        prev = alpha;
        first = false;
    }
    prev = 0.0;
    first = true;
    for (const auto& [mcs, beta] : params.beta_mcs) {
        if (mcs < McsIndex::kMin || mcs > McsIndex::kMax)
            throw SchemaViolation("beta_mcs key out of range [0, 27]: " + std::to_string(mcs));
        if (!std::isfinite(beta) || beta < 0.0)
            throw SchemaViolation("beta_mcs[" + std::to_string(mcs) + "] must be >= 0");
        if (!first && beta < prev)
            throw MonotonicityViolation("beta_mcs must be non-decreasing in MCS (violated at MCS " +
                                        std::to_string(mcs) + ")");
        prev = beta;
        first = false;
    }
    if (!std::isfinite(params.t_const_us) || params.t_const_us < 0.0)
        throw SchemaViolation("t_const_us must be >= 0");
    if (!std::isfinite(params.cpu_slope) || params.cpu_slope <= 0.0)
        throw SchemaViolation("cpu_slope must be > 0");
    if (!std::isfinite(params.cpu_intercept))
        throw SchemaViolation("cpu_intercept must be finite");
}

LinkQualityTable::LinkQualityTable(std::vector<LinkQualityRow> rows, double drop_threshold_db)
    : rows_(std::move(rows)), drop_threshold_db_(drop_threshold_db) {
    if (!std::isfinite(drop_threshold_db_))
        throw SchemaViolation("drop_threshold_db must be finite");
    std::sort(rows_.begin(), rows_.end(), [](const LinkQualityRow& a, const LinkQualityRow& b) {
        return std::pair(a.prb, a.atten_db) < std::pair(b.prb, b.atten_db);
    });
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& row = rows_[i];
        if (row.prb < 1 || row.prb > 100)
            throw SchemaViolation("link_table PRB out of range [1, 100]: " + std::to_string(row.prb));
        if (!std::isfinite(row.atten_db) || !std::isfinite(row.mbps))
            throw SchemaViolation("link_table entries must be finite");
        if (row.atten_db <= drop_threshold_db_ && row.mbps <= 0.0)
            throw SchemaViolation("link_table throughput must be positive at or below the drop threshold");
        if (i > 0 && rows_[i - 1].prb == row.prb) {
            if (rows_[i - 1].atten_db == row.atten_db)
                throw SchemaViolation("duplicate link_table attenuation point for PRB " +
                                      std::to_string(row.prb));
            if (row.mbps > rows_[i - 1].mbps)
                throw SchemaViolation("link_table throughput must be non-increasing in attenuation "
                                      "for PRB " + std::to_string(row.prb));
        }
    }
    // Interpolation needs at least two points per PRB.
    for (std::size_t i = 0; i < rows_.size();) {
        std::size_t j = i;
        while (j < rows_.size() && rows_[j].prb == rows_[i].prb) ++j;
        if (j - i < 2)
            throw SchemaViolation("link_table needs at least 2 attenuation points for PRB " +
                                  std::to_string(rows_[i].prb));
        i = j;
    }
}

const LinkQualityTable& LinkQualityTable::reference() {
    static const LinkQualityTable table(
        {
            {60.0, 25, 5.0},
            {60.0, 50, 10.0},
            {60.0, 100, 20.0},
            {80.0, 25, 0.98},
            {80.0, 50, 1.64},
            {80.0, 100, 3.40},
        },
        kDefaultDropThresholdDb);
    return table;
}

double subframe_time_us(const CostModelParams& params, CpuFrequency f,
                        PrbAllocation prb, McsIndex mcs) {
    if (f.classification() == FreqClass::kInvalid)
        throw FrequencyBelowMinimum("CPU frequency " + std::to_string(f.ghz()) +
                                    " GHz is below the 2.5 GHz floor required to run the baseband stack");
    const auto alpha = params.alpha_prb.find(prb.value());
    if (alpha == params.alpha_prb.end())
        throw UnknownParameter("no alpha_prb entry for PRB " + std::to_string(prb.value()));
    const auto beta = params.beta_mcs.find(mcs.value());
    if (beta == params.beta_mcs.end())
        throw UnknownParameter("no beta_mcs entry for MCS " + std::to_string(mcs.value()));
    return alpha->second / f.ghz() + beta->second + params.t_const_us;
}

CpuPrediction cpu_percent(const CostModelParams& params, double phi_mbps) {
    if (!(phi_mbps >= 0.0) || !std::isfinite(phi_mbps))
        throw NegativeThroughput("throughput must be finite and >= 0 Mbps");
    const double pct = params.cpu_slope * phi_mbps + params.cpu_intercept;
    return {pct, pct > 100.0};
}

std::optional<double> link_throughput_mbps(const LinkQualityTable& table,
                                           double attenuation_db, PrbAllocation prb) {
    if (!std::isfinite(attenuation_db))
        throw SchemaViolation("attenuation must be finite");
    if (attenuation_db > table.drop_threshold_db()) return std::nullopt;

    const auto& rows = table.rows();
    std::size_t lo = 0;
    while (lo < rows.size() && rows[lo].prb != prb.value()) ++lo;
    if (lo == rows.size())
        throw UnknownPrb("link table has no rows for PRB " + std::to_string(prb.value()));
    std::size_t hi = lo;
    while (hi + 1 < rows.size() && rows[hi + 1].prb == prb.value()) ++hi;

    if (attenuation_db <= rows[lo].atten_db) return rows[lo].mbps;
    if (attenuation_db >= rows[hi].atten_db) return rows[hi].mbps;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        if (attenuation_db > rows[i].atten_db) continue;
        if (attenuation_db == rows[i].atten_db) return rows[i].mbps;
        const auto& a = rows[i - 1];
        const auto& b = rows[i];
        const double t = (attenuation_db - a.atten_db) / (b.atten_db - a.atten_db);
        return a.mbps + t * (b.mbps - a.mbps);
    }
    return rows[hi].mbps;  // unreachable given the clamps above
}

namespace detail {

namespace {

[[noreturn]] void throw_with_position(std::string_view text, const json::parse_error& e) {
    // parse_error byte offsets are 1-based.
    std::size_t line = 1, col = 1;
    const std::size_t stop = e.byte > 0 ? std::min<std::size_t>(e.byte - 1, text.size()) : 0;
    for (std::size_t i = 0; i < stop; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    throw SchemaViolation("JSON parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
}

int parse_int_key(const std::string& key, std::string_view table) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
    if (ec != std::errc() || ptr != key.data() + key.size())
        throw SchemaViolation(std::string(table) + " keys must be decimal integers, got \"" + key + "\"");
    return value;
}

std::map<int, double> number_map(const json& obj, std::string_view key) {
    if (!obj.is_object())
        throw SchemaViolation(std::string(key) + " must be an object mapping indices to numbers");
    std::map<int, double> out;
    for (const auto& [k, v] : obj.items()) {
        if (!v.is_number())
            throw SchemaViolation(std::string(key) + "[\"" + k + "\"] must be a number");
        out[parse_int_key(k, key)] = v.get<double>();
    }
    return out;
}

}  // namespace

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw_with_position(text, e);
    }
}

void reject_unknown_keys(const json& doc, std::initializer_list<std::string_view> allowed,
                         std::string_view context) {
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw SchemaViolation("unknown key \"" + key + "\" in " + std::string(context));
    }
}

double require_finite_number(const json& value, std::string_view key) {
    if (!value.is_number())
        throw SchemaViolation(std::string(key) + " must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v))
        throw SchemaViolation(std::string(key) + " must be finite");
    return v;
}

CostModelParams params_from_json(const json& doc) {
    if (!doc.is_object() || doc.empty())
        throw SchemaViolation("parameter document must be a non-empty JSON object");
    reject_unknown_keys(doc,
                        {"alpha_prb", "beta_mcs", "t_const_us", "cpu_slope", "cpu_intercept",
                         "link_table", "drop_threshold_db", "fit_meta"},
                        "parameter document");
    if (!doc.contains("alpha_prb") || !doc.contains("beta_mcs"))
        throw SchemaViolation("parameter document requires alpha_prb and beta_mcs tables");

    CostModelParams params;
    params.alpha_prb = number_map(doc.at("alpha_prb"), "alpha_prb");
    params.beta_mcs = number_map(doc.at("beta_mcs"), "beta_mcs");
    if (params.alpha_prb.empty()) throw SchemaViolation("alpha_prb must not be empty");
    if (params.beta_mcs.empty()) throw SchemaViolation("beta_mcs must not be empty");
    if (doc.contains("t_const_us"))
        params.t_const_us = require_finite_number(doc.at("t_const_us"), "t_const_us");
    if (doc.contains("cpu_slope"))
        params.cpu_slope = require_finite_number(doc.at("cpu_slope"), "cpu_slope");
    if (doc.contains("cpu_intercept"))
        params.cpu_intercept = require_finite_number(doc.at("cpu_intercept"), "cpu_intercept");
    if (doc.contains("fit_meta") && !doc.at("fit_meta").is_object())
        throw SchemaViolation("fit_meta must be an object");
    validate(params);
    return params;
}

LinkQualityTable link_table_from_json(const json& doc) {
    double threshold = LinkQualityTable::kDefaultDropThresholdDb;
    if (doc.contains("drop_threshold_db"))
        threshold = require_finite_number(doc.at("drop_threshold_db"), "drop_threshold_db");
    if (!doc.contains("link_table")) {
        if (threshold == LinkQualityTable::kDefaultDropThresholdDb)
            return LinkQualityTable::reference();
        return LinkQualityTable(LinkQualityTable::reference().rows(), threshold);
    }
    const json& arr = doc.at("link_table");
    if (!arr.is_array())
        throw SchemaViolation("link_table must be an array of {atten_db, prb, mbps} objects");
    std::vector<LinkQualityRow> rows;
    rows.reserve(arr.size());
    for (const json& entry : arr) {
        if (!entry.is_object())
            throw SchemaViolation("link_table entries must be objects");
        reject_unknown_keys(entry, {"atten_db", "prb", "mbps"}, "link_table entry");
        if (!entry.contains("atten_db") || !entry.contains("prb") || !entry.contains("mbps"))
            throw SchemaViolation("link_table entries need atten_db, prb, and mbps");
        if (!entry.at("prb").is_number_integer())
            throw SchemaViolation("link_table prb must be an integer");
        rows.push_back({require_finite_number(entry.at("atten_db"), "atten_db"),
                        entry.at("prb").get<int>(),
                        require_finite_number(entry.at("mbps"), "mbps")});
    }
    return LinkQualityTable(std::move(rows), threshold);
}

json params_to_json_obj(const CostModelParams& params) {
    json alpha = json::object();
    for (const auto& [prb, a] : params.alpha_prb) alpha[std::to_string(prb)] = a;
    json beta = json::object();
    for (const auto& [mcs, b] : params.beta_mcs) beta[std::to_string(mcs)] = b;
    return json{{"alpha_prb", std::move(alpha)},
                {"beta_mcs", std::move(beta)},
                {"t_const_us", params.t_const_us},
                {"cpu_slope", params.cpu_slope},
                {"cpu_intercept", params.cpu_intercept}};
}

json link_table_to_json_obj(const LinkQualityTable& table) {
    json arr = json::array();
    for (const auto& row : table.rows())
        arr.push_back(json{{"atten_db", row.atten_db}, {"prb", row.prb}, {"mbps", row.mbps}});
    return arr;
}

}  // namespace detail

CostModelParams load_params(std::string_view json_text) {
    return detail::params_from_json(detail::parse_json(json_text));
}

ModelDocument load_model_document(std::string_view json_text) {
    const detail::json doc = detail::parse_json(json_text);
    return ModelDocument{detail::params_from_json(doc), detail::link_table_from_json(doc)};
}

std::string params_to_json(const CostModelParams& params, const LinkQualityTable* link_table) {
    detail::json doc = detail::params_to_json_obj(params);
    if (link_table) {
        doc["link_table"] = detail::link_table_to_json_obj(*link_table);
        doc["drop_threshold_db"] = link_table->drop_threshold_db();
    }
    return doc.dump(2) + "\n";
}

}  // namespace cranplan
