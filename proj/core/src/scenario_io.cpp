#include "cranplan/scenario_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "json_detail.hpp"

namespace cranplan {

namespace {

using detail::json;

constexpr std::int64_t kSchemaVersion = 1;

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string require_string(const json& obj, std::string_view key, std::string_view context) {
    if (!obj.contains(key))
        throw SchemaViolation(std::string(context) + " requires \"" + std::string(key) + "\"");
    const json& v = obj.at(std::string(key));
    if (!v.is_string())
        throw SchemaViolation(std::string(context) + "." + std::string(key) + " must be a string");
    return v.get<std::string>();
}

std::int64_t require_integer(const json& obj, std::string_view key, std::string_view context) {
    if (!obj.contains(key))
        throw SchemaViolation(std::string(context) + " requires \"" + std::string(key) + "\"");
    const json& v = obj.at(std::string(key));
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw SchemaViolation(std::string(context) + "." + std::string(key) +
                              " must be an integer");
    return v.get<std::int64_t>();
}

std::uint64_t require_u64(const json& obj, std::string_view key, std::string_view context) {
    if (!obj.contains(key))
        throw SchemaViolation(std::string(context) + " requires \"" + std::string(key) + "\"");
    const json& v = obj.at(std::string(key));
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw SchemaViolation(std::string(context) + "." + std::string(key) +
                          " must be a non-negative integer");
}

PrbAllocation prb_from_value(int value, bool extended_allowed, const std::string& rrh_id) {
    if (value == 25 || value == 50 || value == 100) return PrbAllocation(value);
    if (!extended_allowed)
        throw SchemaViolation("rrh \"" + rrh_id + "\": PRB " + std::to_string(value) +
                              " requires \"extended_prb\": true");
    return PrbAllocation::extended(value);
}

}  // namespace

Scenario load_scenario(std::string_view json_text) {
    const json doc = detail::parse_json(json_text);
    if (!doc.is_object()) throw SchemaViolation("scenario must be a JSON object");
    detail::reject_unknown_keys(doc,
                                {"schema_version", "topology", "rrhs", "vms", "assignment",
                                 "deadline_us", "duration_ttis", "seed", "service_noise_std",
                                 "extended_prb", "params"},
                                "scenario");
    if (require_integer(doc, "schema_version", "scenario") != kSchemaVersion)
        throw SchemaViolation("unsupported schema_version (expected 1)");

    Scenario scenario;
    const std::string topology = require_string(doc, "topology", "scenario");
    if (topology == "per_rrh") {
        scenario.topology = Topology::kPerRrh;
    } else if (topology == "consolidated") {
        scenario.topology = Topology::kConsolidated;
    } else {
        throw SchemaViolation("topology must be \"per_rrh\" or \"consolidated\"");
    }

    const bool extended_prb = doc.value("extended_prb", false);
    if (doc.contains("extended_prb") && !doc.at("extended_prb").is_boolean())
        throw SchemaViolation("extended_prb must be a boolean");

    if (!doc.contains("rrhs") || !doc.at("rrhs").is_array())
        throw SchemaViolation("scenario requires an \"rrhs\" array");
    for (const json& entry : doc.at("rrhs")) {
        if (!entry.is_object()) throw SchemaViolation("rrhs entries must be objects");
        detail::reject_unknown_keys(entry, {"id", "prb", "mcs", "activity", "attenuation_db"},
                                    "rrh");
        const std::string id = require_string(entry, "id", "rrh");
        RrhSpec rrh{id,
                    prb_from_value(static_cast<int>(require_integer(entry, "prb", "rrh")),
                                   extended_prb, id),
                    McsIndex(static_cast<int>(require_integer(entry, "mcs", "rrh")))};
        if (entry.contains("activity"))
            rrh.activity = detail::require_finite_number(entry.at("activity"), "activity");
        if (entry.contains("attenuation_db"))
            rrh.attenuation_db =
                detail::require_finite_number(entry.at("attenuation_db"), "attenuation_db");
        scenario.rrhs.push_back(std::move(rrh));
    }

    if (!doc.contains("vms") || !doc.at("vms").is_array())
        throw SchemaViolation("scenario requires a \"vms\" array");
    for (const json& entry : doc.at("vms")) {
        if (!entry.is_object()) throw SchemaViolation("vms entries must be objects");
        detail::reject_unknown_keys(entry, {"id", "cores", "f_ghz"}, "vm");
        scenario.vms.push_back(
            BbuVmSpec{require_string(entry, "id", "vm"),
                      static_cast<int>(require_integer(entry, "cores", "vm")),
                      CpuFrequency(detail::require_finite_number(entry.at("f_ghz"), "f_ghz"))});
    }

    if (!doc.contains("assignment") || !doc.at("assignment").is_object())
        throw SchemaViolation("scenario requires an \"assignment\" object");
    for (const auto& [rrh_id, vm_id] : doc.at("assignment").items()) {
        if (!vm_id.is_string()) throw SchemaViolation("assignment values must be VM id strings");
        scenario.assignment[rrh_id] = vm_id.get<std::string>();
    }

    if (doc.contains("deadline_us"))
        scenario.deadline_us = detail::require_finite_number(doc.at("deadline_us"), "deadline_us");
    scenario.duration_ttis = require_u64(doc, "duration_ttis", "scenario");
    scenario.seed = require_u64(doc, "seed", "scenario");
    if (doc.contains("service_noise_std"))
        scenario.service_noise_std =
            detail::require_finite_number(doc.at("service_noise_std"), "service_noise_std");

    if (doc.contains("params")) {
        scenario.params = detail::params_from_json(doc.at("params"));
        scenario.link_table = detail::link_table_from_json(doc.at("params"));
    }
    return scenario;
}

std::string scenario_to_json(const Scenario& scenario) {
    json rrhs = json::array();
    bool any_extended = false;
    for (const auto& rrh : scenario.rrhs) {
        json entry{{"id", rrh.id},
                   {"prb", rrh.prb.value()},
                   {"mcs", rrh.mcs.value()},
                   {"activity", rrh.activity}};
        if (rrh.attenuation_db) entry["attenuation_db"] = *rrh.attenuation_db;
        any_extended = any_extended || rrh.prb.is_extended();
        rrhs.push_back(std::move(entry));
    }
    json vms = json::array();
    for (const auto& vm : scenario.vms)
        vms.push_back(json{{"id", vm.id}, {"cores", vm.cores}, {"f_ghz", vm.f.ghz()}});

    json doc{{"schema_version", kSchemaVersion},
             {"topology", scenario.topology == Topology::kPerRrh ? "per_rrh" : "consolidated"},
             {"rrhs", std::move(rrhs)},
             {"vms", std::move(vms)},
             {"assignment", scenario.assignment},
             {"deadline_us", scenario.deadline_us},
             {"duration_ttis", scenario.duration_ttis},
             {"seed", scenario.seed}};
    if (scenario.service_noise_std != 0.0)
        doc["service_noise_std"] = scenario.service_noise_std;
    if (any_extended) doc["extended_prb"] = true;
    if (scenario.params) {
        doc["params"] = detail::params_to_json_obj(*scenario.params);
        doc["params"]["link_table"] = detail::link_table_to_json_obj(scenario.link_table);
        doc["params"]["drop_threshold_db"] = scenario.link_table.drop_threshold_db();
    }
    return doc.dump(2) + "\n";
}

std::string scenario_hash(const Scenario& scenario) {
    const std::string canonical = scenario_to_json(scenario);
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const unsigned char c : canonical) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buffer, 16);
}

std::string metrics_to_csv(const SimMetrics& metrics, const Scenario& scenario) {
    const std::string hash = scenario_hash(scenario);
    const std::string seed = std::to_string(metrics.seed);
    std::string out =
        "kind,id,cores,f_ghz,busy_us,subframes_processed,deadline_misses,accounted_util,"
        "predicted_cpu_pct,overload,offered_subframes,missed,phi_mbps,seed,scenario_hash\n";
    for (const auto& vm : metrics.per_vm) {
        out += "vm," + vm.id + ',' + std::to_string(vm.cores) + ',' + format_double(vm.f_ghz) +
               ',' + format_double(static_cast<double>(vm.busy_ns) / 1000.0) + ',' +
               std::to_string(vm.subframes_processed) + ',' + std::to_string(vm.deadline_misses) +
               ',' + format_double(vm.accounted_util) + ',' + format_double(vm.predicted_cpu_pct) +
               ',' + (vm.overload ? "1" : "0") + ",,,," + seed + ',' + hash + '\n';
    }
    for (const auto& rrh : metrics.per_rrh) {
        out += "rrh," + rrh.id + ",,,,,,,,," + std::to_string(rrh.offered_subframes) + ',' +
               std::to_string(rrh.missed) + ',' + format_double(rrh.phi_mbps) + ',' + seed + ',' +
               hash + '\n';
    }
    return out;
}

std::string metrics_to_json(const SimMetrics& metrics, const Scenario& scenario) {
    json per_vm = json::array();
    std::uint64_t total_misses = 0, total_offered = 0;
    double total_busy_us = 0.0;
    for (const auto& vm : metrics.per_vm) {
        per_vm.push_back(json{{"id", vm.id},
                              {"cores", vm.cores},
                              {"f_ghz", vm.f_ghz},
                              {"f_class", std::string(name(CpuFrequency(vm.f_ghz).classification()))},
                              {"busy_us", static_cast<double>(vm.busy_ns) / 1000.0},
                              {"subframes_processed", vm.subframes_processed},
                              {"deadline_misses", vm.deadline_misses},
                              {"accounted_util", vm.accounted_util},
                              {"predicted_cpu_pct", vm.predicted_cpu_pct},
                              {"overload", vm.overload}});
        total_busy_us += static_cast<double>(vm.busy_ns) / 1000.0;
    }
    json per_rrh = json::array();
    for (const auto& rrh : metrics.per_rrh) {
        per_rrh.push_back(json{{"id", rrh.id},
                               {"offered_subframes", rrh.offered_subframes},
                               {"missed", rrh.missed},
                               {"phi_mbps", rrh.phi_mbps}});
        total_offered += rrh.offered_subframes;
        total_misses += rrh.missed;
    }
    json doc{{"seed", metrics.seed},
             {"scenario_hash", scenario_hash(scenario)},
             {"meta",
              json{{"tool", "cranplan"},
                   {"cpu_model_note",
                    "predicted_cpu_pct treats the CPU-line intercept as per-instance baseline "
                    "overhead and is expressed relative to the 4-core reference platform"}}},
             {"per_vm", std::move(per_vm)},
             {"per_rrh", std::move(per_rrh)},
             {"totals", json{{"offered_subframes", total_offered},
                             {"deadline_misses", total_misses},
                             {"busy_us", total_busy_us}}}};
    return doc.dump(2) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading " + path.string());
    return std::move(buffer).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace cranplan
