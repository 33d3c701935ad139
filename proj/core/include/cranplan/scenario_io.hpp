#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "cranplan/simulator.hpp"

namespace cranplan {

/// Parses a scenario document (JSON, schema_version 1). Unknown fields
/// are errors. PRB counts outside {25, 50, 100} need
/// "extended_prb": true. The cost-model parameters may be embedded
/// under "params" or supplied separately before running.
Scenario load_scenario(std::string_view json_text);

/// Canonical JSON form of a scenario (sorted keys, effective values
/// with defaults applied). load_scenario round-trips it.
std::string scenario_to_json(const Scenario& scenario);

/// FNV-1a 64-bit hash of the canonical form, as 16 hex digits. Changing
/// any effective field (seed included) changes the hash.
std::string scenario_hash(const Scenario& scenario);

/// One CSV with a `kind` column: one row per VM, one per RRH. Every row
/// carries the seed and scenario hash for reproducibility audits.
std::string metrics_to_csv(const SimMetrics& metrics, const Scenario& scenario);

/// JSON summary of the same metrics, with per-VM / per-RRH sections,
/// totals, seed, scenario hash, and model-assumption notes.
std::string metrics_to_json(const SimMetrics& metrics, const Scenario& scenario);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace cranplan
