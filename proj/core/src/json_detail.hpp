#pragma once

// Internal helpers shared by the JSON-facing translation units. The
// vendored nlohmann header stays out of the public interface.

#include <string>
#include <string_view>

#include <json.hpp>

#include "cranplan/cost_models.hpp"
#include "cranplan/errors.hpp"

namespace cranplan::detail {

using nlohmann::json;

/// Parses text, rethrowing parse failures as SchemaViolation with the
/// 1-based line and column derived from the byte offset.
json parse_json(std::string_view text);

CostModelParams params_from_json(const json& doc);
LinkQualityTable link_table_from_json(const json& doc);
json params_to_json_obj(const CostModelParams& params);
json link_table_to_json_obj(const LinkQualityTable& table);

/// Throws SchemaViolation when doc contains a key outside `allowed`.
void reject_unknown_keys(const json& doc, std::initializer_list<std::string_view> allowed,
                         std::string_view context);

double require_finite_number(const json& value, std::string_view key);

}  // namespace cranplan::detail
