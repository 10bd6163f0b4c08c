#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "mcurv/scale_report.hpp"

namespace mcurv::io {

inline constexpr int schema_version = 1;

/// Shortest decimal string that round-trips to the exact binary value.
std::string format_double(double x);

nlohmann::json scale_report_json(const ScaleReport& rep);

/// One row per level: level, cells, sum, cumulative, fitted, predicted.
void scale_report_csv(std::ostream& os, const ScaleReport& rep);

/// Shallow structural validation: required fields present with matching
/// primitive types. Enough to keep reports and published schemas in sync.
bool matches_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                    std::string* why = nullptr);

}  // namespace mcurv::io
