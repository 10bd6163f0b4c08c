#include "mcurv/report_io.hpp"

#include <charconv>
#include <cmath>

namespace mcurv::io {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

nlohmann::json scale_report_json(const ScaleReport& rep) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : rep.levels) {
    levels.push_back({{"level", l.level},
                      {"cells", l.cells},
                      {"sum", l.sum},
                      {"cumulative", l.cumulative}});
  }
  nlohmann::json j{{"schema_version", schema_version},
                   {"base", rep.base},
                   {"levels", std::move(levels)}};
  j["fitted_exponent"] = std::isnan(rep.fitted_exponent)
                             ? nlohmann::json()
                             : nlohmann::json(rep.fitted_exponent);
  j["predicted_exponent"] = std::isnan(rep.predicted_exponent)
                                ? nlohmann::json()
                                : nlohmann::json(rep.predicted_exponent);
  j["gap_check"] = std::isnan(rep.gap_check) ? nlohmann::json()
                                             : nlohmann::json(rep.gap_check);
  return j;
}

void scale_report_csv(std::ostream& os, const ScaleReport& rep) {
  os << "level,cells,sum,cumulative,fitted,predicted\n";
  for (const auto& l : rep.levels) {
    os << l.level << ',' << format_double(l.cells) << ',' << format_double(l.sum)
       << ',' << format_double(l.cumulative) << ','
       << format_double(rep.fitted_exponent) << ','
       << format_double(rep.predicted_exponent) << '\n';
  }
}

bool matches_schema(const nlohmann::json& doc, const nlohmann::json& schema,
                    std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!schema.contains("required")) return true;
  for (const auto& key : schema["required"]) {
    std::string k = key.get<std::string>();
    if (!doc.contains(k)) return fail("missing required field: " + k);
    if (schema.contains("properties") && schema["properties"].contains(k)) {
      const auto& prop = schema["properties"][k];
      if (prop.contains("type")) {
        std::string t = prop["type"].get<std::string>();
        const auto& v = doc[k];
        bool ok = (t == "number" && (v.is_number() || v.is_null())) ||
                  (t == "integer" && v.is_number_integer()) ||
                  (t == "string" && v.is_string()) ||
                  (t == "boolean" && v.is_boolean()) ||
                  (t == "array" && v.is_array()) ||
                  (t == "object" && v.is_object());
        if (!ok) return fail("field has wrong type: " + k);
      }
    }
  }
  return true;
}

}  // namespace mcurv::io
