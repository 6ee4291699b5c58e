#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "check_report.hpp"

namespace reilly_lab {

inline constexpr const char* kReportVersion = "1.0.0";

namespace detail {

// 17 significant digits; non-finite values have no JSON spelling and become null.
inline std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out + "\"";
}

inline std::string json_value(const ParamValue& v) {
  if (auto d = std::get_if<double>(&v)) return json_number(*d);
  if (auto i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return json_string(std::get<std::string>(v));
}

inline std::string csv_value(const ParamValue& v) {
  if (auto d = std::get_if<double>(&v)) return csv_number(*d);
  if (auto i = std::get_if<long long>(&v)) return std::to_string(*i);
  if (auto b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  std::string s = std::get<std::string>(v);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

// Deterministic order: by name, ties keep their input order.
inline std::vector<CheckReport> sorted_by_name(std::vector<CheckReport> checks) {
  std::stable_sort(checks.begin(), checks.end(), [](const CheckReport& a, const CheckReport& b) { return a.name < b.name; });
  return checks;
}

// 0 iff every pass-required check passes; diagnostics never count.
inline int report_status(const std::vector<CheckReport>& checks) {
  for (const CheckReport& c : checks)
    if (c.pass.has_value() && !*c.pass) return 1;
  return 0;
}

inline void emit_report(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& config_echo,
                        const std::vector<CheckReport>& checks_in) {
  std::vector<CheckReport> checks = sorted_by_name(checks_in);
  os << "{\n  \"version\": " << detail::json_string(kReportVersion) << ",\n  \"config_echo\": {";
  for (std::size_t i = 0; i < config_echo.size(); ++i)
    os << (i ? "," : "") << "\n    " << detail::json_string(config_echo[i].first) << ": "
       << detail::json_string(config_echo[i].second);
  os << (config_echo.empty() ? "}" : "\n  }") << ",\n  \"checks\": [";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const CheckReport& c = checks[i];
    os << (i ? "," : "") << "\n    {\n      \"name\": " << detail::json_string(c.name) << ",\n      \"params\": {";
    for (std::size_t j = 0; j < c.params.size(); ++j)
      os << (j ? ", " : "") << detail::json_string(c.params[j].first) << ": " << detail::json_value(c.params[j].second);
    os << "},\n      \"lhs\": " << detail::json_number(c.lhs) << ",\n      \"rhs\": " << detail::json_number(c.rhs)
       << ",\n      \"slack\": " << detail::json_number(c.slack) << ",\n      \"tolerance\": " << detail::json_number(c.tolerance)
       << ",\n      \"pass\": " << (c.pass ? (*c.pass ? "true" : "false") : "null") << ",\n      \"grids\": [";
    for (std::size_t j = 0; j < c.grids.size(); ++j)
      os << (j ? ", " : "") << "[" << detail::json_number(c.grids[j].first) << ", " << detail::json_number(c.grids[j].second) << "]";
    os << "],\n      \"order_estimate\": " << (c.order_estimate ? detail::json_number(*c.order_estimate) : "null") << "\n    }";
  }
  os << (checks.empty() ? "]" : "\n  ]") << "\n}\n";
}

inline std::string emit_report_string(const std::vector<std::pair<std::string, std::string>>& config_echo,
                                      const std::vector<CheckReport>& checks) {
  std::ostringstream os;
  emit_report(os, config_echo, checks);
  return os.str();
}

// One row per swept value; columns value, status, then lhs/rhs/slack/pass per
// check in name order over the union of all rows.
struct SweepRow {
  std::string value;
  int status = 0;
  std::vector<CheckReport> checks;
};

inline void write_sweep_csv(std::ostream& os, const std::string& param_path, const std::vector<SweepRow>& rows) {
  std::set<std::string> names;
  for (const SweepRow& r : rows)
    for (const CheckReport& c : r.checks) names.insert(c.name);
  os << param_path << ",status";
  for (const std::string& n : names) os << ',' << n << ".lhs," << n << ".rhs," << n << ".slack," << n << ".pass";
  os << '\n';
  for (const SweepRow& r : rows) {
    std::map<std::string, const CheckReport*> by;
    for (const CheckReport& c : r.checks) by.emplace(c.name, &c);
    os << r.value << ',' << r.status;
    for (const std::string& n : names) {
      auto it = by.find(n);
      if (it == by.end()) {
        os << ",,,,";
        continue;
      }
      const CheckReport& c = *it->second;
      os << ',' << detail::csv_number(c.lhs) << ',' << detail::csv_number(c.rhs) << ',' << detail::csv_number(c.slack)
         << ',' << (c.pass ? (*c.pass ? "true" : "false") : "null");
    }
    os << '\n';
  }
}

}  // namespace reilly_lab
