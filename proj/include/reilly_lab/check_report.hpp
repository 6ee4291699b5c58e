#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "numerics.hpp"

namespace reilly_lab {

using ParamValue = std::variant<double, long long, std::string, bool>;

struct CheckReport {
  std::string name;
  std::vector<std::pair<std::string, ParamValue>> params;
  double lhs = 0.0, rhs = 0.0, slack = 0.0, tolerance = 0.0;
  std::optional<bool> pass;  // empty for diagnostics
  std::vector<std::pair<double, double>> grids;
  std::optional<double> order_estimate;

  CheckReport& put(const std::string& key, ParamValue v) {
    for (auto& kv : params)
      if (kv.first == key) {
        kv.second = std::move(v);
        return *this;
      }
    params.emplace_back(key, std::move(v));
    return *this;
  }
  CheckReport& set(const std::string& key, double v) { return put(key, v); }
  CheckReport& set(const std::string& key, bool v) { return put(key, v); }
  CheckReport& set(const std::string& key, const std::string& v) { return put(key, v); }
  CheckReport& set(const std::string& key, const char* v) { return put(key, std::string(v)); }
  CheckReport& set(const std::string& key, int v) { return put(key, static_cast<long long>(v)); }
  CheckReport& set(const std::string& key, long long v) { return put(key, v); }
  CheckReport& set(const std::string& key, std::size_t v) { return put(key, static_cast<long long>(v)); }

  const ParamValue* get(const std::string& key) const {
    for (auto& kv : params)
      if (kv.first == key) return &kv.second;
    return nullptr;
  }
  double get_double(const std::string& key) const {
    const ParamValue* v = get(key);
    if (!v) return std::nan("");
    if (auto d = std::get_if<double>(v)) return *d;
    if (auto i = std::get_if<long long>(v)) return static_cast<double>(*i);
    return std::nan("");
  }

  // lhs <= rhs holds up to tolerance.
  CheckReport& inequality(double l, double r, double tol) {
    lhs = l;
    rhs = r;
    tolerance = tol;
    slack = rhs - lhs;
    pass = slack >= -tolerance;
    set("kind", "inequality");
    return *this;
  }
  // lhs == rhs up to tolerance; slack carries -|lhs - rhs|.
  CheckReport& identity(double l, double r, double tol) {
    lhs = l;
    rhs = r;
    tolerance = tol;
    slack = -std::abs(lhs - rhs);
    pass = slack >= -tolerance;
    set("kind", "identity");
    return *this;
  }
  CheckReport& diagnostic(double l, double r) {
    lhs = l;
    rhs = r;
    slack = rhs - lhs;
    tolerance = 0.0;
    pass.reset();
    set("kind", "diagnostic");
    return *this;
  }
  CheckReport& grid(double resolution, double value) {
    grids.emplace_back(resolution, value);
    return *this;
  }

  bool passed() const { return !pass.has_value() || *pass; }
  void rescale_tolerance(double s) {
    tolerance *= s;
    if (pass) pass = slack >= -tolerance;
  }
};

// Conservative observed order: the minimum over consecutive refinements of
// log(e_i/e_{i+1}) / log(n_{i+1}/n_i), grids given as (resolution, error).
inline std::optional<double> estimate_order(const std::vector<std::pair<double, double>>& g) {
  if (g.size() < 3) return std::nullopt;
  double p = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < g.size(); ++i) {
    double e0 = std::abs(g[i - 1].second), e1 = std::abs(g[i].second);
    p = std::min(p, std::log(e0 / e1) / std::log(g[i].first / g[i - 1].first));
  }
  return p;
}

}  // namespace reilly_lab
