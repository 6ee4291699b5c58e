#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "inverse_dimension.hpp"

namespace reilly_lab {

enum class ConfigType { Real, Integer, RealList, IntegerList, Text, Dimension, DimensionList };

struct ConfigKey {
  std::string path;  // section.key
  ConfigType type;
  std::string default_value;
  std::string doc;
};

// Every recognised key with its default. Keys before any [section] header
// belong to [general].
inline const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> keys = {
      {"general.suite", ConfigType::Text, "all", "reilly|bln|spectral|colesanti|boundary|flows|isoperimetric|all"},
      {"general.seed", ConfigType::Integer, "2024", "corpus seed for random bodies and curves"},
      {"general.tol_scale", ConfigType::Real, "1", "multiplies every pass/fail tolerance"},

      {"reilly.resolutions", ConfigType::IntegerList, "250,500,1000", "grid sizes for the refinement study"},
      {"reilly.gaussian_half_width", ConfigType::Real, "1", "Gaussian interval [-L, L], u = t^2"},
      {"reilly.model_N", ConfigType::Dimension, "5", "model density for u = sin(sqrt(delta) t)"},
      {"reilly.model_beta_frac", ConfigType::Real, "0.999", "beta_trunc / beta for the model density"},
      {"reilly.ball_dim", ConfigType::Integer, "2", "ambient dimension of the unit balls (Gaussian and flat), u = r^2"},

      {"bln.rho", ConfigType::Real, "1", "curvature lower bound of the sharpness models"},
      {"bln.N", ConfigType::Dimension, "5", "positive-N sharpness model"},
      {"bln.beta_frac", ConfigType::Real, "0.999", "beta_trunc / beta for the positive-N model"},
      {"bln.negative_N", ConfigType::Dimension, "-2", "negative-N sharpness model"},
      {"bln.negative_beta_trunc", ConfigType::Real, "8", "truncation of the negative-N model"},
      {"bln.ratio_tolerance", ConfigType::Real, "0.001", "|ratio - 1| tolerance, positive N"},
      {"bln.negative_ratio_tolerance", ConfigType::Real, "0.002", "|ratio - 1| tolerance, negative N"},
      {"bln.n_pts", ConfigType::Integer, "20001", "Simpson nodes for sharpness quadrature"},
      {"bln.gaussian_half_width", ConfigType::Real, "4", "Gaussian interval for the N = inf equality case"},
      {"bln.gaussian_n_pts", ConfigType::Integer, "4001", "nodes of the Gaussian interval"},

      {"spectral.N_values", ConfigType::DimensionList, "5,20", "model densities for the Lichnerowicz equality (inf: Gaussian)"},
      {"spectral.rho", ConfigType::Real, "1", "curvature of the Lichnerowicz models"},
      {"spectral.beta_frac", ConfigType::Real, "0.999", "beta_trunc / beta for models with N > 1"},
      {"spectral.negative_beta_trunc", ConfigType::Real, "8", "truncation for models with N < 0"},
      {"spectral.n_pts", ConfigType::Integer, "2000", "eigensolver nodes"},
      {"spectral.veysseire_n_pts", ConfigType::Integer, "2001", "nodes of the quartic Veysseire interval"},

      {"colesanti.m", ConfigType::Integer, "512", "angles of the spectral grid"},
      {"colesanti.bodies", ConfigType::Integer, "10", "seeded corpus bodies"},
      {"colesanti.polynomials", ConfigType::Integer, "200", "random trig polynomials per sweep"},
      {"colesanti.poly_seed", ConfigType::Integer, "99", "seed of the polynomial generator"},
      {"colesanti.poly_degree", ConfigType::Integer, "8", "degree of the random polynomials"},
      {"colesanti.sweep_tolerance", ConfigType::Real, "1e-8", "minimum allowed slack over the sweep (negated)"},

      {"boundary.profile_cells", ConfigType::Integer, "1024", "profile resolution of revolution bodies"},
      {"boundary.spheroid_c", ConfigType::Real, "1.2", "polar semi-axis of the prolate spheroid"},
      {"boundary.curves", ConfigType::Integer, "10", "seeded convex curves for the root bound"},
      {"boundary.m", ConfigType::Integer, "512", "angles of plane bodies"},
      {"boundary.m_max", ConfigType::Integer, "8", "highest azimuthal mode on revolution bodies"},
      {"boundary.ellipse_a", ConfigType::Real, "1.2", "ellipse semi-axis for strict mean-curvature checks"},

      {"flows.t_end", ConfigType::Real, "0.5", "flow horizon"},
      {"flows.dt", ConfigType::Real, "0.001", "reference time step"},
      {"flows.m", ConfigType::Integer, "512", "reference marker count"},
      {"flows.pairs", ConfigType::Integer, "5", "seeded (K, phi) pairs"},
      {"flows.pair_seed", ConfigType::Integer, "31", "seed of the pair generator"},
      {"flows.cap_radius", ConfigType::Real, "1.0471975511965976", "initial cap radius on the sphere"},
      {"flows.sphere_m", ConfigType::Integer, "256", "markers on the sphere curve"},
      {"flows.sphere_dt", ConfigType::Real, "0.01", "time step on the sphere"},
      {"flows.weingarten_m", ConfigType::Integer, "128", "markers for the Weingarten wave"},
      {"flows.weingarten_dt", ConfigType::Real, "0.01", "outer step of the Weingarten wave"},
      {"flows.corpus", ConfigType::Integer, "20", "bodies in the Alexandrov sweep"},

      {"isoperimetric.t_grid", ConfigType::RealList, "0,0.1,0.2,0.3,0.4", "extension times"},
      {"isoperimetric.m", ConfigType::Integer, "256", "angles of plane bodies"},
      {"isoperimetric.ellipse_a", ConfigType::Real, "1.2", "semi-axis of the strict fixture"},
  };
  return keys;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s = {"reilly", "bln", "spectral", "colesanti", "boundary", "flows",
                                             "isoperimetric", "all"};
  return s;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline double parse_real(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  char* end = nullptr;
  errno = 0;
  double x = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE || std::isnan(x))
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  return x;
}

inline long long parse_integer(const std::string& key, const std::string& v) {
  std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  long long x = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE) throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
  return x;
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace detail

// N = 0 encodes theta = -inf and N = inf encodes theta = 0.
inline InverseDimension parse_dimension(const std::string& key, const std::string& v, int n_ambient = 1) {
  double N = detail::parse_real(key, v);
  if (N == -std::numeric_limits<double>::infinity()) throw ConfigError("key '" + key + "': N = -inf is not allowed");
  try {
    return InverseDimension::from_N(N, n_ambient);
  } catch (const DomainError& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

class SuiteConfig {
 public:
  SuiteConfig() {
    for (const ConfigKey& k : config_schema()) values_[k.path] = k.default_value;
  }

  static const ConfigKey* lookup(const std::string& path) {
    for (const ConfigKey& k : config_schema())
      if (k.path == path) return &k;
    return nullptr;
  }

  // Validates type on every assignment.
  void set(const std::string& path, const std::string& value) {
    const ConfigKey* k = lookup(path);
    if (!k) throw ConfigError("unknown config key '" + path + "'");
    validate(*k, value);
    values_[path] = detail::trim(value);
  }

  static SuiteConfig parse(std::istream& in) {
    SuiteConfig c;
    std::string line, section = "general";
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t hash = line.find_first_of("#;");
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = detail::trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
        section = detail::trim(line.substr(1, line.size() - 2));
        bool known = false;
        for (const ConfigKey& k : config_schema()) known = known || k.path.rfind(section + ".", 0) == 0;
        if (!known) throw ConfigError("unknown config section '" + section + "'");
        continue;
      }
      std::size_t eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
      std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      std::string path = key.find('.') == std::string::npos ? section + "." + key : key;
      if (!lookup(path)) throw ConfigError("unknown config key '" + key + "' in section [" + section + "]");
      c.set(path, value);
    }
    return c;
  }

  static SuiteConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  static SuiteConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in);
  }

  const std::string& raw(const std::string& path) const {
    auto it = values_.find(path);
    if (it == values_.end()) throw ConfigError("unknown config key '" + path + "'");
    return it->second;
  }
  double real(const std::string& path) const { return detail::parse_real(path, raw(path)); }
  long long integer(const std::string& path) const { return detail::parse_integer(path, raw(path)); }
  std::size_t count(const std::string& path) const { return static_cast<std::size_t>(integer(path)); }
  std::vector<double> reals(const std::string& path) const {
    std::vector<double> out;
    for (const std::string& s : detail::split_list(raw(path))) out.push_back(detail::parse_real(path, s));
    return out;
  }
  std::vector<std::size_t> counts(const std::string& path) const {
    std::vector<std::size_t> out;
    for (const std::string& s : detail::split_list(raw(path))) out.push_back(static_cast<std::size_t>(detail::parse_integer(path, s)));
    return out;
  }
  InverseDimension dimension(const std::string& path, int n_ambient = 1) const {
    return parse_dimension(path, raw(path), n_ambient);
  }
  std::vector<InverseDimension> dimensions(const std::string& path, int n_ambient = 1) const {
    std::vector<InverseDimension> out;
    for (const std::string& s : detail::split_list(raw(path))) out.push_back(parse_dimension(path, s, n_ambient));
    return out;
  }
  std::vector<std::string> list(const std::string& path) const { return detail::split_list(raw(path)); }

  // Effective values in schema order.
  std::vector<std::pair<std::string, std::string>> echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const ConfigKey& k : config_schema()) out.emplace_back(k.path, values_.at(k.path));
    return out;
  }

 private:
  static void validate(const ConfigKey& k, const std::string& v) {
    switch (k.type) {
      case ConfigType::Real:
        detail::parse_real(k.path, v);
        break;
      case ConfigType::Integer:
        if (detail::parse_integer(k.path, v) < 0) throw ConfigError("key '" + k.path + "' must be non-negative");
        break;
      case ConfigType::RealList:
        for (const std::string& s : detail::split_list(v)) detail::parse_real(k.path, s);
        break;
      case ConfigType::IntegerList:
        for (const std::string& s : detail::split_list(v))
          if (detail::parse_integer(k.path, s) <= 0) throw ConfigError("key '" + k.path + "' needs positive entries");
        break;
      case ConfigType::Dimension:
        parse_dimension(k.path, v);
        break;
      case ConfigType::DimensionList:
        for (const std::string& s : detail::split_list(v)) parse_dimension(k.path, s);
        break;
      case ConfigType::Text:
        if (k.path == "general.suite" && std::find(suite_names().begin(), suite_names().end(), detail::trim(v)) == suite_names().end())
          throw ConfigError("key 'suite': unknown suite '" + v + "'");
        break;
    }
  }

  std::map<std::string, std::string> values_;
};

}  // namespace reilly_lab
