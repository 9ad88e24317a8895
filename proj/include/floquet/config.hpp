#pragma once

// Declarative run configuration: YAML in and out, key=value overrides and
// static validation. Needs yaml-cpp.

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "floquet/errors.hpp"
#include "floquet/models.hpp"
#include "floquet/observables.hpp"

namespace floquet {

inline const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> t{"gbz",     "agbz",          "spectrum",        "oracle",
                                          "phase-diagram", "dynamics", "critical-period"};
  return t;
}

struct RunConfig {
  std::string task;
  std::string model;
  ParamMap params;
  std::map<std::string, std::string> options;  // raw scalars, typed on access
  std::optional<SweepAxis> axis1, axis2;
  std::string out = "out";
  int workers = 0;  // 0 = all cores

  bool operator==(const RunConfig& o) const {
    auto axis_eq = [](const std::optional<SweepAxis>& a, const std::optional<SweepAxis>& b) {
      if (a.has_value() != b.has_value()) return false;
      return !a || (a->name == b->name && a->values == b->values);
    };
    return task == o.task && model == o.model && params == o.params && options == o.options &&
           axis_eq(axis1, o.axis1) && axis_eq(axis2, o.axis2) && out == o.out && workers == o.workers;
  }
  bool operator!=(const RunConfig& o) const { return !(*this == o); }
};

// --- options --------------------------------------------------------------------

namespace detail {

enum class OptKind { integer, real, boolean, word };

struct OptSpec {
  OptKind kind;
  std::string def;
  std::string rule;  // human-readable constraint
};

inline const std::map<std::string, OptSpec>& option_table() {
  static const std::map<std::string, OptSpec> t{
      {"theta_grid", {OptKind::integer, "720", ">= 8"}},
      {"adaptive", {OptKind::boolean, "true", ""}},
      {"lc_init", {OptKind::integer, "1", ">= 1"}},
      {"ell", {OptKind::integer, "1", ">= 0"}},
      {"gap_tol", {OptKind::real, "1e-06", "> 0"}},
      {"im_tol", {OptKind::real, "0", ">= 0"}},
      {"precision", {OptKind::word, "extended", "standard|extended"}},
      {"radius", {OptKind::real, "0", ">= 0"}},
      {"boundary", {OptKind::word, "open", "open|periodic"}},
      {"k_grid", {OptKind::integer, "256", ">= 2"}},
      {"n_periods", {OptKind::integer, "2000", ">= 1"}},
      {"init_site", {OptKind::integer, "-1", ">= -1"}},
      {"T_lo", {OptKind::real, "0.2", "> 0"}},
      {"T_hi", {OptKind::real, "2", "> T_lo"}},
      {"scan_points", {OptKind::integer, "25", ">= 2"}},
      {"touch_tol", {OptKind::real, "0.001", "> 0"}},
      {"static", {OptKind::boolean, "false", ""}},
  };
  return t;
}

inline bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

inline bool parse_int(const std::string& s, long long& out) {
  double d = 0.0;
  if (!parse_double(s, d) || std::floor(d) != d || std::abs(d) > 1e15) return false;
  out = static_cast<long long>(d);
  return true;
}

inline bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return out = true, true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return out = false, true;
  return false;
}

inline std::string raw_option(const RunConfig& c, const std::string& key) {
  const auto& t = option_table();
  const auto spec = t.find(key);
  if (spec == t.end()) throw ConfigError("unknown option '" + key + "'");
  const auto it = c.options.find(key);
  return it == c.options.end() ? spec->second.def : it->second;
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace detail

inline long long opt_int(const RunConfig& c, const std::string& key) {
  long long v = 0;
  if (!detail::parse_int(detail::raw_option(c, key), v)) throw ConfigError("option '" + key + "' is not an integer");
  return v;
}

inline double opt_double(const RunConfig& c, const std::string& key) {
  double v = 0;
  if (!detail::parse_double(detail::raw_option(c, key), v)) throw ConfigError("option '" + key + "' is not a number");
  return v;
}

inline bool opt_bool(const RunConfig& c, const std::string& key) {
  bool v = false;
  if (!detail::parse_bool(detail::raw_option(c, key), v)) throw ConfigError("option '" + key + "' is not a boolean");
  return v;
}

inline std::string opt_word(const RunConfig& c, const std::string& key) { return detail::raw_option(c, key); }

// --- axes -------------------------------------------------------------------------

// "name=v1,v2,..." or "name=from:to:count[:log]".
inline SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("axis '" + spec + "': expected name=values");
  SweepAxis a;
  a.name = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
  };
  if (rest.find(':') != std::string::npos) {
    const auto p = split(rest, ':');
    double from = 0, to = 0;
    long long n = 0;
    if (p.size() < 3 || p.size() > 4 || !detail::parse_double(p[0], from) || !detail::parse_double(p[1], to) ||
        !detail::parse_int(p[2], n))
      throw ConfigError("axis '" + spec + "': expected from:to:count[:log]");
    const bool log = p.size() == 4;
    if (log && p[3] != "log") throw ConfigError("axis '" + spec + "': unknown scale '" + p[3] + "'");
    if (n < 1) throw ConfigError("axis '" + spec + "': count must be positive");
    if (log && !(from > 0 && to > 0)) throw ConfigError("axis '" + spec + "': log scale needs positive ends");
    for (long long i = 0; i < n; ++i) {
      const double u = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      a.values.push_back(log ? std::exp(std::log(from) + u * (std::log(to) - std::log(from))) : from + u * (to - from));
    }
    if (a.name == "L")
      for (auto& v : a.values) v = std::round(v);
  } else {
    for (const auto& item : split(rest, ',')) {
      double v = 0;
      if (!detail::parse_double(item, v)) throw ConfigError("axis '" + spec + "': bad value '" + item + "'");
      a.values.push_back(v);
    }
  }
  return a;
}

// --- YAML -------------------------------------------------------------------------

namespace detail {

inline SweepAxis axis_from_yaml(const YAML::Node& n) {
  if (n.IsScalar()) return parse_axis(n.as<std::string>());
  if (!n.IsMap() || !n["name"]) throw ConfigError("axis: expected a map with 'name'");
  const std::string name = n["name"].as<std::string>();
  if (n["values"]) {
    SweepAxis a{name, {}};
    for (const auto& v : n["values"]) a.values.push_back(v.as<double>());
    return a;
  }
  if (n["from"] && n["to"] && n["count"]) {
    std::string spec = name + "=" + n["from"].as<std::string>() + ":" + n["to"].as<std::string>() + ":" +
                       n["count"].as<std::string>();
    if (n["scale"] && n["scale"].as<std::string>() == "log") spec += ":log";
    return parse_axis(spec);
  }
  throw ConfigError("axis '" + name + "': needs 'values' or 'from'/'to'/'count'");
}

inline void emit_axis(YAML::Emitter& e, const char* key, const std::optional<SweepAxis>& a) {
  if (!a) return;
  e << YAML::Key << key << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << a->name;
  e << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double v : a->values) e << fmt_double(v);
  e << YAML::EndSeq << YAML::EndMap;
}

}  // namespace detail

inline RunConfig config_from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig c;
  if (root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config: top level must be a map");
  try {
    for (const auto& kv : root) {
      const std::string key = kv.first.as<std::string>();
      const YAML::Node& v = kv.second;
      if (key == "task") {
        c.task = v.as<std::string>();
      } else if (key == "model") {
        c.model = v.as<std::string>();
      } else if (key == "out") {
        c.out = v.as<std::string>();
      } else if (key == "workers") {
        c.workers = v.as<int>();
      } else if (key == "params") {
        for (const auto& p : v) c.params[p.first.as<std::string>()] = p.second.as<double>();
      } else if (key == "options") {
        for (const auto& p : v) c.options[p.first.as<std::string>()] = p.second.as<std::string>();
      } else if (key == "axis1") {
        c.axis1 = detail::axis_from_yaml(v);
      } else if (key == "axis2") {
        c.axis2 = detail::axis_from_yaml(v);
      } else {
        throw ConfigError("config: unknown key '" + key + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_yaml(ss.str());
}

inline std::string config_to_yaml(const RunConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "task" << YAML::Value << c.task;
  e << YAML::Key << "model" << YAML::Value << c.model;
  e << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : c.params) e << YAML::Key << k << YAML::Value << detail::fmt_double(v);
  e << YAML::EndMap;
  e << YAML::Key << "options" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : c.options) e << YAML::Key << k << YAML::Value << YAML::DoubleQuoted << v;
  e << YAML::EndMap;
  detail::emit_axis(e, "axis1", c.axis1);
  detail::emit_axis(e, "axis2", c.axis2);
  e << YAML::Key << "out" << YAML::Value << YAML::DoubleQuoted << c.out;
  e << YAML::Key << "workers" << YAML::Value << c.workers;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

// key=value. Keys: task, model, out, workers, axis1, axis2, params.<name>,
// options.<name>; a bare name goes to options if it is a known option and to
// params otherwise.
inline void apply_override(RunConfig& c, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set '" + kv + "': expected key=value");
  const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
  auto number = [&](const std::string& name) {
    double d = 0;
    if (!detail::parse_double(val, d)) throw ConfigError("--set " + name + ": '" + val + "' is not a number");
    return d;
  };
  if (key == "task") {
    c.task = val;
  } else if (key == "model") {
    c.model = val;
  } else if (key == "out") {
    c.out = val;
  } else if (key == "workers") {
    long long w = 0;
    if (!detail::parse_int(val, w)) throw ConfigError("--set workers: '" + val + "' is not an integer");
    c.workers = static_cast<int>(w);
  } else if (key == "axis1") {
    c.axis1 = parse_axis(val);
  } else if (key == "axis2") {
    c.axis2 = parse_axis(val);
  } else if (key.rfind("params.", 0) == 0) {
    c.params[key.substr(7)] = number(key);
  } else if (key.rfind("options.", 0) == 0) {
    if (!detail::option_table().count(key.substr(8))) throw ConfigError("--set: unknown option '" + key.substr(8) + "'");
    c.options[key.substr(8)] = val;
  } else if (detail::option_table().count(key)) {
    c.options[key] = val;
  } else {
    c.params[key] = number(key);
  }
}

// --- validation -------------------------------------------------------------------

// Parameters a task needs besides the swept axes.
inline std::vector<std::string> task_required_params(const std::string& task, const std::string& model) {
  const auto& req = model_required_params();
  const auto it = req.find(model);
  if (it == req.end()) return {};
  std::vector<std::string> need;
  const bool lattice = task == "oracle" || task == "phase-diagram" || task == "dynamics";
  for (const auto& k : it->second) {
    if (lattice) {
      need.push_back(k);
    } else if (k == "T") {
      if (task == "gbz" || task == "agbz") need.push_back(k);
    } else if (k != "L" && k != "V") {
      need.push_back(k);
    }
  }
  return need;
}

// Static checks only; returns one message per problem.
inline std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> problems;
  const auto& tasks = known_tasks();
  if (c.task.empty()) {
    problems.push_back("task is not set");
  } else if (std::find(tasks.begin(), tasks.end(), c.task) == tasks.end()) {
    problems.push_back("unknown task '" + c.task + "'");
  }
  const auto& models = model_required_params();
  if (c.model.empty()) {
    problems.push_back("model is not set");
  } else if (!models.count(c.model)) {
    problems.push_back("unknown model '" + c.model + "'");
  }
  if (c.workers < 0) problems.push_back("workers must be >= 0");

  for (const auto& [key, raw] : c.options) {
    const auto it = detail::option_table().find(key);
    if (it == detail::option_table().end()) {
      problems.push_back("unknown option '" + key + "'");
      continue;
    }
    const auto& spec = it->second;
    double d = 0;
    long long i = 0;
    bool b = false;
    bool ok = true;
    switch (spec.kind) {
      case detail::OptKind::integer: ok = detail::parse_int(raw, i); d = static_cast<double>(i); break;
      case detail::OptKind::real: ok = detail::parse_double(raw, d) && std::isfinite(d); break;
      case detail::OptKind::boolean: ok = detail::parse_bool(raw, b); break;
      case detail::OptKind::word: ok = spec.rule.find(raw) != std::string::npos && !raw.empty() &&
                                       raw.find('|') == std::string::npos; break;
    }
    if (!ok) {
      problems.push_back("option '" + key + "' has invalid value '" + raw + "'" +
                         (spec.kind == detail::OptKind::word ? " (expected " + spec.rule + ")" : ""));
      continue;
    }
    const std::string& r = spec.rule;
    const bool bad = (r == ">= 8" && d < 8) || (r == ">= 1" && d < 1) || (r == ">= 0" && d < 0) ||
                     (r == "> 0" && !(d > 0)) || (r == ">= 2" && d < 2) || (r == ">= -1" && d < -1);
    if (bad) problems.push_back("option '" + key + "' must be " + r + " (got " + raw + ")");
  }
  if (c.options.count("T_lo") || c.options.count("T_hi")) {
    double lo = 0, hi = 0;
    if (detail::parse_double(detail::raw_option(c, "T_lo"), lo) && detail::parse_double(detail::raw_option(c, "T_hi"), hi) &&
        !(hi > lo))
      problems.push_back("option 'T_hi' must be > T_lo");
  }

  if (!models.count(c.model)) return problems;
  std::vector<std::string> swept;
  if (c.task == "phase-diagram") {
    if (!c.axis1 || !c.axis2) {
      problems.push_back("phase-diagram needs axis1 and axis2");
    } else {
      for (const auto* a : {&*c.axis1, &*c.axis2}) {
        swept.push_back(a->name);
        const auto& req = models.at(c.model);
        if (std::find(req.begin(), req.end(), a->name) == req.end())
          problems.push_back("axis '" + a->name + "' is not a parameter of " + c.model);
        if (a->values.size() < 2) problems.push_back("axis '" + a->name + "' needs at least 2 values");
        for (double v : a->values)
          if (a->name == "L" && (v < 1 || std::floor(v) != v)) {
            problems.push_back("axis 'L' values must be positive integers");
            break;
          }
      }
      if (c.axis1->name == c.axis2->name) problems.push_back("axis1 and axis2 must differ");
    }
  }
  for (const auto& k : task_required_params(c.task, c.model)) {
    if (std::find(swept.begin(), swept.end(), k) != swept.end()) continue;
    if (!c.params.count(k)) problems.push_back("missing parameter '" + k + "'");
  }
  const auto L = c.params.find("L");
  if (L != c.params.end() && (L->second < 1 || std::floor(L->second) != L->second))
    problems.push_back("parameter 'L' must be a positive integer (got " + detail::fmt_double(L->second) + ")");
  const auto T = c.params.find("T");
  if (T != c.params.end() && !(T->second > 0)) problems.push_back("parameter 'T' must be positive");
  for (const auto& [k, v] : c.params)
    if (!std::isfinite(v)) problems.push_back("parameter '" + k + "' is not finite");
  return problems;
}

}  // namespace floquet
