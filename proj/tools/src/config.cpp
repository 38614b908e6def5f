// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "finsler/error.hpp"

namespace finsler::app {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

int to_int(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ConfigError(what + ": '" + text + "' is not an integer");
  return v;
}

void only_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : section)
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in [" + name + "]");
}

}  // namespace

Axis parse_axis(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError(what + ": expected 'min, max, count', got '" + text + "'");
  Axis a{to_double(parts[0], what), to_double(parts[1], what), to_int(parts[2], what)};
  if (a.count < 2) throw ConfigError(what + ": count must be at least 2");
  if (!(a.min < a.max)) throw ConfigError(what + ": min must be below max");
  return a;
}

RunConfig load_config(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw ConfigError("cannot open config file '" + path + "'");
  std::ifstream in(path);
  std::stringstream cleaned;
  for (std::string line; std::getline(in, line);) {
    const std::string t = trim(line);
    if (!t.empty() && t.front() == '#') continue;
    cleaned << line << "\n";
  }
  pt::ptree tree;
  try {
    pt::ini_parser::read_ini(cleaned, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(path + ": line " + std::to_string(e.line()) + ": " + e.message());
  }
  for (const auto& [name, _] : tree)
    if (name != "metric" && name != "params" && name != "grid" && name != "tolerances")
      throw ConfigError("unknown section [" + name + "]");

  RunConfig cfg;
  const auto metric = tree.get_child_optional("metric");
  if (!metric) throw ConfigError("missing [metric] section");
  only_keys(*metric, "metric", {"name", "n", "phi", "family"});
  const auto name = metric->get_optional<std::string>("name");
  if (!name) throw ConfigError("[metric] requires 'name'");
  const int n = metric->get_optional<std::string>("n") ? to_int(metric->get<std::string>("n"), "[metric] n") : 3;
  if (n < 1) throw ConfigError("[metric] n must be positive");
  const auto phi = metric->get_optional<std::string>("phi");
  const auto family = metric->get_optional<std::string>("family");
  if (phi.has_value() == family.has_value()) throw ConfigError("[metric] requires exactly one of 'phi' and 'family'");

  ParameterEnv params;
  if (const auto ps = tree.get_child_optional("params")) {
    for (const auto& [key, value] : *ps) {
      try {
        params.set(key, to_double(value.data(), "[params] " + key));
      } catch (const Error& e) {
        throw ConfigError(std::string("[params] ") + e.what());
      }
    }
  }
  try {
    if (phi) {
      cfg.phi_source = trim(*phi);
      cfg.spec = MetricSpec::from_text(trim(*name), cfg.phi_source, params, n);
    } else {
      cfg.phi_source = "family(" + trim(*family) + ")";
      cfg.spec = MetricSpec::from_family(trim(*family), params, n);
      cfg.spec = MetricSpec(trim(*name), cfg.spec->phi(), cfg.spec->params(), n);
    }
  } catch (const Error& e) {
    throw ConfigError(std::string("[metric] ") + e.what());
  }

  if (const auto g = tree.get_child_optional("grid")) {
    only_keys(*g, "grid", {"x0", "r", "s_fraction", "z"});
    if (auto v = g->get_optional<std::string>("x0")) cfg.grid.x0 = parse_axis(*v, "[grid] x0");
    if (auto v = g->get_optional<std::string>("r")) cfg.grid.r = parse_axis(*v, "[grid] r");
    if (auto v = g->get_optional<std::string>("s_fraction")) cfg.grid.s_fraction = parse_axis(*v, "[grid] s_fraction");
    if (auto v = g->get_optional<std::string>("z")) cfg.grid.z = parse_axis(*v, "[grid] z");
  }
  if (const auto t = tree.get_child_optional("tolerances")) {
    only_keys(*t, "tolerances", {"vanish_tol", "oracle_tol"});
    if (auto v = t->get_optional<std::string>("vanish_tol")) cfg.vanish_tol = to_double(*v, "[tolerances] vanish_tol");
    if (auto v = t->get_optional<std::string>("oracle_tol")) cfg.oracle_tol = to_double(*v, "[tolerances] oracle_tol");
  }
  return cfg;
}

}  // namespace finsler::app
