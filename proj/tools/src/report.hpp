// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace finsler::app {

using Json = nlohmann::ordered_json;

enum class Format { Text, Json, Csv };
Format format_from_string(const std::string& s);

/// One pass/fail line. Numeric checks carry value, tolerance and the relation
/// value must satisfy; categorical checks carry observed/expected strings.
struct CheckResult {
  std::string name;
  std::optional<double> value;
  std::optional<double> tolerance;
  std::string relation;  // "<=", ">=", "==", or empty
  std::optional<std::string> observed;
  std::optional<std::string> expected;
  bool pass = false;

  static CheckResult at_most(std::string name, double value, double tol);
  static CheckResult at_least(std::string name, double value, double tol);
  static CheckResult equals(std::string name, std::string observed, std::string expected);
  static CheckResult flag(std::string name, bool pass, std::string observed = {});
};

struct Report {
  std::string command;
  Json options = Json::object();  // echo of the normalized inputs
  Json spec = Json::object();     // metric and grid echo
  std::vector<CheckResult> checks;
  Json details = Json::object();
  std::string verdict;
  std::optional<double> wall_time;

  bool pass() const;
  void add(CheckResult c) { checks.push_back(std::move(c)); }
  void add(const std::vector<CheckResult>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }
};

Json to_json(const Report& r);
Json to_json(const CheckResult& c);
void write(const Report& r, Format f, std::ostream& out);

/// Non-finite doubles become null; finite ones are emitted in shortest
/// round-trip form.
Json number(double v);

}  // namespace finsler::app
