// SPDX-License-Identifier: Apache-2.0
#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace finsler::app {

Format format_from_string(const std::string& s) {
  if (s == "text") return Format::Text;
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  throw std::invalid_argument("unknown format '" + s + "'");
}

CheckResult CheckResult::at_most(std::string name, double value, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tol;
  c.relation = "<=";
  c.pass = value <= tol;
  return c;
}

CheckResult CheckResult::at_least(std::string name, double value, double tol) {
  CheckResult c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tol;
  c.relation = ">=";
  c.pass = value >= tol;
  return c;
}

CheckResult CheckResult::equals(std::string name, std::string observed, std::string expected) {
  CheckResult c;
  c.name = std::move(name);
  c.relation = "==";
  c.pass = observed == expected;
  c.observed = std::move(observed);
  c.expected = std::move(expected);
  return c;
}

CheckResult CheckResult::flag(std::string name, bool pass, std::string observed) {
  CheckResult c;
  c.name = std::move(name);
  c.pass = pass;
  if (!observed.empty()) c.observed = std::move(observed);
  return c;
}

bool Report::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json to_json(const CheckResult& c) {
  Json j;
  j["name"] = c.name;
  if (c.value) j["value"] = number(*c.value);
  if (c.tolerance) j["tolerance"] = number(*c.tolerance);
  if (!c.relation.empty()) j["relation"] = c.relation;
  if (c.observed) j["observed"] = *c.observed;
  if (c.expected) j["expected"] = *c.expected;
  j["pass"] = c.pass;
  return j;
}

Json to_json(const Report& r) {
  Json j;
  j["command"] = r.command;
  j["options"] = r.options;
  j["spec"] = r.spec;
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  j["checks"] = std::move(checks);
  j["details"] = r.details;
  j["verdict"] = r.verdict;
  j["pass"] = r.pass();
  if (r.wall_time) j["wall_time_s"] = number(*r.wall_time);
  return j;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

void write_text(const Report& r, std::ostream& out) {
  out << "command: " << r.command << "\n";
  if (r.spec.contains("metric")) {
    const auto& m = r.spec["metric"];
    if (m.contains("name")) out << "metric:  " << m["name"].get<std::string>();
    if (m.contains("phi")) out << "  phi = " << m["phi"].get<std::string>();
    out << "\n";
  }
  if (r.spec.contains("grid")) out << "grid:    " << r.spec["grid"].get<std::string>() << "\n";
  std::size_t width = 5;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  out << "\n";
  for (const auto& c : r.checks) {
    out << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width) + 2) << c.name;
    if (c.value) out << fmt(*c.value);
    if (c.tolerance) out << " " << c.relation << " " << fmt(*c.tolerance);
    if (c.observed) out << c.observed.value();
    if (c.expected) out << " (expected " << *c.expected << ")";
    out << "\n";
  }
  if (!r.details.empty()) out << "\ndetails: " << r.details.dump(2) << "\n";
  out << "\nverdict: " << r.verdict << "\n";
  out << "overall: " << (r.pass() ? "PASS" : "FAIL") << "\n";
  if (r.wall_time) out << "wall time: " << fmt(*r.wall_time) << " s\n";
}

void write_csv(const Report& r, std::ostream& out) {
  out << "command,check,value,relation,tolerance,observed,expected,pass\n";
  for (const auto& c : r.checks) {
    out << csv_field(r.command) << ',' << csv_field(c.name) << ',' << (c.value ? fmt(*c.value) : "") << ','
        << c.relation << ',' << (c.tolerance ? fmt(*c.tolerance) : "") << ',' << csv_field(c.observed.value_or(""))
        << ',' << csv_field(c.expected.value_or("")) << ',' << (c.pass ? "true" : "false") << "\n";
  }
}

}  // namespace

void write(const Report& r, Format f, std::ostream& out) {
  switch (f) {
    case Format::Json: out << to_json(r).dump(2) << "\n"; break;
    case Format::Csv: write_csv(r, out); break;
    case Format::Text: write_text(r, out); break;
  }
}

}  // namespace finsler::app
