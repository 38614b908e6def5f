// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "finsler/characterize.hpp"
#include "finsler/metric.hpp"

namespace finsler::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultOracleTol = 1e-6;

/// Contents of an INI file:
///
///   [metric]      name, n (default 3), and exactly one of phi / family
///   [params]      parameter = value, referenced by phi or passed to family
///   [grid]        x0 | r | s_fraction | z = min, max, count   (count >= 2)
///   [tolerances]  vanish_tol, oracle_tol
///
/// Values may be double-quoted; lines starting with ';' or '#' are comments.
struct RunConfig {
  std::optional<MetricSpec> spec;
  std::string phi_source;  // phi text or "family(name)"
  GridSpec grid;
  double vanish_tol = kDefaultVanishTol;
  double oracle_tol = kDefaultOracleTol;
};

/// Throws ConfigError for a missing file, unknown section or key, missing
/// required keys, bad numbers, parse failures of phi and grid counts < 2.
RunConfig load_config(const std::string& path);

/// "min, max, count". Throws ConfigError.
Axis parse_axis(const std::string& text, const std::string& what);

}  // namespace finsler::app
