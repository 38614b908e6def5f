// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "finsler/expression.hpp"
#include "finsler/metric.hpp"
#include "report.hpp"

namespace finsler::app {

/// Outcome of one self-test block. `seconds` is wall time and is kept out of
/// the checks so that reports stay reproducible.
struct SuiteResult {
  std::string title;
  std::vector<CheckResult> checks;
  Json details = Json::object();
  double seconds = 0.0;

  bool pass() const;
};

inline constexpr int kOraclePoints = 100;
inline constexpr double kOracleRel = 1e-6;
inline constexpr double kOracleFloor = 1e-10;
inline constexpr double kInvariantTol = 1e-9;
inline constexpr double kIdentityTol = 1e-9;
inline constexpr double kProbeRel = 1e-3;

struct ThetaInput {
  std::string label;
  Expression theta;
  ParameterEnv params;
};
/// The Psi corpus as ThetaInputs.
std::vector<ThetaInput> psi_corpus_inputs();

/// Nine scalar and five vector Psi identities for each Theta over the
/// (x0, r, s, z) grid: scalar identities on the (s, z) slice of every (x0, r)
/// node, vector identities at every grid point (rotated, |ybar| = 1.3).
SuiteResult psi_identity_suite(const std::vector<ThetaInput>& thetas, const GridSpec& grid = {});

/// Closed-form spray against the raw-coordinate oracle at `points` random
/// points per corpus metric.
SuiteResult spray_oracle_suite(const std::vector<MetricSpec>& corpus, int points = kOraclePoints);

/// Berwald and Landsberg closed forms against their oracles (same points),
/// with symmetry and y-contraction invariants. Returns {berwald, landsberg}.
std::pair<SuiteResult, SuiteResult> curvature_oracle_suite(const std::vector<MetricSpec>& corpus,
                                                           int points = kOraclePoints);

/// Derived unicorn instance with k = e^{x0} and k = 1.
SuiteResult unicorn_suite(const GridSpec& grid = {});

/// theta''' at 0+ and 0- for alpha = beta = k = 1.
SuiteResult probe_suite();

/// Pairwise agreement of all characterization paths.
SuiteResult concordance_suite(const std::vector<MetricSpec>& corpus, const GridSpec& grid = {});

/// No regular s-independent metric may classify as LANDSBERG_NOT_BERWALD.
SuiteResult anomaly_suite(const std::vector<MetricSpec>& corpus, const GridSpec& grid = {});

/// Everything above, in order.
std::vector<SuiteResult> selftest_suites();

}  // namespace finsler::app
