// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "finsler/expression.hpp"
#include "finsler/metric.hpp"

namespace finsler::app {

inline constexpr std::uint64_t kCorpusSeed = 20240531;

/// Ten Theta(x0, r, s, z) expressions for the Psi-identity suite.
const std::vector<std::string>& psi_corpus();

/// euclidean, randers (c = 0.5), the derived unicorn instance and five
/// seeded random DSL metrics that pass validate on the default grid.
std::vector<MetricSpec> metric_corpus(std::uint64_t seed = kCorpusSeed);

/// Metrics for the characterization concordance and the anomaly scan:
/// the built-in families, unicorn instances and a few DSL metrics.
std::vector<MetricSpec> concordance_corpus();

/// Random point with x0 in [-1, 1], r in [0.2, 1], |s| < 0.9 r, z in
/// [0.1, 2], |ybar| in [0.5, 2], rotated by a random orthogonal matrix.
SamplePoint random_point(int n, std::mt19937_64& rng);

}  // namespace finsler::app
