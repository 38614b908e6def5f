// SPDX-License-Identifier: Apache-2.0
#include "corpus.hpp"

#include <cstdio>
#include <initializer_list>
#include <utility>

#include "finsler/error.hpp"
#include "finsler/unicorn.hpp"

namespace finsler::app {

const std::vector<std::string>& psi_corpus() {
  static const std::vector<std::string> c{
      "s^2*z",
      "exp(s)*arctan(z)",
      "sqrt(z^2+1+0.2*s^2)",
      "log(1+z^2)*cos(s)",
      "z^3-2*s*z+1",
      "sin(s*z)+z",
      "exp(-z)*(1+s^2)",
      "s*(z+0.5)^(-1.5)",
      "exp(x0)*sqrt((z+exp(-r)/sqrt(2))^2+(exp(-r)/sqrt(2))^2)*exp(arctan((z+exp(-r)/sqrt(2))/(exp(-r)/sqrt(2))))",
      "sqrt(z^2+1)+0.3*z+0.1*x0*r*s",
  };
  return c;
}

namespace {

std::vector<double> draw(std::mt19937_64& rng, std::initializer_list<std::pair<double, double>> ranges) {
  std::vector<double> v;
  for (const auto& [lo, hi] : ranges) v.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
  return v;
}

/// Replaces each "{}" with the next value, four decimals.
std::string fill(const std::string& tmpl, std::initializer_list<double> values) {
  std::string out;
  auto it = values.begin();
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl.compare(i, 2, "{}") == 0 && it != values.end()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.4f", *it++);
      out += buf;
      ++i;
    } else {
      out += tmpl[i];
    }
  }
  for (std::size_t pos; (pos = out.find("+-")) != std::string::npos;) out.replace(pos, 2, "-");
  return out;
}

std::string random_metric_text(int family, std::mt19937_64& rng) {
  switch (family) {
    case 0: {
      const auto c = draw(rng, {{0.5, 2.0}, {0.0, 0.3}, {-0.2, 0.2}, {-0.1, 0.1}});
      return fill("sqrt(z^2+{}+{}*s^2)+{}*r*z+{}*x0*s", {c[0], c[1], c[2], c[3]});
    }
    case 1: {
      const auto c = draw(rng, {{-0.3, 0.3}, {0.0, 0.3}, {-0.1, 0.1}});
      return fill("exp({}*x0)*sqrt(z^2+1+{}*r^2*s^2)+{}*r*s", {c[0], c[1], c[2]});
    }
    case 2: {
      const auto c = draw(rng, {{0.5, 2.0}, {0.5, 1.5}, {0.0, 0.5}, {-0.2, 0.2}, {-0.5, 0.5}});
      return fill("sqrt({}*z^2+{}+{}*r^2)+{}*z*exp({}*x0)", {c[0], c[1], c[2], c[3], c[4]});
    }
    case 3: {
      const auto c = draw(rng, {{1.0, 2.0}, {0.5, 1.5}, {-0.1, 0.1}});
      return fill("(z^4+{}*z^2+{})^(0.25)+{}*x0*z", {c[0], c[1], c[2]});
    }
    default: {
      const auto c = draw(rng, {{0.8, 1.5}, {0.0, 0.3}, {-0.2, 0.2}, {-0.2, 0.2}});
      return fill("sqrt(z^2+{}+{}*s^2+{}*s*z)*(1+{}*x0*r)", {c[0], c[1], c[2], c[3]});
    }
  }
}

}  // namespace

std::vector<MetricSpec> metric_corpus(std::uint64_t seed) {
  std::vector<MetricSpec> out{
      MetricSpec::from_family("euclidean"),
      MetricSpec::from_family("randers", {{"c", 0.5}}),
      MetricSpec::from_text(
          "unicorn",
          unicorn_metric(UnicornParams::from_alpha_beta("exp(x0)", "exp(-r)/sqrt(2)", "1")).phi().to_string()),
  };
  std::mt19937_64 rng(seed);
  const GridSpec grid;
  for (int family = 0; family < 5; ++family) {
    for (int attempt = 0;; ++attempt) {
      if (attempt == 50) throw Error("metric_corpus: no valid draw for random family " + std::to_string(family));
      auto spec = MetricSpec::from_text("random-" + std::to_string(family + 1), random_metric_text(family, rng));
      if (validate(spec, grid).pass()) {
        out.push_back(std::move(spec));
        break;
      }
    }
  }
  return out;
}

std::vector<MetricSpec> concordance_corpus() {
  auto unicorn = [](const char* name, const UnicornParams& p) {
    return MetricSpec::from_text(name, unicorn_metric(p).phi().to_string());
  };
  return {
      MetricSpec::from_family("euclidean"),
      MetricSpec::from_family("randers", {{"c", 0.4}}),
      MetricSpec::from_family("unicorn", {{"alpha", 1.0}, {"beta", 1.0}, {"k", 1.0}}),
      unicorn("unicorn-derived", UnicornParams::derived_instance()),
      unicorn("unicorn-derived-k1", UnicornParams::derived_instance("1")),
      unicorn("unicorn-scaled", UnicornParams::from_alpha_beta("exp(x0)", "exp(-r-x0)/sqrt(2)", "1")),
      MetricSpec::from_text("dsl-rz", "sqrt(z^2+1)+0.1*r*z"),
      MetricSpec::from_text("dsl-s", "sqrt(z^2+1+0.2*s^2)+0.1*r*z+0.05*x0*s"),
  };
}

SamplePoint random_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0), rr(0.2, 1.0), frac(-0.9, 0.9), zz(0.1, 2.0),
      uu(0.5, 2.0);
  const double r = rr(rng);
  const ReducedPoint rp{unit(rng), r, frac(rng) * r, zz(rng)};
  return SamplePoint::canonical(n, rp, uu(rng)).rotated(random_orthogonal(n, rng));
}

}  // namespace finsler::app
