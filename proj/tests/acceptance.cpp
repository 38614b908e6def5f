// Acceptance criteria 1-9. One PASS/FAIL line per criterion; exit status 0
// only if all pass.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "corpus.hpp"
#include "suite.hpp"

using namespace finsler::app;

namespace {

int failures = 0;

std::string first_failure(const SuiteResult& s) {
  for (const auto& c : s.checks) {
    if (c.pass) continue;
    std::ostringstream os;
    os << c.name;
    if (c.value) os << " = " << *c.value;
    if (c.observed) os << " (" << *c.observed << ")";
    return os.str();
  }
  return {};
}

double worst(const SuiteResult& s, const std::string& prefix) {
  double m = 0.0;
  for (const auto& c : s.checks)
    if (c.value && c.name.rfind(prefix, 0) == 0) m = std::max(m, *c.value);
  return m;
}

void line(int id, const std::string& title, bool pass, const std::string& summary) {
  std::printf("criterion %d [%s] %s: %s\n", id, pass ? "PASS" : "FAIL", title.c_str(), summary.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void suite_line(int id, const std::string& title, const SuiteResult& s, const std::string& summary,
                double max_seconds = 0.0) {
  bool pass = s.pass();
  std::ostringstream os;
  os << summary << "; " << s.checks.size() << " checks";
  if (max_seconds > 0.0) {
    os << "; runtime " << s.seconds << " s (limit " << max_seconds << " s)";
    pass = pass && s.seconds <= max_seconds;
  }
  if (!s.pass()) os << "; first failing: " << first_failure(s);
  line(id, title, pass, os.str());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

int main() {
  const auto corpus = metric_corpus();

  const auto psi = psi_identity_suite(psi_corpus_inputs());
  suite_line(1, "Psi identities (9 scalar + 5 vector, 10 expressions)", psi,
             "max residual " + fmt(worst(psi, "psi")) + " <= 1e-9", 5.0);

  const auto spray = spray_oracle_suite(corpus);
  suite_line(2, "spray closed form vs oracle (100 points x 8 metrics)", spray,
             "worst diff/tol " + fmt(worst(spray, "spray")) + " <= 1", 30.0);

  const auto [berwald, landsberg] = curvature_oracle_suite(corpus);
  suite_line(3, "Berwald closed form vs oracle, symmetry, y-contraction", berwald,
             "worst diff/tol " + fmt(worst(berwald, "Berwald closed")) + ", symmetry " +
                 fmt(worst(berwald, "Berwald symmetry")) + ", contraction " +
                 fmt(worst(berwald, "Berwald y-contraction")),
             60.0);
  suite_line(4, "Landsberg closed form vs contraction oracle", landsberg,
             "worst diff/tol " + fmt(worst(landsberg, "Landsberg closed")) + ", symmetry " +
                 fmt(worst(landsberg, "Landsberg symmetry")) + ", contraction " +
                 fmt(worst(landsberg, "Landsberg y-contraction")));

  const auto uni = unicorn_suite();
  suite_line(5, "unicorn reproduction", uni,
             "Landsberg max " + fmt(uni.details["landsberg_max"].get<double>()) + " <= 1e-7, Berwald max " +
                 fmt(uni.details["berwald_max"].get<double>()) + " >= 1e-3, k=1 Berwald max " +
                 fmt(uni.details["k1_berwald_max"].get<double>()));

  const auto probe = probe_suite();
  suite_line(6, "regularity probe alpha = beta = k = 1", probe,
             "theta'''(0+) " + fmt(probe.details["theta_ppp_plus"].get<double>()) + " vs " +
                 fmt(probe.details["predicted_plus"].get<double>()) + ", theta'''(0-) " +
                 fmt(probe.details["theta_ppp_minus"].get<double>()) + " vs " +
                 fmt(probe.details["predicted_minus"].get<double>()));

  const auto cc = concordance_corpus();
  const auto conc = concordance_suite(cc);
  suite_line(7, "characterization concordance at tol 1e-7", conc,
             std::to_string(conc.checks.size()) + " metrics, all paths agree");

  auto scan = corpus;
  scan.insert(scan.end(), cc.begin(), cc.end());
  const auto anomaly = anomaly_suite(scan);
  suite_line(8, "no regular s-independent LANDSBERG_NOT_BERWALD metric", anomaly,
             std::to_string(anomaly.checks.size()) + " s-independent metrics scanned, " +
                 std::to_string(anomaly.details["anomalies"].size()) + " anomalies");

  std::ostringstream out1, out8, err1, err8;
  const int code1 = run({"selftest", "--threads", "1", "--format", "json"}, out1, err1);
  const int code8 = run({"selftest", "--threads", "8", "--format", "json"}, out8, err8);
  const bool identical = out1.str() == out8.str();
  line(9, "selftest JSON identical for --threads 1 and --threads 8", identical && code1 == 0 && code8 == 0,
       std::to_string(out1.str().size()) + " bytes, exit codes " + std::to_string(code1) + "/" +
           std::to_string(code8) + (identical ? ", byte-identical" : ", outputs differ"));

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
