// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oracle/longhand_dl.hpp"
#include "oracle/normal_cdf_oracle.hpp"
#include "pvaudit/io.hpp"
#include "pvaudit/normal.hpp"
#include "pvaudit/nullsim.hpp"
#include "pvaudit/pooling.hpp"
#include "pvaudit/reproduce.hpp"
#include "pvaudit/search_space.hpp"

using namespace pvaudit;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

const DiffEntry* find(const ReproductionDiff& d, const std::string& group, const std::string& label) {
  for (const auto& e : d.entries) {
    if (e.group == group && e.label == label) return &e;
  }
  return nullptr;
}

Outcome pvalue_reproduction() {
  const auto start = Clock::now();
  const auto r = reproduce();
  const double elapsed = seconds_since(start);
  int total = 0, tight = 0, flagged_ok = 0, flagged = 0;
  double worst = 0.0;
  for (const auto& e : r.diff.entries) {
    if (e.group != "table2_p_values" && e.group != "table3_p_values") continue;
    ++total;
    worst = std::max(worst, e.abs_diff);
    if (e.abs_diff <= 0.0005) {
      ++tight;
    } else {
      ++flagged;
      if (e.abs_diff <= 0.004) ++flagged_ok;
    }
  }
  const bool pass = total == 40 && tight >= 38 && flagged_ok == flagged && elapsed < 1.0;
  return {pass, fmt("%.0f rows, %.0f within 0.0005, ", total, tight) +
                    fmt("worst |diff| %.4f, %.3f s", worst, elapsed)};
}

Outcome search_space_reproduction() {
  const auto start = Clock::now();
  const auto r = reproduce();
  int checked = 0, failed = 0;
  for (const auto& e : r.diff.entries) {
    if (e.group != "table1_search_space" && e.group != "table1_summary" &&
        e.group != "figure1_search_space" && e.group != "derived_counts") {
      continue;
    }
    ++checked;
    if (!e.pass) ++failed;
  }
  // Direct recomputation from the shipped fixtures, independent of the diff table.
  const auto ledger = ingest_counts(std::string(PVAUDIT_DATA_DIR) + "/table1.csv");
  const auto summary = summarize_ledger(ledger);
  const auto figure = ingest_counts(std::string(PVAUDIT_DATA_DIR) + "/figure1.csv");
  const bool direct = ledger.size() == 14 && summary.median == 15360 &&
                      summary.lower_quartile == 6336 && summary.upper_quartile == 49152 &&
                      summary.maximum == 304128 && std::llround(summary.mean) == 49925 &&
                      study_search_space(figure.at(0)) == 461440 &&
                      std::llround(expected_false_positives(HypothesisCount(461440), 0.05)) == 23072 &&
                      std::llround(expected_false_positives(HypothesisCount(15360), 0.05)) == 768 &&
                      std::llround(cohort_false_positives(107, HypothesisCount(13824), 0.05)) == 73958;
  const double elapsed = seconds_since(start);
  const bool pass = checked >= 14 + 6 + 3 + 3 && failed == 0 && direct && elapsed < 1.0;
  return {pass, fmt("%.0f exact values, %.0f mismatches, %.3f s", checked, failed, elapsed)};
}

Outcome combination() {
  const auto start = Clock::now();
  const std::vector<EffectEstimate> regions{{"region A", std::nullopt, 1.36, 0.76, 2.43, 0.95},
                                            {"region B", std::nullopt, 1.34, 1.13, 1.60, 0.95}};
  const auto r = pool_fixed(regions);
  const double elapsed = seconds_since(start);
  const bool pass = std::fabs(r.pooled_or - 1.34) <= 0.02 && std::fabs(r.ci_low - 1.12) <= 0.02 &&
                    std::fabs(r.ci_high - 1.57) <= 0.02 && elapsed < 1.0;
  return {pass, fmt("OR %.4f (%.4f-%.4f)", r.pooled_or, r.ci_low, r.ci_high)};
}

Outcome figures() {
  const auto a = reproduce();
  const auto b = reproduce();
  const bool counts = a.figure2.n() == 13 && a.figure2.n_below_alpha == 1 && a.figure3.n() == 27 &&
                      a.figure3.n_below_alpha == 6 && a.figure3.n_negative_below_alpha() == 4;
  const bool verdicts = a.figure2_class.verdict != Verdict::EffectLine &&
                        a.figure3_class.verdict != Verdict::EffectLine;
  const bool stable = a.figure2_svg == b.figure2_svg && a.figure3_svg == b.figure3_svg;
  const std::string golden = PVAUDIT_GOLDEN_DIR;
  const bool matches_golden = a.figure2_svg == read_file(golden + "/figure2.svg") &&
                              a.figure3_svg == read_file(golden + "/figure3.svg");
  std::string detail = "figure 2: " + std::string(to_string(a.figure2_class.verdict)) +
                       ", figure 3: " + std::string(to_string(a.figure3_class.verdict));
  if (!counts) detail += "; counts differ";
  if (!stable) detail += "; SVG differs between runs";
  if (!matches_golden) detail += "; SVG differs from golden file";
  return {counts && verdicts && stable && matches_golden, detail};
}

Outcome dersimonian_laird_properties() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> effect(-1.5, 1.5);
  std::uniform_real_distribution<double> variance(0.005, 0.5);
  std::uniform_int_distribution<int> size(1, 30);

  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int k = 2 + t % 9;
    std::vector<double> y(k), v(k);
    for (int i = 0; i < k; ++i) {
      y[i] = effect(rng);
      v[i] = variance(rng);
    }
    const auto oracle = test_oracle::longhand_dl(y, v);
    const Eigen::ArrayXd ya = Eigen::Map<Eigen::ArrayXd>(y.data(), k);
    const Eigen::ArrayXd va = Eigen::Map<Eigen::ArrayXd>(v.data(), k);
    const auto dl = pool_dersimonian_laird(ya, va);
    const auto h = dl.heterogeneity;
    for (const double d : {dl.pooled_log_or - oracle.random_mean, dl.pooled_se - oracle.random_se,
                           h.q_statistic - oracle.q, h.tau_squared - oracle.tau2,
                           h.i_squared - oracle.i2}) {
      worst = std::max(worst, std::fabs(d));
    }
  }

  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const int k = size(rng);
    Eigen::ArrayXd y(k), v(k);
    for (int i = 0; i < k; ++i) {
      y[i] = effect(rng);
      v[i] = variance(rng);
    }
    const auto fe = pool_fixed(y, v);
    const auto dl = pool_dersimonian_laird(y, v);
    const auto& h = dl.heterogeneity;
    const double df = k - 1.0;
    if (h.tau_squared < 0.0) ++violations;
    if (h.q_statistic <= df && h.tau_squared != 0.0) ++violations;
    if (h.i_squared < 0.0 || h.i_squared >= 1.0) ++violations;
    if (dl.pooled_se < fe.pooled_se * (1.0 - 1e-12)) ++violations;
    if (k == 1 && (dl.pooled_log_or != y[0] || std::fabs(dl.pooled_se - std::sqrt(v[0])) > 1e-15 ||
                   h.tau_squared != 0.0)) {
      ++violations;
    }
  }
  // A single-study list is handled by the identity regardless of how k is drawn above.
  Eigen::ArrayXd one(1), one_var(1);
  one << 0.4;
  one_var << 0.09;
  const auto single = pool_dersimonian_laird(one, one_var);
  if (single.pooled_log_or != 0.4 || std::fabs(single.pooled_se - 0.3) > 1e-15) ++violations;

  return {worst <= 1e-10 && violations == 0,
          fmt("oracle max |diff| %.2e, %.0f property violations in 1000 instances", worst, violations)};
}

Outcome calibration() {
  const auto start = Clock::now();
  SimulationConfig null_cfg;
  null_cfg.k = 27;
  null_cfg.trials = 1000;
  null_cfg.threads = 1;
  const double uniform = run_simulation(null_cfg).fraction(Verdict::Uniform45);

  auto effect_cfg = null_cfg;
  effect_cfg.scenario = Scenario::fixed_effect(1.0);
  effect_cfg.se_low = 0.2;
  effect_cfg.se_high = 0.3;
  const double effect = run_simulation(effect_cfg).fraction(Verdict::EffectLine);
  const double elapsed = seconds_since(start);
  return {uniform >= 0.90 && effect >= 0.95 && elapsed < 30.0,
          fmt("null Uniform45 %.3f, effect EffectLine %.3f, %.2f s", uniform, effect, elapsed)};
}

Outcome numerical_core() {
  double worst_round_trip = 0.0;
  auto check = [&](double p) {
    const double back = std_normal_cdf(std_normal_quantile(Probability(p))).value();
    worst_round_trip = std::max(worst_round_trip, std::fabs(back - p));
  };
  // Log-spaced in both tails plus a fine linear sweep of the body.
  for (int i = 0; i <= 100000; ++i) {
    const double p = std::pow(10.0, -10.0 + (10.0 + std::log10(0.5)) * i / 100000.0);
    check(p);
    check(1.0 - p);
  }
  for (int i = 1; i < 100000; ++i) check(i / 100000.0);

  double worst_oracle = 0.0;
  for (const auto& pt : test_oracle::kNormalCdf) {
    const double d = std::fabs(std_normal_cdf(ZScore(pt.z)).value() - static_cast<double>(pt.cdf));
    worst_oracle = std::max(worst_oracle, d);
  }
  return {worst_round_trip <= 1e-10 && worst_oracle <= 1e-12,
          fmt("round trip max %.2e, oracle max %.2e", worst_round_trip, worst_oracle)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 p-value reproduction", pvalue_reproduction},
      {"2 search-space reproduction", search_space_reproduction},
      {"3 inverse-variance combination", combination},
      {"4 figure counts and classification", figures},
      {"5 DerSimonian-Laird oracle and properties", dersimonian_laird_properties},
      {"6 null-uniformity calibration", calibration},
      {"7 numerical core", numerical_core},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
