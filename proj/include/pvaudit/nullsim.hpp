#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pvaudit/pvalue_plot.hpp"

namespace pvaudit {

enum class ScenarioKind { Null, FixedEffect, Mixture };

std::string_view to_string(ScenarioKind k);

struct Scenario {
  ScenarioKind kind = ScenarioKind::Null;
  double log_or = 0.0;           // FixedEffect and Mixture
  double effect_fraction = 0.0;  // Mixture only

  static Scenario null() { return {}; }
  static Scenario fixed_effect(double log_or) { return {ScenarioKind::FixedEffect, log_or, 0.0}; }
  static Scenario mixture(double effect_fraction, double log_or) {
    return {ScenarioKind::Mixture, log_or, effect_fraction};
  }
};

struct SimulationConfig {
  Scenario scenario;
  std::size_t k = 27;
  std::size_t trials = 1000;
  double se_low = 0.1;
  double se_high = 0.5;
  std::uint64_t seed = 20230531;
  unsigned threads = 1;  // results do not depend on this
};

void validate(const SimulationConfig& config);

/// Seed of the substream for one trial: splitmix64 over (seed, trial_index).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index);

/// k two-sided p-values for one trial. Each study draws SE ~ U(se_low, se_high),
/// its true effect per the scenario, and y ~ N(effect, SE) by inverse-CDF
/// sampling. Fully determined by (config, trial_index).
std::vector<double> simulate_trial(const SimulationConfig& config, std::uint64_t trial_index);

struct SimulationReport {
  SimulationConfig config;
  std::array<std::size_t, 4> verdict_counts{};  // indexed by Verdict
  double mean_fraction_below_005 = 0.0;
  double mean_p = 0.0;
  double mean_ks_statistic = 0.0;
  double fraction_trials_ks_rejected = 0.0;  // per-trial KS p < 0.05
  double pooled_ks_statistic = 0.0;          // all p-values of all trials
  double pooled_ks_p = 1.0;

  std::size_t count(Verdict v) const { return verdict_counts[static_cast<std::size_t>(v)]; }
  double fraction(Verdict v) const;
};

SimulationReport run_simulation(const SimulationConfig& config,
                                const PlotConfig& plot_config = {});

}  // namespace pvaudit
