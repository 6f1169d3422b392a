#include "pvaudit/nullsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace pvaudit {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_unit(std::mt19937_64& gen) {
  return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

struct TrialOutcome {
  Verdict verdict = Verdict::Ambiguous;
  double fraction_below_005 = 0.0;
  double sum_p = 0.0;
  double ks_statistic = 0.0;
  bool ks_rejected = false;
  std::vector<double> pvalues;
};

TrialOutcome run_trial(const SimulationConfig& config, const PlotConfig& plot_config,
                       std::uint64_t index) {
  TrialOutcome out;
  out.pvalues = simulate_trial(config, index);
  std::vector<PlotInput> inputs;
  inputs.reserve(out.pvalues.size());
  for (std::size_t i = 0; i < out.pvalues.size(); ++i) {
    inputs.push_back({"study " + std::to_string(i + 1), out.pvalues[i], false});
    out.sum_p += out.pvalues[i];
  }
  const auto plot = build_plot(inputs, plot_config.alpha);
  const auto cls = classify_plot(plot, plot_config);
  out.verdict = cls.verdict;
  out.fraction_below_005 =
      static_cast<double>(std::count_if(out.pvalues.begin(), out.pvalues.end(),
                                        [](double p) { return p < 0.05; })) /
      static_cast<double>(out.pvalues.size());
  out.ks_statistic = cls.diagnostics.ks_statistic;
  out.ks_rejected = cls.diagnostics.ks_p < 0.05;
  return out;
}

}  // namespace

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Null:
      return "null";
    case ScenarioKind::FixedEffect:
      return "fixed_effect";
    case ScenarioKind::Mixture:
      return "mixture";
  }
  return "null";
}

void validate(const SimulationConfig& c) {
  if (c.k < 1) throw ConfigError("k must be at least 1");
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (!(c.se_low > 0.0) || !(c.se_low <= c.se_high) || !std::isfinite(c.se_high)) {
    throw ConfigError("se_range must satisfy 0 < low <= high");
  }
  if (!std::isfinite(c.scenario.log_or)) throw ConfigError("log_or must be finite");
  if (c.scenario.kind == ScenarioKind::Mixture &&
      !(c.scenario.effect_fraction >= 0.0 && c.scenario.effect_fraction <= 1.0)) {
    throw ConfigError("effect_fraction must lie in [0, 1]");
  }
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_index) {
  return splitmix64(splitmix64(seed) ^ trial_index);
}

std::vector<double> simulate_trial(const SimulationConfig& config, std::uint64_t trial_index) {
  validate(config);
  std::mt19937_64 gen(trial_seed(config.seed, trial_index));
  std::vector<double> pvalues;
  pvalues.reserve(config.k);
  for (std::size_t i = 0; i < config.k; ++i) {
    const double se = config.se_low + (config.se_high - config.se_low) * open_unit(gen);
    double effect = 0.0;
    switch (config.scenario.kind) {
      case ScenarioKind::Null:
        break;
      case ScenarioKind::FixedEffect:
        effect = config.scenario.log_or;
        break;
      case ScenarioKind::Mixture:
        if (open_unit(gen) < config.scenario.effect_fraction) effect = config.scenario.log_or;
        break;
    }
    const double noise = std_normal_quantile(Probability(open_unit(gen))).value();
    const double y = effect + se * noise;
    pvalues.push_back(two_sided_p(ZScore(y / se)).value());
  }
  return pvalues;
}

double SimulationReport::fraction(Verdict v) const {
  return config.trials ? static_cast<double>(count(v)) / static_cast<double>(config.trials) : 0.0;
}

SimulationReport run_simulation(const SimulationConfig& config, const PlotConfig& plot_config) {
  validate(config);
  validate(plot_config);

  std::vector<TrialOutcome> outcomes(config.trials);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < config.trials; ++t) outcomes[t] = run_trial(config, plot_config, t);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < config.trials; t += workers) {
          outcomes[t] = run_trial(config, plot_config, t);
        }
      });
    }
  }

  // Aggregate in trial order so floating sums never depend on scheduling.
  SimulationReport report;
  report.config = config;
  double sum_fraction = 0.0;
  double sum_p = 0.0;
  double sum_ks = 0.0;
  std::size_t rejected = 0;
  std::vector<double> all;
  all.reserve(config.trials * config.k);
  for (const auto& o : outcomes) {
    ++report.verdict_counts[static_cast<std::size_t>(o.verdict)];
    sum_fraction += o.fraction_below_005;
    sum_p += o.sum_p;
    sum_ks += o.ks_statistic;
    rejected += o.ks_rejected ? 1 : 0;
    all.insert(all.end(), o.pvalues.begin(), o.pvalues.end());
  }
  const auto trials = static_cast<double>(config.trials);
  report.mean_fraction_below_005 = sum_fraction / trials;
  report.mean_p = sum_p / static_cast<double>(all.size());
  report.mean_ks_statistic = sum_ks / trials;
  report.fraction_trials_ks_rejected = static_cast<double>(rejected) / trials;
  std::sort(all.begin(), all.end());
  report.pooled_ks_statistic = ks_statistic_uniform(all);
  report.pooled_ks_p =
      kolmogorov_upper_tail(std::sqrt(static_cast<double>(all.size())) * report.pooled_ks_statistic);
  return report;
}

}  // namespace pvaudit
