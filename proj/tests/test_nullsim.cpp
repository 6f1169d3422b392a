#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pvaudit/nullsim.hpp"
#include "pvaudit/report.hpp"

using namespace pvaudit;

TEST_CASE("simulate_trial is fully determined by seed and trial index") {
  SimulationConfig c;
  c.k = 10;
  const auto a = simulate_trial(c, 3);
  const auto b = simulate_trial(c, 3);
  CHECK(a == b);
  CHECK(a != simulate_trial(c, 4));
  c.seed += 1;
  CHECK(a != simulate_trial(c, 3));
}

TEST_CASE("trial independence: computing other trials first changes nothing") {
  SimulationConfig c;
  c.k = 8;
  const auto direct = simulate_trial(c, 17);
  for (std::uint64_t t = 0; t < 17; ++t) (void)simulate_trial(c, t);
  CHECK(simulate_trial(c, 17) == direct);
}

TEST_CASE("fixed effect of zero is the null scenario") {
  SimulationConfig null_cfg;
  null_cfg.k = 12;
  auto zero = null_cfg;
  zero.scenario = Scenario::fixed_effect(0.0);
  for (std::uint64_t t = 0; t < 20; ++t) CHECK(simulate_trial(null_cfg, t) == simulate_trial(zero, t));
}

TEST_CASE("huge effect gives tiny p-values") {
  SimulationConfig c;
  c.k = 30;
  c.scenario = Scenario::fixed_effect(10.0);
  c.se_low = 0.1;
  c.se_high = 0.2;
  for (std::uint64_t t = 0; t < 10; ++t) {
    for (const double p : simulate_trial(c, t)) CHECK(p < 1e-6);
  }
}

TEST_CASE("null p-values are uniform: KS over >= 10,000 draws") {
  for (const std::size_t k : {1, 7, 27}) {
    SimulationConfig c;
    c.k = k;
    std::vector<double> all;
    for (std::uint64_t t = 0; all.size() < 10000; ++t) {
      const auto ps = simulate_trial(c, t);
      all.insert(all.end(), ps.begin(), ps.end());
    }
    std::sort(all.begin(), all.end());
    const double d = ks_statistic_uniform(all);
    const double p = kolmogorov_upper_tail(std::sqrt(static_cast<double>(all.size())) * d);
    CAPTURE(k);
    CHECK(p >= 0.001);
  }
}

TEST_CASE("null mean p over >= 100,000 draws") {
  SimulationConfig c;
  c.k = 100;
  c.trials = 1000;
  const auto r = run_simulation(c);
  CHECK(r.mean_p >= 0.49);
  CHECK(r.mean_p <= 0.51);
  CHECK(r.pooled_ks_p >= 0.001);
}

TEST_CASE("mixture with fraction 1 equals fixed effect in p distribution shape") {
  SimulationConfig c;
  c.k = 20;
  c.trials = 200;
  c.scenario = Scenario::mixture(1.0, 1.0);
  const auto r = run_simulation(c);
  CHECK(r.mean_fraction_below_005 > 0.5);
  c.scenario = Scenario::mixture(0.0, 1.0);
  CHECK(run_simulation(c).mean_fraction_below_005 < 0.1);
}

TEST_CASE("run_simulation: histogram sums to trials") {
  SimulationConfig c;
  c.trials = 1;
  const auto r = run_simulation(c);
  std::size_t total = 0;
  for (const auto n : r.verdict_counts) total += n;
  CHECK(total == 1);
}

TEST_CASE("run_simulation is reproducible and thread-count independent") {
  SimulationConfig c;
  c.k = 27;
  c.trials = 300;
  c.scenario = Scenario::mixture(0.3, 0.8);
  const auto single = dump_canonical(to_json(run_simulation(c)));
  CHECK(single == dump_canonical(to_json(run_simulation(c))));
  c.threads = 4;
  auto threaded = to_json(run_simulation(c));
  CHECK(single == dump_canonical(threaded));
}

TEST_CASE("calibration: null k=27 classifies Uniform45 >= 90%, strong effect EffectLine >= 95%") {
  SimulationConfig null_cfg;
  null_cfg.k = 27;
  null_cfg.trials = 1000;
  CHECK(run_simulation(null_cfg).fraction(Verdict::Uniform45) >= 0.90);

  auto effect_cfg = null_cfg;
  effect_cfg.scenario = Scenario::fixed_effect(1.0);
  effect_cfg.se_low = 0.2;
  effect_cfg.se_high = 0.3;
  CHECK(run_simulation(effect_cfg).fraction(Verdict::EffectLine) >= 0.95);
}

TEST_CASE("invalid configs") {
  SimulationConfig c;
  c.k = 0;
  CHECK_THROWS_AS(simulate_trial(c, 0), ConfigError);
  c = {};
  c.trials = 0;
  CHECK_THROWS_AS(run_simulation(c), ConfigError);
  c = {};
  c.se_low = 0.5;
  c.se_high = 0.1;
  CHECK_THROWS_AS(simulate_trial(c, 0), ConfigError);
  c = {};
  c.scenario = Scenario::mixture(1.5, 1.0);
  CHECK_THROWS_AS(simulate_trial(c, 0), ConfigError);
}

TEST_CASE("config JSON parsing") {
  PlotConfig plot;
  const auto doc = Json::parse(R"({"scenario": {"type": "mixture", "log_or": 0.7, "effect_fraction": 0.25},
                                   "k": 12, "trials": 40, "se_range": [0.2, 0.4], "seed": 9,
                                   "plot": {"alpha": 0.01}})");
  const auto c = simulation_config_from_json(doc, &plot);
  CHECK(c.scenario.kind == ScenarioKind::Mixture);
  CHECK(c.scenario.log_or == 0.7);
  CHECK(c.scenario.effect_fraction == 0.25);
  CHECK(c.k == 12);
  CHECK(c.trials == 40);
  CHECK(c.se_low == 0.2);
  CHECK(c.se_high == 0.4);
  CHECK(c.seed == 9);
  CHECK(plot.alpha == 0.01);
  CHECK_THROWS_AS(simulation_config_from_json(Json::parse(R"({"k": -3})"), nullptr), ConfigError);
  CHECK_THROWS_AS(simulation_config_from_json(Json::parse(R"({"scenario": {"type": "fixed_effect"}})"), nullptr),
                  ConfigError);
  CHECK_THROWS_AS(simulation_config_from_json(Json::parse(R"({"scenario": {"type": "weird"}})"), nullptr),
                  ConfigError);
}
