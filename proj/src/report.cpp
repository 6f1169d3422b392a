#include "pvaudit/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <type_traits>

namespace pvaudit {

double json_number(double value) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return std::strtod(buf, nullptr);
}

Json json_count(const HypothesisCount& count) {
  if (count >= 0 && count <= std::numeric_limits<std::uint64_t>::max()) {
    return count.convert_to<std::uint64_t>();
  }
  return count.str();
}

std::string dump_canonical(const Json& doc) { return doc.dump(2) + "\n"; }

Json to_json(const EffectEstimate& e) {
  Json j;
  j["study_label"] = e.study_label;
  j["subgroup_label"] = e.subgroup_label ? Json(*e.subgroup_label) : Json(nullptr);
  j["odds_ratio"] = json_number(e.odds_ratio);
  j["ci_low"] = json_number(e.ci_low);
  j["ci_high"] = json_number(e.ci_high);
  j["ci_level"] = json_number(e.ci_level);
  return j;
}

Json conversion_json(const EffectEstimate& e) {
  Json j = to_json(e);
  for (const auto method : {ConversionMethod::NaturalScale, ConversionMethod::LogScale}) {
    Json m;
    m["standard_error"] = json_number(standard_error(e, method));
    m["z"] = json_number(z_statistic(e, method).value());
    m["p_value"] = json_number(p_from_effect(e, method).value());
    j[std::string(to_string(method))] = m;
  }
  j["point_inside_interval"] = point_inside_interval(e);
  return j;
}

Json to_json(const PooledResult& r) {
  return {
      {"method", std::string(to_string(r.method))},
      {"k", r.k},
      {"pooled_log_or", json_number(r.pooled_log_or)},
      {"pooled_se", json_number(r.pooled_se)},
      {"pooled_or", json_number(r.pooled_or)},
      {"ci_low", json_number(r.ci_low)},
      {"ci_high", json_number(r.ci_high)},
      {"ci_level", json_number(r.ci_level)},
      {"p_value", json_number(r.p_value)},
      {"q_statistic", json_number(r.heterogeneity.q_statistic)},
      {"tau_squared", json_number(r.heterogeneity.tau_squared)},
      {"i_squared", json_number(r.heterogeneity.i_squared)},
  };
}

Json to_json(const PValuePlot& plot) {
  Json points = Json::array();
  for (const auto& pt : plot.points) {
    points.push_back({{"rank", pt.rank},
                      {"label", pt.label},
                      {"p_value", json_number(pt.p)},
                      {"negative_effect", pt.negative_effect}});
  }
  return {{"n", plot.n()},
          {"alpha", json_number(plot.alpha)},
          {"n_below_alpha", plot.n_below_alpha},
          {"n_negative_below_alpha", plot.n_negative_below_alpha()},
          {"points", points}};
}

Json to_json(const PlotClassification& c) {
  const auto& d = c.diagnostics;
  Json diag{{"ks_statistic", json_number(d.ks_statistic)},
            {"ks_p", json_number(d.ks_p)},
            {"fraction_below_alpha", json_number(d.fraction_below_alpha)},
            {"excess_tail_p", json_number(d.excess_tail_p)},
            {"changepoint_index", nullptr},
            {"segment_slopes", nullptr},
            {"rss_reduction", nullptr},
            {"first_segment_mean_p", nullptr}};
  if (d.changepoint_index) diag["changepoint_index"] = *d.changepoint_index;
  if (d.segment_slopes) {
    diag["segment_slopes"] = {json_number(d.segment_slopes->first),
                              json_number(d.segment_slopes->second)};
  }
  if (d.rss_reduction) diag["rss_reduction"] = json_number(*d.rss_reduction);
  if (d.first_segment_mean_p) diag["first_segment_mean_p"] = json_number(*d.first_segment_mean_p);
  return {{"verdict", std::string(to_string(c.verdict))},
          {"rule", c.rule},
          {"diagnostics", diag},
          {"procedure", "operationalized: KS + below-alpha fraction + two-segment fit"}};
}

Json to_json(const PlotConfig& c) {
  return {{"alpha", json_number(c.alpha)},
          {"uniform_ks_threshold", json_number(c.uniform_ks_threshold)},
          {"excess_small_p_threshold", json_number(c.excess_small_p_threshold)},
          {"effect_majority_fraction", json_number(c.effect_majority_fraction)},
          {"bilinear_min_segment", c.bilinear_min_segment},
          {"bilinear_rss_reduction", json_number(c.bilinear_rss_reduction)},
          {"min_points", c.min_points}};
}

Json to_json(const LedgerSummary& s) {
  return {{"n", s.n},
          {"minimum", json_number(s.minimum)},
          {"lower_quartile", json_number(s.lower_quartile)},
          {"median", json_number(s.median)},
          {"upper_quartile", json_number(s.upper_quartile)},
          {"maximum", json_number(s.maximum)},
          {"mean", json_number(s.mean)},
          {"mean_rounded", std::llround(s.mean)}};
}

Json ledger_json(std::span<const StudyCounts> ledger, double alpha) {
  Json studies = Json::array();
  for (const auto& s : ledger) {
    Json blocks = Json::array();
    for (const auto& b : s.blocks) {
      blocks.push_back({{"block_label", b.block_label},
                        {"outcomes", b.outcomes},
                        {"predictors", b.predictors},
                        {"covariates", b.covariates},
                        {"notes", b.notes},
                        {"n_h", json_count(block_search_space(b))}});
    }
    const auto n_h = study_search_space(s);
    studies.push_back({{"paper_label", s.paper_label},
                       {"region", s.region},
                       {"blocks", blocks},
                       {"n_h", json_count(n_h)},
                       {"expected_false_positives",
                        json_number(expected_false_positives(n_h, alpha))}});
  }
  return {{"alpha", json_number(alpha)},
          {"studies", studies},
          {"summary", to_json(summarize_ledger(ledger))}};
}

Json to_json(const SimulationConfig& c) {
  Json scenario{{"type", std::string(to_string(c.scenario.kind))}};
  if (c.scenario.kind != ScenarioKind::Null) scenario["log_or"] = json_number(c.scenario.log_or);
  if (c.scenario.kind == ScenarioKind::Mixture) {
    scenario["effect_fraction"] = json_number(c.scenario.effect_fraction);
  }
  return {{"scenario", scenario},
          {"k", c.k},
          {"trials", c.trials},
          {"se_range", {json_number(c.se_low), json_number(c.se_high)}},
          {"seed", c.seed}};
}

Json to_json(const SimulationReport& r) {
  Json hist;
  for (const auto v : {Verdict::Uniform45, Verdict::EffectLine, Verdict::Bilinear,
                       Verdict::Ambiguous}) {
    hist[std::string(to_string(v))] = r.count(v);
  }
  return {{"config", to_json(r.config)},
          {"verdict_histogram", hist},
          {"mean_fraction_below_0_05", json_number(r.mean_fraction_below_005)},
          {"mean_p", json_number(r.mean_p)},
          {"ks",
           {{"mean_statistic", json_number(r.mean_ks_statistic)},
            {"fraction_trials_rejected_0_05", json_number(r.fraction_trials_ks_rejected)},
            {"pooled_statistic", json_number(r.pooled_ks_statistic)},
            {"pooled_p", json_number(r.pooled_ks_p)}}},
          {"version", kToolkitVersion}};
}

namespace {

template <typename T>
void read_field(const Json& obj, const char* key, T& target) {
  if (!obj.contains(key)) return;
  if constexpr (std::is_unsigned_v<T>) {
    if (!obj.at(key).is_number_unsigned()) {
      throw ConfigError(std::string("config field '") + key + "' must be a non-negative integer");
    }
  }
  try {
    target = obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

}  // namespace

SimulationConfig simulation_config_from_json(const Json& doc, PlotConfig* plot) {
  if (!doc.is_object()) throw ConfigError("simulation config must be a JSON object");
  SimulationConfig c;
  if (doc.contains("scenario")) {
    const auto& s = doc.at("scenario");
    if (!s.is_object()) throw ConfigError("scenario must be an object");
    std::string type = "null";
    read_field(s, "type", type);
    if (type == "null") {
      c.scenario = Scenario::null();
    } else if (type == "fixed_effect") {
      c.scenario.kind = ScenarioKind::FixedEffect;
    } else if (type == "mixture") {
      c.scenario.kind = ScenarioKind::Mixture;
    } else {
      throw ConfigError("unknown scenario type '" + type + "'");
    }
    if (c.scenario.kind != ScenarioKind::Null) {
      if (!s.contains("log_or")) throw ConfigError("scenario needs log_or");
      read_field(s, "log_or", c.scenario.log_or);
    }
    if (c.scenario.kind == ScenarioKind::Mixture) {
      if (!s.contains("effect_fraction")) throw ConfigError("mixture needs effect_fraction");
      read_field(s, "effect_fraction", c.scenario.effect_fraction);
    }
  }
  read_field(doc, "k", c.k);
  read_field(doc, "trials", c.trials);
  read_field(doc, "seed", c.seed);
  read_field(doc, "threads", c.threads);
  if (doc.contains("se_range")) {
    const auto& r = doc.at("se_range");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
      throw ConfigError("se_range must be [low, high]");
    }
    c.se_low = r[0].get<double>();
    c.se_high = r[1].get<double>();
  }
  if (plot && doc.contains("plot")) {
    const auto& p = doc.at("plot");
    if (!p.is_object()) throw ConfigError("plot must be an object");
    read_field(p, "alpha", plot->alpha);
    read_field(p, "uniform_ks_threshold", plot->uniform_ks_threshold);
    read_field(p, "excess_small_p_threshold", plot->excess_small_p_threshold);
    read_field(p, "effect_majority_fraction", plot->effect_majority_fraction);
    read_field(p, "bilinear_min_segment", plot->bilinear_min_segment);
    read_field(p, "bilinear_rss_reduction", plot->bilinear_rss_reduction);
    read_field(p, "min_points", plot->min_points);
    validate(*plot);
  }
  validate(c);
  return c;
}

}  // namespace pvaudit
