#include "pvaudit/effects.hpp"

#include <cmath>

namespace pvaudit {

std::string EffectEstimate::display_label() const {
  if (subgroup_label && !subgroup_label->empty()) return study_label + " (" + *subgroup_label + ")";
  return study_label;
}

std::string_view to_string(ConversionMethod m) {
  return m == ConversionMethod::NaturalScale ? "natural" : "log";
}

ConversionMethod conversion_method_from_string(std::string_view name) {
  if (name == "natural") return ConversionMethod::NaturalScale;
  if (name == "log") return ConversionMethod::LogScale;
  throw ConfigError("unknown conversion method '" + std::string(name) + "' (expected natural|log)");
}

void validate(const EffectEstimate& e) {
  if (!std::isfinite(e.odds_ratio) || e.odds_ratio <= 0.0) {
    throw DomainError(e.display_label() + ": odds ratio must be positive");
  }
  if (!std::isfinite(e.ci_low) || !std::isfinite(e.ci_high) || e.ci_low <= 0.0) {
    throw InvalidIntervalError(e.display_label() + ": interval bounds must be positive and finite");
  }
  if (e.ci_high <= e.ci_low) {
    throw InvalidIntervalError(e.display_label() + ": ci_high must exceed ci_low");
  }
  if (!(e.ci_level > 0.0 && e.ci_level < 1.0)) {
    throw DomainError(e.display_label() + ": ci_level must lie in (0, 1)");
  }
}

bool point_inside_interval(const EffectEstimate& e) {
  return e.ci_low <= e.odds_ratio && e.odds_ratio <= e.ci_high;
}

double interval_multiplier(double ci_level) {
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw DomainError("ci_level must lie in (0, 1)");
  return std_normal_quantile(Probability(1.0 - (1.0 - ci_level) / 2.0)).value();
}

double standard_error(const EffectEstimate& e, ConversionMethod method) {
  validate(e);
  const double q = interval_multiplier(e.ci_level);
  const double width = method == ConversionMethod::NaturalScale
                           ? e.ci_high - e.ci_low
                           : std::log(e.ci_high) - std::log(e.ci_low);
  const double se = width / (2.0 * q);
  if (!(se > 0.0)) throw InvalidIntervalError(e.display_label() + ": degenerate interval");
  return se;
}

ZScore z_statistic(const EffectEstimate& e, ConversionMethod method) {
  const double se = standard_error(e, method);
  const double centre =
      method == ConversionMethod::NaturalScale ? e.odds_ratio - 1.0 : std::log(e.odds_ratio);
  return ZScore(centre / se);
}

Probability p_from_effect(const EffectEstimate& e, ConversionMethod method) {
  return two_sided_p(z_statistic(e, method));
}

std::pair<double, double> ci_from_p(double estimate_log_or, Probability p, double ci_level) {
  if (!std::isfinite(estimate_log_or) || estimate_log_or == 0.0) {
    throw DomainError("cannot recover a standard error from an estimate at the null");
  }
  if (p.value() >= 1.0) throw DomainError("cannot recover a standard error from p = 1");
  if (p.value() <= 0.0) throw DomainError("cannot recover a standard error from p = 0");
  const double z = -std_normal_quantile(Probability(p.value() / 2.0)).value();
  if (!(z > 0.0)) throw DomainError("cannot recover a standard error: z = 0");
  const double se = std::fabs(estimate_log_or) / z;
  const double q = interval_multiplier(ci_level);
  return {std::exp(estimate_log_or - q * se), std::exp(estimate_log_or + q * se)};
}

}  // namespace pvaudit
