#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pvaudit/normal.hpp"

namespace pvaudit {

/// One study (or subgroup) odds ratio with its confidence interval.
struct EffectEstimate {
  std::string study_label;
  std::optional<std::string> subgroup_label;
  double odds_ratio = 1.0;
  double ci_low = 1.0;
  double ci_high = 1.0;
  double ci_level = 0.95;

  /// "Study (subgroup)" or just "Study".
  std::string display_label() const;
};

/// Scale on which the interval is read back into a standard error.
///   NaturalScale: SE = (U - L) / 2q, z = (OR - 1) / SE. Reproduces the
///                 published p-value tables.
///   LogScale:     SE = (ln U - ln L) / 2q, z = ln OR / SE.
enum class ConversionMethod { NaturalScale, LogScale };

std::string_view to_string(ConversionMethod m);
ConversionMethod conversion_method_from_string(std::string_view name);

/// Throws InvalidIntervalError / DomainError when the estimate is unusable.
void validate(const EffectEstimate& e);

/// Soft check: false when the point estimate sits outside its own interval.
/// Literature transcriptions are sometimes inconsistent, so this is a warning.
bool point_inside_interval(const EffectEstimate& e);

/// Two-sided normal multiplier for a confidence level, e.g. 1.959964 for 0.95.
double interval_multiplier(double ci_level);

double standard_error(const EffectEstimate& e, ConversionMethod method);

/// Signed test statistic on the chosen scale.
ZScore z_statistic(const EffectEstimate& e, ConversionMethod method);

Probability p_from_effect(const EffectEstimate& e, ConversionMethod method);

/// Recovers the log-scale interval implied by a log odds ratio and its
/// two-sided p-value. Inverse of p_from_effect(LogScale).
std::pair<double, double> ci_from_p(double estimate_log_or, Probability p, double ci_level = 0.95);

}  // namespace pvaudit
