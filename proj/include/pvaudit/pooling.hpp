#pragma once

#include <Eigen/Core>
#include <span>
#include <string_view>

#include "pvaudit/effects.hpp"

namespace pvaudit {

enum class PoolingMethod { FixedEffect, DerSimonianLaird };

std::string_view to_string(PoolingMethod m);

/// Cochran's Q, the method-of-moments between-study variance, and I^2.
struct Heterogeneity {
  double q_statistic = 0.0;
  double tau_squared = 0.0;
  double i_squared = 0.0;
};

/// Pooled log odds ratio with normal-theory interval and test.
///
/// All pooling runs on the log-OR scale with LogScale standard errors,
/// whatever scale the per-study p-values were reported on.
struct PooledResult {
  PoolingMethod method = PoolingMethod::FixedEffect;
  std::size_t k = 0;
  double pooled_log_or = 0.0;
  double pooled_se = 0.0;
  double pooled_or = 1.0;
  double ci_low = 1.0;
  double ci_high = 1.0;
  double ci_level = 0.95;
  double p_value = 1.0;
  Heterogeneity heterogeneity;
};

/// Inverse-variance fixed-effect pooling. Q and I^2 are reported for the
/// input; tau^2 is always 0.
PooledResult pool_fixed(std::span<const EffectEstimate> effects, double ci_level = 0.95);

/// DerSimonian-Laird random-effects pooling. k = 1 collapses to the
/// fixed-effect identity.
PooledResult pool_dersimonian_laird(std::span<const EffectEstimate> effects,
                                    double ci_level = 0.95);

PooledResult pool(std::span<const EffectEstimate> effects, PoolingMethod method,
                  double ci_level = 0.95);

Heterogeneity heterogeneity_stats(std::span<const EffectEstimate> effects);

// Lower-level forms over log odds ratios and their sampling variances. Sums
// run in the order given; the EffectEstimate overloads sort by label first.
PooledResult pool_fixed(const Eigen::ArrayXd& log_or, const Eigen::ArrayXd& variance,
                        double ci_level = 0.95);
PooledResult pool_dersimonian_laird(const Eigen::ArrayXd& log_or,
                                    const Eigen::ArrayXd& variance, double ci_level = 0.95);
Heterogeneity heterogeneity_stats(const Eigen::ArrayXd& log_or, const Eigen::ArrayXd& variance);

}  // namespace pvaudit
