#include "pvaudit/pooling.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

namespace pvaudit {
namespace {

// Log odds ratios and their variances, in canonical (label, value) order so
// every sum below is independent of input order.
struct LogScaleData {
  Eigen::ArrayXd y;
  Eigen::ArrayXd v;
};

LogScaleData canonical_log_scale(std::span<const EffectEstimate> effects) {
  if (effects.empty()) throw EmptyInputError("pooling needs at least one effect estimate");
  std::vector<const EffectEstimate*> order;
  order.reserve(effects.size());
  for (const auto& e : effects) {
    validate(e);
    order.push_back(&e);
  }
  std::sort(order.begin(), order.end(), [](const EffectEstimate* a, const EffectEstimate* b) {
    const auto key = [](const EffectEstimate& e) {
      return std::tie(e.study_label, e.subgroup_label, e.odds_ratio, e.ci_low, e.ci_high,
                      e.ci_level);
    };
    return key(*a) < key(*b);
  });

  LogScaleData out{Eigen::ArrayXd(order.size()), Eigen::ArrayXd(order.size())};
  for (Eigen::Index i = 0; i < out.y.size(); ++i) {
    const auto& e = *order[static_cast<std::size_t>(i)];
    const double se = standard_error(e, ConversionMethod::LogScale);
    out.y[i] = std::log(e.odds_ratio);
    out.v[i] = se * se;
  }
  return out;
}

// Neumaier compensated sum.
double compensated_sum(const Eigen::ArrayXd& values) {
  double sum = 0.0;
  double carry = 0.0;
  for (const double x : values) {
    const double t = sum + x;
    carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + carry;
}

double weighted_mean(const Eigen::ArrayXd& w, const Eigen::ArrayXd& y) {
  if (y.size() == 1) return y[0];
  return compensated_sum(w * y) / compensated_sum(w);
}

Heterogeneity heterogeneity_of(const LogScaleData& d) {
  // One study: Q would be rounding residue, which turns I^2 into 1.
  if (d.y.size() == 1) return {};
  const Eigen::ArrayXd w = d.v.inverse();
  const double sum_w = compensated_sum(w);
  const double mean = weighted_mean(w, d.y);
  const double q = compensated_sum(w * (d.y - mean).square());
  const double df = static_cast<double>(d.y.size() - 1);
  const double scale = sum_w - compensated_sum(w.square()) / sum_w;

  Heterogeneity h;
  h.q_statistic = std::max(0.0, q);
  h.tau_squared = scale > 0.0 ? std::max(0.0, (h.q_statistic - df) / scale) : 0.0;
  h.i_squared = h.q_statistic > 0.0 ? std::max(0.0, (h.q_statistic - df) / h.q_statistic) : 0.0;
  return h;
}

PooledResult finish(PoolingMethod method, const LogScaleData& d, const Eigen::ArrayXd& w,
                    const Heterogeneity& h, double ci_level) {
  PooledResult r;
  r.method = method;
  r.k = static_cast<std::size_t>(d.y.size());
  r.pooled_log_or = weighted_mean(w, d.y);
  r.pooled_se = 1.0 / std::sqrt(compensated_sum(w));
  r.pooled_or = std::exp(r.pooled_log_or);
  const double q = interval_multiplier(ci_level);
  r.ci_level = ci_level;
  r.ci_low = std::exp(r.pooled_log_or - q * r.pooled_se);
  r.ci_high = std::exp(r.pooled_log_or + q * r.pooled_se);
  r.p_value = two_sided_p(ZScore(r.pooled_log_or / r.pooled_se)).value();
  r.heterogeneity = h;
  return r;
}

LogScaleData checked(const Eigen::ArrayXd& log_or, const Eigen::ArrayXd& variance) {
  if (log_or.size() == 0) throw EmptyInputError("pooling needs at least one effect estimate");
  if (log_or.size() != variance.size()) {
    throw InvalidIntervalError("log_or and variance differ in length");
  }
  if (!log_or.isFinite().all()) throw DomainError("log odds ratios must be finite");
  if (!(variance > 0.0).all() || !variance.isFinite().all()) {
    throw InvalidIntervalError("variances must be positive and finite");
  }
  return {log_or, variance};
}

}  // namespace

std::string_view to_string(PoolingMethod m) {
  return m == PoolingMethod::FixedEffect ? "fixed" : "dl";
}

namespace {

PooledResult fixed_of(const LogScaleData& d, double ci_level) {
  auto h = heterogeneity_of(d);
  h.tau_squared = 0.0;
  return finish(PoolingMethod::FixedEffect, d, d.v.inverse(), h, ci_level);
}

PooledResult dersimonian_laird_of(const LogScaleData& d, double ci_level) {
  const auto h = heterogeneity_of(d);
  const Eigen::ArrayXd w = (d.v + h.tau_squared).inverse();
  return finish(PoolingMethod::DerSimonianLaird, d, w, h, ci_level);
}

}  // namespace

PooledResult pool_fixed(std::span<const EffectEstimate> effects, double ci_level) {
  return fixed_of(canonical_log_scale(effects), ci_level);
}

PooledResult pool_dersimonian_laird(std::span<const EffectEstimate> effects, double ci_level) {
  return dersimonian_laird_of(canonical_log_scale(effects), ci_level);
}

PooledResult pool_fixed(const Eigen::ArrayXd& log_or, const Eigen::ArrayXd& variance,
                        double ci_level) {
  return fixed_of(checked(log_or, variance), ci_level);
}

PooledResult pool_dersimonian_laird(const Eigen::ArrayXd& log_or,
                                    const Eigen::ArrayXd& variance, double ci_level) {
  return dersimonian_laird_of(checked(log_or, variance), ci_level);
}

Heterogeneity heterogeneity_stats(const Eigen::ArrayXd& log_or, const Eigen::ArrayXd& variance) {
  return heterogeneity_of(checked(log_or, variance));
}

PooledResult pool(std::span<const EffectEstimate> effects, PoolingMethod method,
                  double ci_level) {
  return method == PoolingMethod::FixedEffect ? pool_fixed(effects, ci_level)
                                              : pool_dersimonian_laird(effects, ci_level);
}

Heterogeneity heterogeneity_stats(std::span<const EffectEstimate> effects) {
  return heterogeneity_of(canonical_log_scale(effects));
}

}  // namespace pvaudit
