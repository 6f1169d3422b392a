#pragma once

#include <cmath>
#include <string>

#include "pvaudit/error.hpp"

namespace pvaudit {

/// A probability in [0, 1].
class Probability {
 public:
  explicit Probability(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DomainError("probability out of [0, 1]: " + std::to_string(value));
    }
  }
  double value() const noexcept { return value_; }
  friend auto operator<=>(const Probability&, const Probability&) = default;

 private:
  double value_;
};

/// A finite standard-normal deviate.
class ZScore {
 public:
  explicit ZScore(double value) : value_(value) {
    if (!std::isfinite(value)) throw DomainError("z-score must be finite");
  }
  double value() const noexcept { return value_; }
  friend auto operator<=>(const ZScore&, const ZScore&) = default;

 private:
  double value_;
};

/// Phi(z). Saturates to exactly 0 or 1 for |z| > 38.
Probability std_normal_cdf(ZScore z);

/// Upper tail 1 - Phi(z), without cancellation for large z.
Probability std_normal_upper_tail(ZScore z);

/// Phi^-1(p) for 0 < p < 1. Throws DomainError at or outside the endpoints.
ZScore std_normal_quantile(Probability p);

/// Two-sided p-value 2(1 - Phi(|z|)).
Probability two_sided_p(ZScore z);

}  // namespace pvaudit
