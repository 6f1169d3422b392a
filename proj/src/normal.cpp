#include "pvaudit/normal.hpp"

#include <array>
#include <numbers>

namespace pvaudit {
namespace {

constexpr double kSaturation = 38.0;

// Acklam's rational approximation to the normal quantile, |rel err| < 1.15e-9.
constexpr std::array<double, 6> kA{-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB{-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
constexpr std::array<double, 6> kC{-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kD{7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
constexpr double kLowTail = 0.02425;

double acklam(double p) {
  if (p < kLowTail) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  if (p > 1.0 - kLowTail) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
           ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
         (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

double density(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

}  // namespace

Probability std_normal_cdf(ZScore z) {
  const double x = z.value();
  if (x > kSaturation) return Probability(1.0);
  if (x < -kSaturation) return Probability(0.0);
  return Probability(0.5 * std::erfc(-x / std::numbers::sqrt2));
}

Probability std_normal_upper_tail(ZScore z) {
  const double x = z.value();
  if (x > kSaturation) return Probability(0.0);
  if (x < -kSaturation) return Probability(1.0);
  return Probability(0.5 * std::erfc(x / std::numbers::sqrt2));
}

ZScore std_normal_quantile(Probability p) {
  const double v = p.value();
  if (v <= 0.0 || v >= 1.0) {
    throw DomainError("normal quantile needs 0 < p < 1, got " + std::to_string(v));
  }
  double z = acklam(v);
  // One Newton step against our own CDF, done on whichever tail keeps the
  // residual free of cancellation.
  const double residual = v < 0.5 ? std_normal_cdf(ZScore(z)).value() - v
                                  : (1.0 - v) - std_normal_upper_tail(ZScore(z)).value();
  const double pdf = density(z);
  if (pdf > 0.0) z -= residual / pdf;
  return ZScore(z);
}

Probability two_sided_p(ZScore z) {
  const double tail = std_normal_upper_tail(ZScore(std::fabs(z.value()))).value();
  return Probability(std::fmin(1.0, 2.0 * tail));
}

}  // namespace pvaudit
