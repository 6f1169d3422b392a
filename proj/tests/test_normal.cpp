#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracle/normal_cdf_oracle.hpp"
#include "oracle/normal_series.hpp"
#include "pvaudit/normal.hpp"

using namespace pvaudit;

namespace {
double cdf(double z) { return std_normal_cdf(ZScore(z)).value(); }
double quantile(double p) { return std_normal_quantile(Probability(p)).value(); }
}  // namespace

TEST_CASE("normal cdf matches the 40-digit oracle table to 1e-12") {
  for (const auto& pt : test_oracle::kNormalCdf) {
    CAPTURE(pt.z);
    CHECK(std::fabs(cdf(pt.z) - static_cast<double>(pt.cdf)) <= 1e-12);
  }
}

TEST_CASE("series oracle agrees with the frozen table") {
  for (const auto& pt : test_oracle::kNormalCdf) {
    CAPTURE(pt.z);
    CHECK(std::fabs(static_cast<double>(test_oracle::series_cdf(pt.z) - pt.cdf)) <= 1e-14);
  }
}

TEST_CASE("normal cdf worked examples") {
  CHECK(cdf(0.0) == 0.5);
  CHECK(std::fabs(cdf(1.959964) - 0.975) <= 1e-9);
  CHECK(std::fabs(cdf(-1.959964) - 0.025) <= 1e-9);
}

TEST_CASE("normal cdf on a dense grid against the series oracle") {
  for (double z = -8.0; z <= 8.0; z += 0.01) {
    CAPTURE(z);
    CHECK(std::fabs(cdf(z) - static_cast<double>(test_oracle::series_cdf(z))) <= 1e-12);
  }
}

TEST_CASE("normal cdf saturates beyond 38") {
  CHECK(cdf(38.5) == 1.0);
  CHECK(cdf(-38.5) == 0.0);
  CHECK(cdf(1e300) == 1.0);
  CHECK(std_normal_upper_tail(ZScore(40.0)).value() == 0.0);
}

TEST_CASE("non-finite input is a domain error") {
  CHECK_THROWS_AS(ZScore{std::nan("")}, DomainError);
  CHECK_THROWS_AS(ZScore{std::numeric_limits<double>::infinity()}, DomainError);
  CHECK_THROWS_AS(Probability(1.5), DomainError);
  CHECK_THROWS_AS(Probability(-0.1), DomainError);
}

TEST_CASE("normal quantile worked examples") {
  CHECK(std::fabs(quantile(0.5)) <= 1e-15);
  CHECK(std::fabs(quantile(0.975) - 1.959964) <= 1e-6);
  CHECK(std::fabs(quantile(0.95) - 1.644854) <= 1e-6);
  // Bisection on the series oracle.
  for (const double p : {0.975, 0.95, 0.001, 0.3, 1e-8}) {
    CAPTURE(p);
    CHECK(std::fabs(quantile(p) - static_cast<double>(test_oracle::bisect_quantile(p))) <= 1e-9);
  }
}

TEST_CASE("normal quantile rejects the endpoints") {
  CHECK_THROWS_AS(quantile(0.0), DomainError);
  CHECK_THROWS_AS(quantile(1.0), DomainError);
}

TEST_CASE("round trip cdf(quantile(p)) within 1e-10 on a dense grid") {
  double worst = 0.0;
  // Log-spaced into both tails plus a linear sweep of the body.
  for (double e = -10.0; e <= -0.31; e += 0.01) {
    const double p = std::pow(10.0, e);
    worst = std::max(worst, std::fabs(cdf(quantile(p)) - p));
    const double q = 1.0 - p;
    worst = std::max(worst, std::fabs(cdf(quantile(q)) - q));
  }
  for (int i = 1; i < 100000; ++i) {
    const double p = i / 100000.0;
    worst = std::max(worst, std::fabs(cdf(quantile(p)) - p));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("symmetry cdf(z) + cdf(-z) = 1") {
  for (double z = 0.0; z <= 8.0; z += 0.001) {
    CAPTURE(z);
    CHECK(std::fabs(cdf(z) + cdf(-z) - 1.0) <= 1e-14);
  }
}

TEST_CASE("monotone on a random grid") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-40.0, 40.0);
  std::vector<double> zs(5000);
  for (auto& z : zs) z = dist(gen);
  std::sort(zs.begin(), zs.end());
  for (std::size_t i = 1; i < zs.size(); ++i) CHECK(cdf(zs[i - 1]) <= cdf(zs[i]));
}

TEST_CASE("two-sided p") {
  CHECK(two_sided_p(ZScore(0.0)).value() == 1.0);
  CHECK(std::fabs(two_sided_p(ZScore(-1.959964)).value() - 0.05) <= 1e-8);
  CHECK(two_sided_p(ZScore(3.0)).value() == two_sided_p(ZScore(-3.0)).value());
}
