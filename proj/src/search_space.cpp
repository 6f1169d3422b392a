#include "pvaudit/search_space.hpp"

#include <algorithm>
#include <cmath>

#include "pvaudit/error.hpp"

namespace pvaudit {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
}

}  // namespace

HypothesisCount block_search_space(const CountBlock& block) {
  if (block.covariates > kMaxCovariates) {
    throw OverflowGuardError(block.block_label + ": covariates " +
                             std::to_string(block.covariates) + " exceeds the limit of " +
                             std::to_string(kMaxCovariates));
  }
  if (block.outcomes == 0 || block.predictors == 0) {
    throw DomainError(block.block_label + ": outcomes and predictors must be at least 1");
  }
  HypothesisCount n = block.outcomes;
  n *= block.predictors;
  n <<= block.covariates;
  return n;
}

HypothesisCount study_search_space(const StudyCounts& study) {
  if (study.blocks.empty()) throw EmptyInputError(study.paper_label + ": no count blocks");
  HypothesisCount total = 0;
  for (const auto& b : study.blocks) total += block_search_space(b);
  return total;
}

double to_double(const HypothesisCount& value) { return value.convert_to<double>(); }

double expected_false_positives(const HypothesisCount& n_h, double alpha) {
  check_alpha(alpha);
  if (n_h < 0) throw DomainError("hypothesis count must be non-negative");
  return alpha * to_double(n_h);
}

double interpolated_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw EmptyInputError("quantile of an empty set");
  const double pos = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

LedgerSummary summarize_counts(std::span<const HypothesisCount> counts) {
  if (counts.empty()) throw EmptyInputError("ledger is empty");
  std::vector<HypothesisCount> exact(counts.begin(), counts.end());
  std::sort(exact.begin(), exact.end());
  HypothesisCount total = 0;
  std::vector<double> sorted;
  sorted.reserve(exact.size());
  for (const auto& c : exact) {
    total += c;
    sorted.push_back(to_double(c));
  }

  LedgerSummary s;
  s.n = sorted.size();
  s.minimum = sorted.front();
  s.lower_quartile = interpolated_quantile(sorted, 0.25);
  s.median = interpolated_quantile(sorted, 0.5);
  s.upper_quartile = interpolated_quantile(sorted, 0.75);
  s.maximum = sorted.back();
  s.mean = to_double(total) / static_cast<double>(s.n);
  return s;
}

LedgerSummary summarize_ledger(std::span<const StudyCounts> ledger) {
  std::vector<HypothesisCount> counts;
  counts.reserve(ledger.size());
  for (const auto& study : ledger) counts.push_back(study_search_space(study));
  return summarize_counts(counts);
}

double cohort_false_positives(std::uint64_t n_publications, const HypothesisCount& n_h_median,
                              double alpha) {
  check_alpha(alpha);
  if (n_publications == 0) throw DomainError("publication count must be positive");
  if (n_h_median <= 0) throw DomainError("median hypothesis count must be positive");
  HypothesisCount product = n_h_median;
  product *= n_publications;
  return alpha * to_double(product);
}

}  // namespace pvaudit
