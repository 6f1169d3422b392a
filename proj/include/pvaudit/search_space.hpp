#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pvaudit {

/// Exact hypothesis counts. 2^C with C up to 128 times O x P needs more than
/// 128 bits, so counts are arbitrary precision.
using HypothesisCount = boost::multiprecision::cpp_int;

inline constexpr std::uint32_t kMaxCovariates = 128;

/// One analysis block of a study: O outcomes, P predictors, C yes/no covariates.
struct CountBlock {
  std::string block_label;
  std::uint64_t outcomes = 1;
  std::uint64_t predictors = 1;
  std::uint32_t covariates = 0;
  std::string notes;  // e.g. how O was derived as a product
};

struct StudyCounts {
  std::string paper_label;
  std::string region;
  std::vector<CountBlock> blocks;
};

/// O x P x 2^C. Throws OverflowGuardError for C > 128, DomainError for O or P = 0.
HypothesisCount block_search_space(const CountBlock& block);

/// Sum of the block search spaces. Throws EmptyInputError when there are no blocks.
HypothesisCount study_search_space(const StudyCounts& study);

/// alpha x N_H.
double expected_false_positives(const HypothesisCount& n_h, double alpha);

struct LedgerSummary {
  std::size_t n = 0;
  double minimum = 0.0;
  double lower_quartile = 0.0;
  double median = 0.0;
  double upper_quartile = 0.0;
  double maximum = 0.0;
  double mean = 0.0;
};

/// Quantile of sorted values by linear interpolation at 1-based position
/// 1 + (n - 1) q.
double interpolated_quantile(std::span<const double> sorted, double q);

LedgerSummary summarize_ledger(std::span<const StudyCounts> ledger);
LedgerSummary summarize_counts(std::span<const HypothesisCount> counts);

/// alpha x N_C x N_H,median: expected chance findings across every
/// publication drawn from one cohort.
double cohort_false_positives(std::uint64_t n_publications, const HypothesisCount& n_h_median,
                              double alpha);

/// Converts an exact count to the nearest double.
double to_double(const HypothesisCount& value);

}  // namespace pvaudit
