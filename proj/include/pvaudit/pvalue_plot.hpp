#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pvaudit/effects.hpp"

namespace pvaudit {

/// One labelled p-value going into a plot.
struct PlotInput {
  std::string label;
  double p = 1.0;
  bool negative_effect = false;  // source OR < 1
};

struct PlotPoint {
  std::size_t rank = 0;  // 1-based
  double p = 1.0;
  std::string label;
  bool negative_effect = false;
};

/// P-values sorted ascending against their ranks 1..n.
struct PValuePlot {
  std::vector<PlotPoint> points;
  double alpha = 0.05;
  std::size_t n_below_alpha = 0;

  std::size_t n() const noexcept { return points.size(); }
  std::size_t n_negative_below_alpha() const;
};

enum class Verdict { Uniform45, EffectLine, Bilinear, Ambiguous };

std::string_view to_string(Verdict v);

/// Thresholds that turn the visual reading of a p-value plot into a
/// decidable procedure, plus render styling.
struct PlotConfig {
  double alpha = 0.05;
  double uniform_ks_threshold = 0.05;
  // Uniform45 also tolerates a count below alpha that is not a significant
  // excess: P(Binom(n, alpha) >= count) >= this.
  double excess_small_p_threshold = 0.01;
  double effect_majority_fraction = 0.5;
  std::size_t bilinear_min_segment = 3;
  double bilinear_rss_reduction = 0.5;
  std::size_t min_points = 5;

  int width = 640;
  int height = 480;
  int margin = 56;
  double marker_radius = 4.0;
  int font_size = 12;
  std::string title;
};

void validate(const PlotConfig& config);

struct PlotDiagnostics {
  double ks_statistic = 0.0;
  double ks_p = 1.0;
  double fraction_below_alpha = 0.0;
  double excess_tail_p = 1.0;  // P(Binom(n, alpha) >= n_below_alpha)
  std::optional<std::size_t> changepoint_index;  // last rank of the first segment
  std::optional<std::pair<double, double>> segment_slopes;
  std::optional<double> rss_reduction;
  std::optional<double> first_segment_mean_p;
};

struct PlotClassification {
  Verdict verdict = Verdict::Ambiguous;
  std::string rule;  // which step of the procedure decided
  PlotDiagnostics diagnostics;
};

/// Sorts ascending by p, ties broken by label. Throws EmptyInputError or
/// DomainError for p outside [0, 1].
PValuePlot build_plot(std::span<const PlotInput> pvalues, double alpha = 0.05);

/// Converts each estimate with `method` and flags OR < 1 as negative.
PValuePlot build_plot(std::span<const EffectEstimate> effects, ConversionMethod method,
                      double alpha = 0.05);

/// Decision procedure, first match wins:
///  1. EffectLine  if the fraction below alpha exceeds effect_majority_fraction
///  2. Uniform45   if KS p >= uniform_ks_threshold and small p-values are not
///                 in excess (fraction <= 2 alpha, or binomial tail test)
///  3. Bilinear    if the best two-segment fit cuts RSS by bilinear_rss_reduction
///                 and the first segment's mean p is below alpha
///  4. Ambiguous
/// Plots with fewer than min_points points are Ambiguous.
PlotClassification classify_plot(const PValuePlot& plot, const PlotConfig& config = {});

/// One-sample Kolmogorov-Smirnov statistic against Uniform(0, 1) for sorted data.
double ks_statistic_uniform(std::span<const double> sorted);

/// Asymptotic Kolmogorov upper tail P(K > lambda).
double kolmogorov_upper_tail(double lambda);

/// P(X >= count) for X ~ Binomial(n, prob).
double binomial_upper_tail(std::size_t count, std::size_t n, double prob);

struct SegmentFit {
  std::size_t first_segment_size = 0;
  double slope_first = 0.0;
  double slope_second = 0.0;
  double rss_one_line = 0.0;
  double rss_two_lines = 0.0;
};

/// Best two-segment least-squares fit of y against x = 1..n, each segment at
/// least min_segment points. Empty when n < 2 * min_segment.
std::optional<SegmentFit> best_two_segment_fit(std::span<const double> y,
                                               std::size_t min_segment);

enum class RenderFormat { Svg, Csv };

/// SVG: rank vs p with the p = rank/n reference line, a rule at alpha and
/// diamond markers for negative effects. CSV: rank,label,p_value,below_alpha,
/// negative_effect. Output is byte-deterministic.
std::string render_plot(const PValuePlot& plot, const PlotClassification& classification,
                        const PlotConfig& config, RenderFormat format);

/// Reads the CSV written by render_plot back into a plot.
PValuePlot parse_plot_csv(std::string_view text, double alpha, const std::string& source = "<plot>");

}  // namespace pvaudit
