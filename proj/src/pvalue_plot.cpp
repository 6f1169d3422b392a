#include "pvaudit/pvalue_plot.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "pvaudit/csv.hpp"

namespace pvaudit {

std::size_t PValuePlot::n_negative_below_alpha() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [&](const auto& pt) {
    return pt.negative_effect && pt.p < alpha;
  }));
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Uniform45:
      return "Uniform45";
    case Verdict::EffectLine:
      return "EffectLine";
    case Verdict::Bilinear:
      return "Bilinear";
    case Verdict::Ambiguous:
      return "Ambiguous";
  }
  return "Ambiguous";
}

void validate(const PlotConfig& c) {
  const auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!open_unit(c.alpha)) throw ConfigError("alpha must lie in (0, 1)");
  if (!(c.uniform_ks_threshold >= 0.0 && c.uniform_ks_threshold <= 1.0)) {
    throw ConfigError("uniform_ks_threshold must lie in [0, 1]");
  }
  if (!(c.excess_small_p_threshold >= 0.0 && c.excess_small_p_threshold <= 1.0)) {
    throw ConfigError("excess_small_p_threshold must lie in [0, 1]");
  }
  if (!(c.effect_majority_fraction >= 0.0 && c.effect_majority_fraction < 1.0)) {
    throw ConfigError("effect_majority_fraction must lie in [0, 1)");
  }
  if (c.bilinear_min_segment < 2) throw ConfigError("bilinear_min_segment must be at least 2");
  if (!open_unit(c.bilinear_rss_reduction)) {
    throw ConfigError("bilinear_rss_reduction must lie in (0, 1)");
  }
  if (c.width <= 0 || c.height <= 0) throw ConfigError("render width and height must be positive");
  if (c.margin < 0 || 2 * c.margin >= std::min(c.width, c.height)) {
    throw ConfigError("render margin leaves no drawing area");
  }
  if (!(c.marker_radius > 0.0) || c.font_size <= 0) {
    throw ConfigError("marker radius and font size must be positive");
  }
}

PValuePlot build_plot(std::span<const PlotInput> pvalues, double alpha) {
  if (pvalues.empty()) throw EmptyInputError("a p-value plot needs at least one p-value");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");

  PValuePlot plot;
  plot.alpha = alpha;
  plot.points.reserve(pvalues.size());
  for (const auto& in : pvalues) {
    if (!(in.p >= 0.0 && in.p <= 1.0)) {
      throw DomainError(in.label + ": p-value outside [0, 1]");
    }
    plot.points.push_back({0, in.p, in.label, in.negative_effect});
  }
  std::sort(plot.points.begin(), plot.points.end(), [](const PlotPoint& a, const PlotPoint& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.label != b.label) return a.label < b.label;
    return a.negative_effect < b.negative_effect;
  });
  for (std::size_t i = 0; i < plot.points.size(); ++i) {
    plot.points[i].rank = i + 1;
    if (plot.points[i].p < alpha) ++plot.n_below_alpha;
  }
  return plot;
}

PValuePlot build_plot(std::span<const EffectEstimate> effects, ConversionMethod method,
                      double alpha) {
  std::vector<PlotInput> inputs;
  inputs.reserve(effects.size());
  for (const auto& e : effects) {
    inputs.push_back({e.display_label(), p_from_effect(e, method).value(), e.odds_ratio < 1.0});
  }
  return build_plot(inputs, alpha);
}

double ks_statistic_uniform(std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double rank = static_cast<double>(i + 1);
    d = std::max({d, rank / n - sorted[i], sorted[i] - (rank - 1.0) / n});
  }
  return d;
}

double kolmogorov_upper_tail(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  constexpr double pi = std::numbers::pi;
  if (lambda < 1.18) {
    // Jacobi theta form of the CDF; converges fast for small lambda.
    const double k = -pi * pi / (8.0 * lambda * lambda);
    double cdf = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double odd = 2.0 * j - 1.0;
      cdf += std::exp(odd * odd * k);
    }
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double tail = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    tail += (j % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(tail, 0.0, 1.0);
}

double binomial_upper_tail(std::size_t count, std::size_t n, double prob) {
  if (count == 0) return 1.0;
  if (count > n) return 0.0;
  if (prob <= 0.0) return 0.0;
  if (prob >= 1.0) return 1.0;
  const double nn = static_cast<double>(n);
  double tail = 0.0;
  for (std::size_t x = count; x <= n; ++x) {
    const double xx = static_cast<double>(x);
    const double log_term = std::lgamma(nn + 1.0) - std::lgamma(xx + 1.0) -
                            std::lgamma(nn - xx + 1.0) + xx * std::log(prob) +
                            (nn - xx) * std::log1p(-prob);
    tail += std::exp(log_term);
  }
  return std::min(1.0, tail);
}

namespace {

struct LineFit {
  double slope = 0.0;
  double rss = 0.0;
};

LineFit fit_line(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) {
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::ArrayXd dx = x - mx;
  const Eigen::ArrayXd dy = y - my;
  const double sxx = dx.square().sum();
  const double slope = sxx > 0.0 ? (dx * dy).sum() / sxx : 0.0;
  return {slope, (dy - slope * dx).square().sum()};
}

}  // namespace

std::optional<SegmentFit> best_two_segment_fit(std::span<const double> y,
                                               std::size_t min_segment) {
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto m = static_cast<Eigen::Index>(std::max<std::size_t>(min_segment, 2));
  if (n < 2 * m) return std::nullopt;

  const Eigen::ArrayXd ys = Eigen::Map<const Eigen::ArrayXd>(y.data(), n);
  const Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(n, 1.0, static_cast<double>(n));

  SegmentFit best;
  best.rss_one_line = fit_line(xs, ys).rss;
  best.rss_two_lines = std::numeric_limits<double>::infinity();
  for (Eigen::Index b = m; b <= n - m; ++b) {
    const auto left = fit_line(xs.head(b), ys.head(b));
    const auto right = fit_line(xs.tail(n - b), ys.tail(n - b));
    const double rss = left.rss + right.rss;
    if (rss < best.rss_two_lines) {
      best.rss_two_lines = rss;
      best.first_segment_size = static_cast<std::size_t>(b);
      best.slope_first = left.slope;
      best.slope_second = right.slope;
    }
  }
  return best;
}

PlotClassification classify_plot(const PValuePlot& plot, const PlotConfig& config) {
  validate(config);
  PlotClassification out;
  auto& diag = out.diagnostics;

  std::vector<double> sorted;
  sorted.reserve(plot.n());
  for (const auto& pt : plot.points) sorted.push_back(pt.p);
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw DomainError("plot points must be sorted by p");
  }

  const std::size_t n = sorted.size();
  const auto below = static_cast<std::size_t>(std::count_if(
      sorted.begin(), sorted.end(), [&](double p) { return p < config.alpha; }));
  if (n > 0) {
    diag.ks_statistic = ks_statistic_uniform(sorted);
    diag.ks_p = kolmogorov_upper_tail(std::sqrt(static_cast<double>(n)) * diag.ks_statistic);
    diag.fraction_below_alpha = static_cast<double>(below) / static_cast<double>(n);
    diag.excess_tail_p = binomial_upper_tail(below, n, config.alpha);
  }
  if (const auto fit = best_two_segment_fit(sorted, config.bilinear_min_segment)) {
    diag.changepoint_index = fit->first_segment_size;
    diag.segment_slopes = std::pair{fit->slope_first, fit->slope_second};
    diag.rss_reduction =
        fit->rss_one_line > 0.0 ? (fit->rss_one_line - fit->rss_two_lines) / fit->rss_one_line
                                : 0.0;
    double head = 0.0;
    for (std::size_t i = 0; i < fit->first_segment_size; ++i) head += sorted[i];
    diag.first_segment_mean_p = head / static_cast<double>(fit->first_segment_size);
  }

  if (n < config.min_points) {
    out.verdict = Verdict::Ambiguous;
    out.rule = "too few points";
    return out;
  }
  if (diag.fraction_below_alpha > config.effect_majority_fraction) {
    out.verdict = Verdict::EffectLine;
    out.rule = "majority below alpha";
    return out;
  }
  const bool no_excess = diag.fraction_below_alpha <= 2.0 * config.alpha ||
                         diag.excess_tail_p >= config.excess_small_p_threshold;
  if (diag.ks_p >= config.uniform_ks_threshold && no_excess) {
    out.verdict = Verdict::Uniform45;
    out.rule = "consistent with uniform";
    return out;
  }
  if (diag.rss_reduction && *diag.rss_reduction >= config.bilinear_rss_reduction &&
      *diag.first_segment_mean_p < config.alpha) {
    out.verdict = Verdict::Bilinear;
    out.rule = "two-segment fit";
    return out;
  }
  out.verdict = Verdict::Ambiguous;
  out.rule = "no rule matched";
  return out;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::size_t tick_step(std::size_t n) {
  for (const std::size_t step : {1, 2, 5, 10, 20, 25, 50, 100, 200, 250, 500, 1000}) {
    if (n / step <= 10) return step;
  }
  return (n / 10 / 1000 + 1) * 1000;
}

std::string render_svg(const PValuePlot& plot, const PlotClassification& cls,
                       const PlotConfig& c) {
  const double left = c.margin;
  const double right = c.width - c.margin / 2.0;
  const double top = c.margin / 2.0 + c.font_size;
  const double bottom = c.height - c.margin;
  const double n = static_cast<double>(std::max<std::size_t>(plot.n(), 1));
  const auto sx = [&](double rank) { return left + (right - left) * rank / n; };
  const auto sy = [&](double p) { return bottom - (bottom - top) * p; };
  const std::string fs = std::to_string(c.font_size);

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
       std::to_string(c.width) + "\" height=\"" + std::to_string(c.height) +
       "\" viewBox=\"0 0 " + std::to_string(c.width) + " " + std::to_string(c.height) +
       "\" font-family=\"sans-serif\" font-size=\"" + fs + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(c.width) + "\" height=\"" +
       std::to_string(c.height) + "\" fill=\"white\"/>\n";
  if (!c.title.empty()) {
    s += "<text class=\"title\" x=\"" + fixed2((left + right) / 2) + "\" y=\"" +
         fixed2(c.margin / 2.0) + "\" text-anchor=\"middle\">" + xml_escape(c.title) +
         "</text>\n";
  }

  // Axes and ticks.
  s += "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  s += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(bottom) + "\" x2=\"" + fixed2(right) +
       "\" y2=\"" + fixed2(bottom) + "\"/>\n";
  s += "<line x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(bottom) + "\" x2=\"" + fixed2(left) +
       "\" y2=\"" + fixed2(top) + "\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = sy(i / 5.0);
    s += "<line x1=\"" + fixed2(left - 4) + "\" y1=\"" + fixed2(y) + "\" x2=\"" + fixed2(left) +
         "\" y2=\"" + fixed2(y) + "\"/>\n";
  }
  const std::size_t step = tick_step(plot.n());
  for (std::size_t r = step; r <= plot.n(); r += step) {
    const double x = sx(static_cast<double>(r));
    s += "<line x1=\"" + fixed2(x) + "\" y1=\"" + fixed2(bottom) + "\" x2=\"" + fixed2(x) +
         "\" y2=\"" + fixed2(bottom + 4) + "\"/>\n";
  }
  s += "</g>\n<g class=\"tick-labels\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = sy(i / 5.0);
    char label[8];
    std::snprintf(label, sizeof label, "%.1f", i / 5.0);
    s += "<text x=\"" + fixed2(left - 8) + "\" y=\"" + fixed2(y + c.font_size / 3.0) +
         "\" text-anchor=\"end\">" + label + "</text>\n";
  }
  for (std::size_t r = step; r <= plot.n(); r += step) {
    s += "<text x=\"" + fixed2(sx(static_cast<double>(r))) + "\" y=\"" +
         fixed2(bottom + 6 + c.font_size) + "\" text-anchor=\"middle\">" + std::to_string(r) +
         "</text>\n";
  }
  s += "</g>\n";
  s += "<text class=\"axis-label\" x=\"" + fixed2((left + right) / 2) + "\" y=\"" +
       fixed2(c.height - c.margin / 4.0) + "\" text-anchor=\"middle\">Rank</text>\n";
  s += "<text class=\"axis-label\" x=\"" + fixed2(c.margin / 4.0) + "\" y=\"" +
       fixed2((top + bottom) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 " +
       fixed2(c.margin / 4.0) + " " + fixed2((top + bottom) / 2) + ")\">p-value</text>\n";

  // Reference 45-degree line p = rank / n and the alpha rule.
  s += "<line class=\"reference\" x1=\"" + fixed2(sx(0)) + "\" y1=\"" + fixed2(sy(0)) +
       "\" x2=\"" + fixed2(sx(n)) + "\" y2=\"" + fixed2(sy(1)) +
       "\" stroke=\"gray\" stroke-width=\"1\"/>\n";
  s += "<line class=\"alpha\" x1=\"" + fixed2(left) + "\" y1=\"" + fixed2(sy(plot.alpha)) +
       "\" x2=\"" + fixed2(right) + "\" y2=\"" + fixed2(sy(plot.alpha)) +
       "\" stroke=\"red\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";

  s += "<g class=\"points\">\n";
  const double r = c.marker_radius;
  for (const auto& pt : plot.points) {
    const double x = sx(static_cast<double>(pt.rank));
    const double y = sy(pt.p);
    const std::string tip = "<title>" + xml_escape(pt.label) + " p=" + csv::format_number(pt.p) +
                            "</title>";
    if (pt.negative_effect) {
      s += "<polygon class=\"marker negative\" points=\"" + fixed2(x) + "," + fixed2(y - r) +
           " " + fixed2(x + r) + "," + fixed2(y) + " " + fixed2(x) + "," + fixed2(y + r) + " " +
           fixed2(x - r) + "," + fixed2(y) + "\" fill=\"white\" stroke=\"black\">" + tip +
           "</polygon>\n";
    } else {
      s += "<circle class=\"marker\" cx=\"" + fixed2(x) + "\" cy=\"" + fixed2(y) + "\" r=\"" +
           fixed2(r) + "\" fill=\"black\">" + tip + "</circle>\n";
    }
  }
  s += "</g>\n";

  const std::string note = std::to_string(plot.n()) + " p-values; " +
                           std::to_string(plot.n_below_alpha) + " below " +
                           csv::format_number(plot.alpha) + "; verdict " +
                           std::string(to_string(cls.verdict));
  s += "<text class=\"note\" x=\"" + fixed2(left + 8) + "\" y=\"" + fixed2(top + c.font_size) +
       "\">" + xml_escape(note) + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string render_csv(const PValuePlot& plot) {
  std::string s = "rank,label,p_value,below_alpha,negative_effect\n";
  for (const auto& pt : plot.points) {
    s += csv::format_row({std::to_string(pt.rank), pt.label, csv::format_number(pt.p),
                          pt.p < plot.alpha ? "true" : "false",
                          pt.negative_effect ? "true" : "false"});
  }
  return s;
}

bool parse_bool(const std::string& field, const std::string& source, std::size_t line,
                std::size_t column) {
  if (field == "true") return true;
  if (field == "false") return false;
  throw ParseError(source, line, column, "expected true or false, got '" + field + "'");
}

}  // namespace

std::string render_plot(const PValuePlot& plot, const PlotClassification& classification,
                        const PlotConfig& config, RenderFormat format) {
  validate(config);
  return format == RenderFormat::Svg ? render_svg(plot, classification, config)
                                     : render_csv(plot);
}

PValuePlot parse_plot_csv(std::string_view text, double alpha, const std::string& source) {
  const auto rows = csv::parse(text, source);
  const std::vector<std::string> header{"rank", "label", "p_value", "below_alpha",
                                        "negative_effect"};
  if (rows.empty() || rows.front().fields != header) {
    throw ParseError(source, 1, 0, "expected header rank,label,p_value,below_alpha,negative_effect");
  }
  std::vector<PlotInput> inputs;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.fields.size() != header.size()) {
      throw ParseError(source, row.line, 0, "expected 5 fields");
    }
    inputs.push_back({row.fields[1], csv::parse_number(row.fields[2], source, row.line, 3, "p_value"),
                      parse_bool(row.fields[4], source, row.line, 5)});
  }
  return build_plot(inputs, alpha);
}

}  // namespace pvaudit
