#pragma once

#include <string>
#include <vector>

#include "pvaudit/pvalue_plot.hpp"
#include "pvaudit/report.hpp"

namespace pvaudit {

/// One published value against its recomputation.
struct DiffEntry {
  std::string group;
  std::string label;
  double paper_value = 0.0;
  double computed_value = 0.0;
  double abs_diff = 0.0;
  double tolerance = 0.0;  // 0 means exact integer match
  bool gated = true;       // informational entries never fail the run
  bool pass = false;
  std::string note;
};

/// A published qualitative claim (counts on a figure, a verdict) checked by predicate.
struct ReproductionCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ReproductionDiff {
  std::vector<DiffEntry> entries;
  std::vector<ReproductionCheck> checks;

  std::size_t gated_total() const;
  std::size_t gated_passed() const;
  bool all_passed() const;
};

struct Reproduction {
  ReproductionDiff diff;
  PValuePlot figure2;
  PValuePlot figure3;
  PlotClassification figure2_class;
  PlotClassification figure3_class;
  std::string figure2_svg;
  std::string figure3_svg;
  std::string figure2_csv;
  std::string figure3_csv;
};

/// Recomputes every published number from the embedded fixtures.
/// p-values use the natural-scale conversion.
Reproduction reproduce(const PlotConfig& plot_config = {});

PlotConfig figure_plot_config(const std::string& title);

Json to_json(const ReproductionDiff& diff);

}  // namespace pvaudit
