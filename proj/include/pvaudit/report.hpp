#pragma once

#include <json.hpp>
#include <span>
#include <string>

#include "pvaudit/effects.hpp"
#include "pvaudit/nullsim.hpp"
#include "pvaudit/pooling.hpp"
#include "pvaudit/pvalue_plot.hpp"
#include "pvaudit/search_space.hpp"

namespace pvaudit {

using Json = nlohmann::json;

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Rounds to 6 significant digits so dumped JSON is diff-stable.
double json_number(double value);

/// Exact count as a JSON integer when it fits in 64 bits, else a decimal string.
Json json_count(const HypothesisCount& count);

/// Sorted keys, two-space indent, trailing LF.
std::string dump_canonical(const Json& doc);

Json to_json(const EffectEstimate& e);
Json conversion_json(const EffectEstimate& e);  // SE, z and p under both methods
Json to_json(const PooledResult& r);
Json to_json(const PValuePlot& plot);
Json to_json(const PlotClassification& c);
Json to_json(const PlotConfig& c);
Json to_json(const LedgerSummary& s);
Json ledger_json(std::span<const StudyCounts> ledger, double alpha);
Json to_json(const SimulationConfig& c);
Json to_json(const SimulationReport& r);

/// Reads a simulate config:
///   {"scenario": {"type": "null" | "fixed_effect" | "mixture",
///                 "log_or": x, "effect_fraction": f},
///    "k": 27, "trials": 1000, "se_range": [lo, hi], "seed": s,
///    "threads": 1, "plot": {"alpha": ..., ...}}
/// Missing fields keep their defaults. `plot` may be null.
SimulationConfig simulation_config_from_json(const Json& doc, PlotConfig* plot);

}  // namespace pvaudit
