#include "pvaudit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "pvaudit/csv.hpp"
#include "pvaudit/io.hpp"
#include "pvaudit/pooling.hpp"
#include "pvaudit/pvalue_plot.hpp"
#include "pvaudit/report.hpp"
#include "pvaudit/reproduce.hpp"
#include "pvaudit/search_space.hpp"

namespace pvaudit {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string input;
  std::string output;
  std::string counts;
  std::string method;
  std::string model = "dl";
  std::string out_prefix = "pvalue_plot";
  std::string out_dir = "reproduction";
  std::string title;
  double alpha = 0.05;
  double ci_level = 0.95;
  std::uint64_t publications = 0;
  std::string median_nh;
  unsigned threads = 0;
};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

HypothesisCount parse_count_arg(const std::string& text, const char* name) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError(std::string(name) + " must be a positive integer");
  }
  return HypothesisCount(text);
}

std::string convert_csv(const std::vector<EffectEstimate>& effects, ConversionMethod method) {
  std::string s =
      "study_label,subgroup_label,odds_ratio,ci_low,ci_high,ci_level,method,standard_error,z,"
      "p_value\n";
  for (const auto& e : effects) {
    s += csv::format_row({e.study_label, e.subgroup_label.value_or(""),
                          csv::format_number(e.odds_ratio), csv::format_number(e.ci_low),
                          csv::format_number(e.ci_high), csv::format_number(e.ci_level),
                          std::string(to_string(method)),
                          csv::format_number(standard_error(e, method)),
                          csv::format_number(z_statistic(e, method).value()),
                          csv::format_number(p_from_effect(e, method).value())});
  }
  return s;
}

void warn_inconsistent(const std::vector<EffectEstimate>& effects, std::ostream& err) {
  for (const auto& w : consistency_warnings(effects)) err << "warning: " << w << "\n";
}

int cmd_convert(const Options& o, std::ostream& out, std::ostream& err) {
  const auto effects = ingest_effects(o.input);
  warn_inconsistent(effects, err);
  const auto method = conversion_method_from_string(o.method.empty() ? "log" : o.method);
  emit(out, o.output, convert_csv(effects, method));
  return kExitOk;
}

int cmd_pool(const Options& o, std::ostream& out, std::ostream& err) {
  const auto effects = ingest_effects(o.input);
  warn_inconsistent(effects, err);
  PoolingMethod model;
  if (o.model == "fixed") {
    model = PoolingMethod::FixedEffect;
  } else if (o.model == "dl") {
    model = PoolingMethod::DerSimonianLaird;
  } else {
    throw ConfigError("unknown model '" + o.model + "' (expected fixed|dl)");
  }
  Json doc = to_json(pool(effects, model, o.ci_level));
  doc["input"] = o.input;
  emit(out, o.output, dump_canonical(doc));
  return kExitOk;
}

int cmd_plot(const Options& o, std::ostream& out, std::ostream& err) {
  const auto effects = ingest_effects(o.input);
  warn_inconsistent(effects, err);
  const auto method = conversion_method_from_string(o.method.empty() ? "log" : o.method);
  PlotConfig config;
  config.alpha = o.alpha;
  config.title = o.title;
  validate(config);
  const auto plot = build_plot(effects, method, config.alpha);
  const auto cls = classify_plot(plot, config);

  write_file(o.out_prefix + ".svg", render_plot(plot, cls, config, RenderFormat::Svg));
  write_file(o.out_prefix + ".csv", render_plot(plot, cls, config, RenderFormat::Csv));
  Json doc{{"classification", to_json(cls)},
           {"plot", to_json(plot)},
           {"config", to_json(config)},
           {"conversion_method", std::string(to_string(method))}};
  write_file(o.out_prefix + ".json", dump_canonical(doc));
  out << plot.n() << " p-values, " << plot.n_below_alpha << " below " << config.alpha
      << ", verdict " << to_string(cls.verdict) << "\n";
  return kExitOk;
}

int cmd_count(const Options& o, std::ostream& out) {
  const auto ledger = ingest_counts(o.input);
  emit(out, o.output, dump_canonical(ledger_json(ledger, o.alpha)));
  return kExitOk;
}

int cmd_cohort(const Options& o, std::ostream& out) {
  const auto median = parse_count_arg(o.median_nh, "--median-nh");
  const double value = cohort_false_positives(o.publications, median, o.alpha);
  Json doc{{"publications", o.publications},
           {"median_nh", json_count(median)},
           {"alpha", json_number(o.alpha)},
           {"expected_false_positives", json_number(value)},
           {"expected_false_positives_rounded", std::llround(value)}};
  out << dump_canonical(doc);
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  Json doc;
  try {
    doc = Json::parse(read_file(o.input));
  } catch (const Json::parse_error& e) {
    throw ConfigError(o.input + ": " + e.what());
  }
  PlotConfig plot;
  auto config = simulation_config_from_json(doc, &plot);
  if (o.threads) config.threads = o.threads;
  Json report = to_json(run_simulation(config, plot));
  report["plot_config"] = to_json(plot);
  emit(out, o.output, dump_canonical(report));
  return kExitOk;
}

int cmd_reproduce(const Options& o, std::ostream& out) {
  const auto r = reproduce();
  const fs::path dir = o.out_dir;
  fs::create_directories(dir);
  Json doc = to_json(r.diff);
  doc["figure2"] = {{"plot", to_json(r.figure2)}, {"classification", to_json(r.figure2_class)}};
  doc["figure3"] = {{"plot", to_json(r.figure3)}, {"classification", to_json(r.figure3_class)}};
  write_file(dir / "reproduction.json", dump_canonical(doc));
  write_file(dir / "figure2.svg", r.figure2_svg);
  write_file(dir / "figure3.svg", r.figure3_svg);
  write_file(dir / "figure2.csv", r.figure2_csv);
  write_file(dir / "figure3.csv", r.figure3_csv);

  for (const auto& e : r.diff.entries) {
    if (e.gated && !e.pass) {
      out << "FAIL " << e.group << " / " << e.label << ": paper " << e.paper_value
          << ", computed " << e.computed_value << "\n";
    }
  }
  for (const auto& c : r.diff.checks) {
    if (!c.pass) out << "FAIL " << c.name << " (" << c.detail << ")\n";
  }
  out << r.diff.gated_passed() << "/" << r.diff.gated_total() << " gated values reproduced; "
      << "outputs in " << dir.string() << "\n";
  return r.diff.all_passed() ? kExitOk : kExitInternal;
}

int cmd_audit(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(o.input);
  const auto effects = parse_effects(text, o.input);
  warn_inconsistent(effects, err);
  const auto method = conversion_method_from_string(o.method.empty() ? "log" : o.method);
  PlotConfig config;
  config.alpha = o.alpha;
  validate(config);

  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  Json rows = Json::array();
  for (const auto& e : effects) rows.push_back(conversion_json(e));
  const auto plot = build_plot(effects, method, config.alpha);

  Json doc{{"input",
            {{"file", fs::path(o.input).filename().string()},
             {"rows", effects.size()},
             {"fnv1a64", digest}}},
           {"conversions", rows},
           {"pooled", {{"fixed", to_json(pool_fixed(effects, o.ci_level))},
                       {"dl", to_json(pool_dersimonian_laird(effects, o.ci_level))}}},
           {"plot", {{"classification", to_json(classify_plot(plot, config))},
                     {"n", plot.n()},
                     {"n_below_alpha", plot.n_below_alpha},
                     {"n_negative_below_alpha", plot.n_negative_below_alpha()}}},
           {"search_space", nullptr},
           {"config",
            {{"conversion_method", std::string(to_string(method))},
             {"ci_level", json_number(o.ci_level)},
             {"plot", to_json(config)}}},
           {"version", kToolkitVersion}};
  if (!o.counts.empty()) doc["search_space"] = ledger_json(ingest_counts(o.counts), o.alpha);
  emit(out, o.output, dump_canonical(doc));
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            bool color) {
  const std::string error_tag = color ? "\033[31merror:\033[0m " : "error: ";

  CLI::App app{"Meta-analysis reliability audit: OR/CI to p-value conversion, pooling, "
               "p-value plots and multiple-testing search spaces",
               "pvaudit"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);
  Options o;

  auto* convert = app.add_subcommand("convert", "Effects CSV to p-values CSV");
  convert->add_option("input", o.input, "Effects CSV")->required();
  convert->add_option("--method", o.method, "natural|log (default log)")
      ->check(CLI::IsMember({"natural", "log"}));
  convert->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* pool_cmd = app.add_subcommand("pool", "Effects CSV to pooled-estimate JSON");
  pool_cmd->add_option("input", o.input, "Effects CSV")->required();
  pool_cmd->add_option("--model", o.model, "fixed|dl (default dl)")
      ->check(CLI::IsMember({"fixed", "dl"}));
  pool_cmd->add_option("--ci-level", o.ci_level, "Pooled interval level (default 0.95)");
  pool_cmd->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* plot = app.add_subcommand("plot", "Effects CSV to p-value plot SVG + CSV + classification JSON");
  plot->add_option("input", o.input, "Effects CSV")->required();
  plot->add_option("--method", o.method, "natural|log (default log)")
      ->check(CLI::IsMember({"natural", "log"}));
  plot->add_option("--alpha", o.alpha, "Significance threshold (default 0.05)");
  plot->add_option("--out-prefix", o.out_prefix, "Writes PREFIX.svg, PREFIX.csv, PREFIX.json");
  plot->add_option("--title", o.title, "Figure title");

  auto* count = app.add_subcommand("count", "Counts CSV to search-space ledger JSON");
  count->add_option("input", o.input, "Counts CSV")->required();
  count->add_option("--alpha", o.alpha, "Significance threshold (default 0.05)");
  count->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* cohort = app.add_subcommand("cohort", "Expected chance findings across a cohort's publications");
  cohort->add_option("--publications", o.publications, "Publication count N_C")->required();
  cohort->add_option("--median-nh", o.median_nh, "Median hypotheses per publication")->required();
  cohort->add_option("--alpha", o.alpha, "Significance threshold (default 0.05)");

  auto* simulate = app.add_subcommand("simulate", "Config JSON to Monte Carlo report JSON");
  simulate->add_option("input", o.input, "Simulation config JSON")->required();
  simulate->add_option("--threads", o.threads, "Worker threads (results do not depend on this)");
  simulate->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* repro = app.add_subcommand("reproduce", "Recompute every published number from embedded fixtures");
  repro->add_option("--out-dir", o.out_dir, "Directory for reproduction.json and figures");

  auto* audit = app.add_subcommand("audit", "Effects CSV (+ optional counts CSV) to audit report JSON");
  audit->add_option("input", o.input, "Effects CSV")->required();
  audit->add_option("--counts", o.counts, "Counts CSV for the search-space section");
  audit->add_option("--method", o.method, "natural|log (default log)")
      ->check(CLI::IsMember({"natural", "log"}));
  audit->add_option("--alpha", o.alpha, "Significance threshold (default 0.05)");
  audit->add_option("--ci-level", o.ci_level, "Pooled interval level (default 0.95)");
  audit->add_option("-o,--output", o.output, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolkitVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << error_tag << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  try {
    if (convert->parsed()) return cmd_convert(o, out, err);
    if (pool_cmd->parsed()) return cmd_pool(o, out, err);
    if (plot->parsed()) return cmd_plot(o, out, err);
    if (count->parsed()) return cmd_count(o, out);
    if (cohort->parsed()) return cmd_cohort(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (repro->parsed()) return cmd_reproduce(o, out);
    if (audit->parsed()) return cmd_audit(o, out, err);
  } catch (const InputError& e) {
    err << error_tag << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << error_tag << "internal: " << e.what() << "\n";
    return kExitInternal;
  }
  err << error_tag << "no subcommand\n";
  return kExitInput;
}

}  // namespace pvaudit
