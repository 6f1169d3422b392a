#include "pvaudit/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "pvaudit/csv.hpp"

namespace pvaudit {
namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    if (i) out.push_back('\n');
    out += diagnostics[i].to_string();
  }
  return out;
}

bool header_matches(const std::vector<std::string>& header,
                    const std::vector<std::string_view>& required) {
  if (header.size() < required.size()) return false;
  for (std::size_t i = 0; i < required.size(); ++i) {
    if (header[i] != required[i]) return false;
  }
  return true;
}

std::string joined(const std::vector<std::string_view>& names) {
  std::string out;
  for (const auto n : names) {
    if (!out.empty()) out.push_back(',');
    out += n;
  }
  return out;
}

// Collects diagnostics for one row; csv::parse_number throws ParseError,
// which is turned into a diagnostic so later rows are still checked.
template <typename F>
void guarded(std::vector<Diagnostic>& sink, F&& body) {
  try {
    body();
  } catch (const ParseError& e) {
    sink.push_back({e.file(), e.line(), e.column(), e.what()});
  }
}

}  // namespace

std::string Diagnostic::to_string() const {
  std::string s = file + ":" + std::to_string(line);
  if (column) s += ":" + std::to_string(column);
  return s + ": " + message;
}

IngestError::IngestError(std::vector<Diagnostic> diagnostics)
    : InputError(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<EffectEstimate> parse_effects(std::string_view text, const std::string& source) {
  static const std::vector<std::string_view> required{"study_label", "subgroup_label",
                                                      "odds_ratio", "ci_low", "ci_high"};
  const auto rows = csv::parse(text, source);
  if (rows.empty() || !header_matches(rows.front().fields, required)) {
    throw ParseError(source, rows.empty() ? 1 : rows.front().line, 0,
                     "expected header " + joined(required) + "[,ci_level]");
  }
  const auto& header = rows.front().fields;
  const bool has_level = header.size() > 5 && header[5] == "ci_level";
  const std::size_t min_fields = 5;
  if (rows.size() == 1) throw EmptyInputError(source + ": no effect rows");

  std::vector<EffectEstimate> out;
  std::vector<Diagnostic> problems;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto& f = row.fields;
    if (f.size() < min_fields || f.size() > header.size()) {
      problems.push_back({source, row.line, 0,
                          "expected " + std::to_string(header.size()) + " fields, found " +
                              std::to_string(f.size())});
      continue;
    }
    const std::size_t before = problems.size();
    EffectEstimate e;
    e.study_label = f[0];
    if (!f[1].empty()) e.subgroup_label = f[1];
    if (e.study_label.empty()) problems.push_back({source, row.line, 1, "study_label is empty"});
    guarded(problems, [&] { e.odds_ratio = csv::parse_number(f[2], source, row.line, 3, "odds_ratio"); });
    guarded(problems, [&] { e.ci_low = csv::parse_number(f[3], source, row.line, 4, "ci_low"); });
    guarded(problems, [&] { e.ci_high = csv::parse_number(f[4], source, row.line, 5, "ci_high"); });
    if (has_level && f.size() > 5 && !f[5].empty()) {
      guarded(problems, [&] { e.ci_level = csv::parse_number(f[5], source, row.line, 6, "ci_level"); });
    }
    if (problems.size() != before) continue;

    if (e.odds_ratio <= 0.0) {
      problems.push_back({source, row.line, 3, "odds_ratio must be positive"});
    }
    if (e.ci_low <= 0.0) problems.push_back({source, row.line, 4, "ci_low must be positive"});
    if (e.ci_high <= e.ci_low) {
      problems.push_back({source, row.line, 5, "interval is inverted or empty (ci_high <= ci_low)"});
    }
    if (!(e.ci_level > 0.0 && e.ci_level < 1.0)) {
      problems.push_back({source, row.line, 6, "ci_level must lie in (0, 1)"});
    }
    if (problems.size() == before) out.push_back(std::move(e));
  }
  if (!problems.empty()) throw IngestError(std::move(problems));
  return out;
}

std::vector<StudyCounts> parse_counts(std::string_view text, const std::string& source) {
  static const std::vector<std::string_view> required{
      "paper_label", "region", "block_label", "outcomes", "predictors", "covariates"};
  const auto rows = csv::parse(text, source);
  if (rows.empty() || !header_matches(rows.front().fields, required)) {
    throw ParseError(source, rows.empty() ? 1 : rows.front().line, 0,
                     "expected header " + joined(required) + "[,notes]");
  }
  const auto& header = rows.front().fields;
  const bool has_notes = header.size() > 6 && header[6] == "notes";
  if (rows.size() == 1) throw EmptyInputError(source + ": no count rows");

  std::vector<StudyCounts> studies;
  std::map<std::string, std::size_t> index;
  std::vector<Diagnostic> problems;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto& f = row.fields;
    if (f.size() < required.size() || f.size() > header.size()) {
      problems.push_back({source, row.line, 0,
                          "expected " + std::to_string(header.size()) + " fields, found " +
                              std::to_string(f.size())});
      continue;
    }
    const std::size_t before = problems.size();
    CountBlock b;
    b.block_label = f[2];
    unsigned long long covariates = 0;
    guarded(problems, [&] { b.outcomes = csv::parse_unsigned(f[3], source, row.line, 4, "outcomes"); });
    guarded(problems, [&] { b.predictors = csv::parse_unsigned(f[4], source, row.line, 5, "predictors"); });
    guarded(problems, [&] { covariates = csv::parse_unsigned(f[5], source, row.line, 6, "covariates"); });
    if (f[0].empty()) problems.push_back({source, row.line, 1, "paper_label is empty"});
    if (problems.size() != before) continue;
    if (b.outcomes == 0) problems.push_back({source, row.line, 4, "outcomes must be at least 1"});
    if (b.predictors == 0) problems.push_back({source, row.line, 5, "predictors must be at least 1"});
    if (covariates > kMaxCovariates) {
      throw OverflowGuardError(source + ":" + std::to_string(row.line) + ":6: covariates " +
                               std::to_string(covariates) + " exceeds the limit of " +
                               std::to_string(kMaxCovariates));
    }
    if (problems.size() != before) continue;
    b.covariates = static_cast<std::uint32_t>(covariates);
    if (has_notes && f.size() > 6) b.notes = f[6];

    const auto [it, inserted] = index.emplace(f[0], studies.size());
    if (inserted) studies.push_back({f[0], f[1], {}});
    studies[it->second].blocks.push_back(std::move(b));
  }
  if (!problems.empty()) throw IngestError(std::move(problems));
  return studies;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<EffectEstimate> ingest_effects(const std::filesystem::path& path) {
  return parse_effects(read_file(path), path.string());
}

std::vector<StudyCounts> ingest_counts(const std::filesystem::path& path) {
  return parse_counts(read_file(path), path.string());
}

std::vector<std::string> consistency_warnings(const std::vector<EffectEstimate>& effects) {
  std::vector<std::string> out;
  for (const auto& e : effects) {
    if (!point_inside_interval(e)) {
      out.push_back(e.display_label() + ": odds ratio " + csv::format_number(e.odds_ratio) +
                    " lies outside its interval");
    }
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pvaudit
