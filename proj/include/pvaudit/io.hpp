#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pvaudit/effects.hpp"
#include "pvaudit/error.hpp"
#include "pvaudit/search_space.hpp"

namespace pvaudit {

struct Diagnostic {
  std::string file;
  std::size_t line = 0;
  std::size_t column = 0;  // 0: whole row
  std::string message;

  std::string to_string() const;
};

/// Every row problem found in a file; the whole file is rejected.
class IngestError : public InputError {
 public:
  explicit IngestError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Header study_label,subgroup_label,odds_ratio,ci_low,ci_high[,ci_level].
/// Trailing columns after these are ignored, so `convert` output reads back.
std::vector<EffectEstimate> parse_effects(std::string_view text, const std::string& source);
std::vector<EffectEstimate> ingest_effects(const std::filesystem::path& path);

/// Header paper_label,region,block_label,outcomes,predictors,covariates[,notes].
/// Rows sharing paper_label become one study's blocks, in first-seen order.
std::vector<StudyCounts> parse_counts(std::string_view text, const std::string& source);
std::vector<StudyCounts> ingest_counts(const std::filesystem::path& path);

/// Rows whose point estimate lies outside its interval.
std::vector<std::string> consistency_warnings(const std::vector<EffectEstimate>& effects);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// 64-bit FNV-1a, used as the input content hash in audit reports.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace pvaudit
