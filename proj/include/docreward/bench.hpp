#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "docreward/corpus.hpp"
#include "docreward/text_reward.hpp"

namespace docreward {

inline constexpr int kReportSchemaVersion = 1;

struct VisionBreakdown {
  std::optional<double> visual;  // multi-scale visual reward; absent when unscored
  std::optional<double> global;
  std::optional<double> local_mean;
  double format_alignment = 0.0;
  std::string expected_format;
  std::string detected_format;  // empty when nothing matched
  bool render_attempted = false;
  bool render_succeeded = false;
  std::string render_status;    // empty when no render was attempted

  bool operator==(const VisionBreakdown&) const = default;
};

struct ScoredRecord {
  std::string id;
  Domain domain = Domain::text_doc;
  std::optional<TextRewardBreakdown> text;
  std::optional<VisionBreakdown> vision;
  std::vector<std::string> warnings;
};

struct CorpusMetrics {
  std::optional<double> text_edit_mean;      // edit distance, lower is better, [0, 1]
  std::optional<double> table_teds_mean;     // [0, 100]
  std::optional<double> table_teds_s_mean;   // [0, 100]
  std::optional<double> formula_score_mean;  // BLEU x 100
  std::optional<double> overall;             // [0, 100]
  std::optional<double> text_reward_mean;    // mean aggregate text reward, [0, 1]
  std::optional<double> vision_reward_mean;  // [0, 1]
  std::optional<double> format_alignment_mean;
  std::optional<double> exec_rate;           // [0, 100]
  std::size_t render_attempts = 0;
  std::size_t render_successes = 0;
};

struct BenchReport {
  std::map<std::string, ScoredRecord> per_record;  // keyed and ordered by id
  CorpusMetrics corpus;
  std::map<Domain, std::size_t> domain_counts;
  std::vector<std::string> warnings;
};

// ((1 - text_edit) * 100 + table_teds + formula_score) / 3.
// Throws ContractError when text_edit is outside [0, 1] or either other
// argument is outside [0, 100].
double overall_score(double text_edit, double table_teds, double formula_score);

// Corpus means over the records that carry each component (no imputation).
// The overall score needs all three text components. Throws ReportError for
// an empty input and ContractError for duplicate ids. The result does not
// depend on input order.
BenchReport aggregate_report(std::vector<ScoredRecord> records);

// Versioned JSON (top-level "schema_version"); byte-stable for equal reports.
std::string report_to_json(const BenchReport& report);

// Human-readable summary table.
std::string report_to_table(const BenchReport& report);

}  // namespace docreward
