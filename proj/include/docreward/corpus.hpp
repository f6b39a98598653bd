#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace docreward {

enum class Domain { text_doc, formula, table, chart, web, svg, plot, molecule };

inline constexpr std::array<Domain, 8> kAllDomains = {
    Domain::text_doc, Domain::formula, Domain::table, Domain::chart,
    Domain::web,      Domain::svg,     Domain::plot,  Domain::molecule};

std::string_view to_string(Domain d);
std::optional<Domain> domain_from_string(std::string_view s);

// chart, web, svg, plot and molecule records are scored on rendered images.
bool is_vision_domain(Domain d);

struct EvalRecord {
  std::string id;
  Domain domain = Domain::text_doc;
  std::string prediction;
  std::string ground_truth;
  std::optional<std::string> gt_image_path;
  std::optional<std::string> pred_image_path;

  bool operator==(const EvalRecord&) const = default;
};

// Parses one JSONL line. `line_number` is only used in error messages.
// Throws ParseError, SchemaError or DomainError.
EvalRecord parse_record_line(std::string_view line, std::size_t line_number = 1);

// Compact single-line JSON; parse_record_line(serialize_record(r)) == r.
std::string serialize_record(const EvalRecord& record);

// Reads newline-delimited records in file order. Blank lines are skipped.
// Throws DatasetError on I/O failure or duplicate ids, ParseError (and
// subclasses) on malformed lines.
std::vector<EvalRecord> load_dataset(const std::filesystem::path& path);

}  // namespace docreward
