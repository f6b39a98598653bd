#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace docreward {

enum class ContentType { plain_text, formula, table };

std::string_view to_string(ContentType t);

// How a formula span was delimited in the source; used to restore it.
enum class Delimiter { none, display_dollar, display_bracket, inline_dollar };

struct SpanRef {
  ContentType type;
  std::size_t index;  // into the vector for `type`
  Delimiter delimiter = Delimiter::none;

  bool operator==(const SpanRef&) const = default;
};

// Markdown split into plain text, formula and table spans.
//
// Formulas are stored without their delimiters; tables keep the whole
// <table>...</table> block. `order` records document order so the source can
// be reassembled with reconstruct().
struct SegmentedContent {
  std::vector<std::string> text_spans;
  std::vector<std::string> formulas;
  std::vector<std::string> tables;
  std::vector<SpanRef> order;

  bool operator==(const SegmentedContent&) const = default;
};

enum class SegmentMode {
  strict,   // unclosed delimiters throw SegmentationError
  lenient,  // an unclosed delimiter and everything after it become plain text
};

// Recognized delimiters: $$...$$, \[...\], inline $...$ and literal
// <table>...</table> blocks (nesting counted). \$ is an escaped dollar and
// stays in plain text. Scanning is first-match, left to right.
SegmentedContent segment_content(std::string_view source,
                                 SegmentMode mode = SegmentMode::strict);

// Reassembles the source with delimiters restored.
std::string reconstruct(const SegmentedContent& content);

}  // namespace docreward
