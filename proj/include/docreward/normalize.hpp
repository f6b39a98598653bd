#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "docreward/table_tree.hpp"

namespace docreward {

struct LatexTokenSeq {
  std::vector<std::string> tokens;
  bool unbalanced = false;  // brace count did not return to zero

  bool operator==(const LatexTokenSeq&) const = default;
};

// Canonical LaTeX token sequence.
//
// Rules, applied in one left-to-right pass:
//   - '%' up to end of line is a comment (\% is a command, not a comment)
//   - whitespace separates tokens and is otherwise dropped
//   - '\' + letters is one command; '\' + any other single character is a
//     command too (\{, \,, \\)
//   - \left and \right are dropped, the delimiter after them stays
//   - \dfrac, \tfrac -> \frac; \leq -> \le; \geq -> \ge
//   - spacing commands \, \; \! \quad \qquad and backslash-whitespace vanish
//   - every other character (one UTF-8 scalar) is its own token
LatexTokenSeq normalize_latex(std::string_view raw);

// Tokens joined by single spaces; normalize_latex(render_latex(x)) == x.
std::string render_latex(const LatexTokenSeq& seq);

struct TableNormalization {
  TableTree tree;
  bool repaired = false;  // unclosed or misnested tags were fixed up
};

// Parses the first <table> element into a structural tree: only table,
// thead, tbody, tr and td survive (th becomes td), other tags are skipped
// but their text flows into the enclosing cell, attributes other than
// rowspan/colspan are dropped, and span values of 1 or anything unparsable
// are dropped as well. Cell text goes through normalize_plain_text after
// decoding the common HTML entities.
//
// Throws NormalizationError when there is no <table> element.
TableNormalization normalize_table(std::string_view raw);

// NFC, runs of Unicode whitespace collapsed to one ASCII space, trimmed.
std::string normalize_plain_text(std::string_view raw);

}  // namespace docreward
