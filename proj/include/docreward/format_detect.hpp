#pragma once

#include <optional>
#include <string_view>

#include "docreward/corpus.hpp"

namespace docreward {

enum class CodeFormat { python_plot, html, svg, latex_tikz, molecule_code };

std::string_view to_string(CodeFormat f);
std::optional<CodeFormat> code_format_from_string(std::string_view s);

// The code format a vision domain is expected to produce:
// chart -> python_plot, web -> html, svg -> svg, plot -> latex_tikz,
// molecule -> molecule_code. std::nullopt for text domains.
std::optional<CodeFormat> expected_format(Domain d);

// Signature-based classifier; the first matching rule wins:
//   svg         root element is <svg (after an optional XML prolog,
//               comments and doctype)
//   html        <html or <!DOCTYPE html, or at least two distinct
//               structural HTML tags
//   latex_tikz  \begin{tikzpicture} or \documentclass
//   python_plot import of a plotting package plus a plotting call
//   molecule    RDKit / Open Babel / Indigo / chemfig signatures
// A surrounding markdown code fence is ignored.
std::optional<CodeFormat> detect_format(std::string_view code);

// 1 when detect_format(code) == expected, else 0.
double format_alignment_reward(std::string_view code, CodeFormat expected);

}  // namespace docreward
