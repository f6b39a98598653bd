#include "docreward/format_detect.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>
#include <string>

namespace docreward {

namespace {

constexpr std::array<std::string_view, 5> kFormatNames = {"python_plot", "html", "svg",
                                                          "latex_tikz", "molecule_code"};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool contains(std::string_view hay, std::string_view needle) {
  return hay.find(needle) != std::string_view::npos;
}

std::string_view trim_left(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  return s;
}

// Drops a ```lang ... ``` wrapper when the whole snippet is one fence.
std::string_view strip_fence(std::string_view s) {
  std::string_view t = trim_left(s);
  if (t.substr(0, 3) != "```") return s;
  std::size_t eol = t.find('\n');
  if (eol == std::string_view::npos) return s;
  t.remove_prefix(eol + 1);
  std::size_t close = t.rfind("```");
  return close == std::string_view::npos ? t : t.substr(0, close);
}

bool is_svg(std::string_view code) {
  std::string s = lower(code);
  std::string_view v = s;
  while (true) {
    v = trim_left(v);
    if (v.substr(0, 5) == "<?xml") {
      std::size_t end = v.find("?>");
      if (end == std::string_view::npos) return false;
      v.remove_prefix(end + 2);
    } else if (v.substr(0, 4) == "<!--") {
      std::size_t end = v.find("-->");
      if (end == std::string_view::npos) return false;
      v.remove_prefix(end + 3);
    } else if (v.substr(0, 9) == "<!doctype") {
      std::size_t end = v.find('>');
      if (end == std::string_view::npos) return false;
      v.remove_prefix(end + 1);
    } else {
      break;
    }
  }
  return v.substr(0, 4) == "<svg" &&
         (v.size() == 4 || v[4] == '>' || std::isspace(static_cast<unsigned char>(v[4])));
}

bool is_html(std::string_view code) {
  const std::string s = lower(code);
  if (contains(s, "<html") || contains(s, "<!doctype html")) return true;
  static const std::regex tag_re(
      R"(<(head|body|div|section|header|footer|nav|main|article|table|ul|ol|p|h[1-6]|form)[\s>/])");
  std::set<std::string> seen;
  for (auto it = std::sregex_iterator(s.begin(), s.end(), tag_re); it != std::sregex_iterator();
       ++it) {
    seen.insert((*it)[1].str());
    if (seen.size() >= 2) return true;
  }
  return false;
}

bool is_tikz(std::string_view code) {
  return contains(code, "\\begin{tikzpicture}") || contains(code, "\\documentclass");
}

bool is_python_plot(std::string_view code) {
  static const std::regex import_re(
      R"((^|\n)[ \t]*(import|from)[ \t]+(matplotlib|seaborn|plotly|bokeh|altair|pylab)\b)");
  const std::string s(code);
  if (!std::regex_search(s, import_re)) return false;
  static constexpr std::array<std::string_view, 12> calls = {
      "plt.", ".plot(", ".bar(", ".barh(", ".scatter(", ".hist(",
      ".pie(", ".savefig(", "sns.", "px.", "go.Figure", ".show("};
  return std::any_of(calls.begin(), calls.end(), [&](std::string_view c) { return contains(s, c); });
}

bool is_molecule(std::string_view code) {
  static constexpr std::array<std::string_view, 8> sigs = {
      "rdkit", "Chem.MolFromSmiles", "openbabel", "pybel", "indigo", "\\chemfig",
      "MolFromMolBlock", "AllChem."};
  return std::any_of(sigs.begin(), sigs.end(), [&](std::string_view c) { return contains(code, c); });
}

}  // namespace

std::string_view to_string(CodeFormat f) { return kFormatNames[static_cast<std::size_t>(f)]; }

std::optional<CodeFormat> code_format_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kFormatNames.size(); ++i)
    if (kFormatNames[i] == s) return static_cast<CodeFormat>(i);
  return std::nullopt;
}

std::optional<CodeFormat> expected_format(Domain d) {
  switch (d) {
    case Domain::chart: return CodeFormat::python_plot;
    case Domain::web: return CodeFormat::html;
    case Domain::svg: return CodeFormat::svg;
    case Domain::plot: return CodeFormat::latex_tikz;
    case Domain::molecule: return CodeFormat::molecule_code;
    default: return std::nullopt;
  }
}

std::optional<CodeFormat> detect_format(std::string_view raw) {
  const std::string_view code = strip_fence(raw);
  if (is_svg(code)) return CodeFormat::svg;
  if (is_html(code)) return CodeFormat::html;
  if (is_tikz(code)) return CodeFormat::latex_tikz;
  if (is_python_plot(code)) return CodeFormat::python_plot;
  if (is_molecule(code)) return CodeFormat::molecule_code;
  return std::nullopt;
}

double format_alignment_reward(std::string_view code, CodeFormat expected) {
  return detect_format(code) == expected ? 1.0 : 0.0;
}

}  // namespace docreward
