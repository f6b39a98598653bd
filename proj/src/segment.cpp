#include "docreward/segment.hpp"

#include <cctype>
#include <optional>

#include "docreward/errors.hpp"

namespace docreward {

namespace {

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(s[pos + i])) != prefix[i]) return false;
  return true;
}

// True if an HTML tag named `name` opens at pos ("<name" then '>', '/' or space).
bool tag_at(std::string_view s, std::size_t pos, std::string_view open) {
  if (!starts_with_ci(s, pos, open)) return false;
  std::size_t after = pos + open.size();
  if (after >= s.size()) return false;
  char c = s[after];
  return c == '>' || c == '/' || std::isspace(static_cast<unsigned char>(c));
}

// Returns the offset just past the </table> matching the <table at `start`.
std::optional<std::size_t> find_table_end(std::string_view s, std::size_t start) {
  int depth = 0;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] != '<') continue;
    if (tag_at(s, i, "<table")) {
      ++depth;
    } else if (starts_with_ci(s, i, "</table")) {
      std::size_t close = s.find('>', i);
      if (close == std::string_view::npos) return std::nullopt;
      if (--depth == 0) return close + 1;
      i = close;
    }
  }
  return std::nullopt;
}

struct Builder {
  SegmentedContent out;
  std::string pending_text;

  void flush_text() {
    if (pending_text.empty()) return;
    out.order.push_back({ContentType::plain_text, out.text_spans.size()});
    out.text_spans.push_back(std::move(pending_text));
    pending_text.clear();
  }
  void formula(std::string_view body, Delimiter d) {
    flush_text();
    out.order.push_back({ContentType::formula, out.formulas.size(), d});
    out.formulas.emplace_back(body);
  }
  void table(std::string_view block) {
    flush_text();
    out.order.push_back({ContentType::table, out.tables.size()});
    out.tables.emplace_back(block);
  }
};

}  // namespace

std::string_view to_string(ContentType t) {
  switch (t) {
    case ContentType::plain_text: return "plain_text";
    case ContentType::formula: return "formula";
    case ContentType::table: return "table";
  }
  return "?";
}

SegmentedContent segment_content(std::string_view s, SegmentMode mode) {
  Builder b;
  std::size_t i = 0;

  auto unclosed = [&](const char* what) {
    if (mode == SegmentMode::strict)
      throw SegmentationError(i, std::string("unclosed ") + what);
    b.pending_text.append(s.substr(i));
    i = s.size();
  };

  while (i < s.size()) {
    const char c = s[i];
    if (c == '\\' && i + 1 < s.size() && s[i + 1] == '$') {
      b.pending_text.append("\\$");
      i += 2;
    } else if (c == '\\' && i + 1 < s.size() && s[i + 1] == '[') {
      std::size_t close = s.find("\\]", i + 2);
      if (close == std::string_view::npos) {
        unclosed("\\[ formula");
        continue;
      }
      b.formula(s.substr(i + 2, close - i - 2), Delimiter::display_bracket);
      i = close + 2;
    } else if (c == '$' && i + 1 < s.size() && s[i + 1] == '$') {
      std::size_t close = s.find("$$", i + 2);
      if (close == std::string_view::npos) {
        unclosed("$$ formula");
        continue;
      }
      b.formula(s.substr(i + 2, close - i - 2), Delimiter::display_dollar);
      i = close + 2;
    } else if (c == '$') {
      std::size_t close = s.find('$', i + 1);
      if (close == std::string_view::npos) {
        unclosed("$ formula");
        continue;
      }
      b.formula(s.substr(i + 1, close - i - 1), Delimiter::inline_dollar);
      i = close + 1;
    } else if (c == '<' && tag_at(s, i, "<table")) {
      auto end = find_table_end(s, i);
      if (!end) {
        unclosed("<table> block");
        continue;
      }
      b.table(s.substr(i, *end - i));
      i = *end;
    } else {
      b.pending_text.push_back(c);
      ++i;
    }
  }
  b.flush_text();
  return std::move(b.out);
}

std::string reconstruct(const SegmentedContent& content) {
  std::string out;
  for (const SpanRef& ref : content.order) {
    switch (ref.type) {
      case ContentType::plain_text:
        out += content.text_spans.at(ref.index);
        break;
      case ContentType::table:
        out += content.tables.at(ref.index);
        break;
      case ContentType::formula: {
        const std::string& body = content.formulas.at(ref.index);
        switch (ref.delimiter) {
          case Delimiter::display_bracket: out += "\\[" + body + "\\]"; break;
          case Delimiter::inline_dollar: out += "$" + body + "$"; break;
          default: out += "$$" + body + "$$"; break;
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace docreward
