#include "docreward/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>

#include "docreward/errors.hpp"
#include "docreward/utf8.hpp"

namespace docreward {

// ---------------------------------------------------------------------------
// plain text

std::string normalize_plain_text(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");

  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString composed = nfc->normalize(src, status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalization failed");

  icu::UnicodeString out;
  bool pending_space = false;
  for (int32_t i = 0; i < composed.length();) {
    UChar32 cp = composed.char32At(i);
    i += U16_LENGTH(cp);
    if (u_isUWhiteSpace(cp)) {
      pending_space = !out.isEmpty();
      continue;
    }
    if (pending_space) out.append(static_cast<UChar>(' '));
    pending_space = false;
    out.append(cp);
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

// ---------------------------------------------------------------------------
// LaTeX

namespace {

bool is_ascii_letter(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::optional<std::string> rewrite_command(const std::string& cmd) {
  static const std::array<std::string_view, 5> dropped = {"\\,", "\\;", "\\!",
                                                          "\\quad", "\\qquad"};
  if (cmd == "\\left" || cmd == "\\right") return std::nullopt;
  if (std::find(dropped.begin(), dropped.end(), cmd) != dropped.end()) return std::nullopt;
  if (cmd == "\\dfrac" || cmd == "\\tfrac") return std::string("\\frac");
  if (cmd == "\\leq") return std::string("\\le");
  if (cmd == "\\geq") return std::string("\\ge");
  return cmd;
}

}  // namespace

LatexTokenSeq normalize_latex(std::string_view s) {
  LatexTokenSeq out;
  int depth = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == '%') {
      std::size_t eol = s.find('\n', i);
      i = eol == std::string_view::npos ? s.size() : eol + 1;
      continue;
    }
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '\\') {
      if (i + 1 >= s.size()) {
        out.tokens.emplace_back("\\");
        ++i;
        continue;
      }
      if (is_space(s[i + 1])) {  // control space
        i += 2;
        continue;
      }
      std::size_t end = i + 1;
      if (is_ascii_letter(s[end])) {
        while (end < s.size() && is_ascii_letter(s[end])) ++end;
      } else {
        end += utf8::sequence_length(s, end);
      }
      if (auto cmd = rewrite_command(std::string(s.substr(i, end - i))))
        out.tokens.push_back(std::move(*cmd));
      i = end;
      continue;
    }
    if (c == '{') ++depth;
    if (c == '}' && --depth < 0) out.unbalanced = true;
    const std::size_t len = utf8::sequence_length(s, i);
    out.tokens.emplace_back(s.substr(i, len));
    i += len;
  }
  if (depth != 0) out.unbalanced = true;
  return out;
}

std::string render_latex(const LatexTokenSeq& seq) {
  std::string out;
  for (const std::string& t : seq.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

// ---------------------------------------------------------------------------
// HTML tables

namespace {

TableNode make_node(std::string tag) {
  TableNode n;
  n.tag = std::move(tag);
  return n;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct Tag {
  std::string name;  // lower-cased
  bool closing = false;
  int rowspan = 1;
  int colspan = 1;
};

int parse_span(std::string_view v) {
  while (!v.empty() && is_space(v.front())) v.remove_prefix(1);
  while (!v.empty() && is_space(v.back())) v.remove_suffix(1);
  int value = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc() || ptr != v.data() + v.size() || value < 1) return 1;
  return value;
}

// Parses the tag starting at s[pos] == '<'. Returns the tag and advances pos
// past '>'; std::nullopt when this '<' does not start a tag.
std::optional<Tag> read_tag(std::string_view s, std::size_t& pos) {
  std::size_t i = pos + 1;
  Tag tag;
  if (i < s.size() && s[i] == '/') {
    tag.closing = true;
    ++i;
  }
  if (i >= s.size() || !is_ascii_letter(s[i])) return std::nullopt;
  std::size_t name_start = i;
  while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '-' || s[i] == ':'))
    ++i;
  tag.name = lower(s.substr(name_start, i - name_start));

  // attributes
  while (i < s.size() && s[i] != '>') {
    if (is_space(s[i]) || s[i] == '/') {
      ++i;
      continue;
    }
    std::size_t a0 = i;
    while (i < s.size() && !is_space(s[i]) && s[i] != '=' && s[i] != '>' && s[i] != '/') ++i;
    std::string attr = lower(s.substr(a0, i - a0));
    while (i < s.size() && is_space(s[i])) ++i;
    std::string_view value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && is_space(s[i])) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        const char q = s[i++];
        std::size_t v0 = i;
        while (i < s.size() && s[i] != q) ++i;
        value = s.substr(v0, i - v0);
        if (i < s.size()) ++i;
      } else {
        std::size_t v0 = i;
        while (i < s.size() && !is_space(s[i]) && s[i] != '>') ++i;
        value = s.substr(v0, i - v0);
      }
    }
    if (attr == "rowspan") tag.rowspan = parse_span(value);
    if (attr == "colspan") tag.colspan = parse_span(value);
  }
  pos = i < s.size() ? i + 1 : s.size();
  return tag;
}

void append_entity_decoded(std::string_view s, std::string& out) {
  static const std::array<std::pair<std::string_view, std::string_view>, 6> named = {{
      {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"},
      {"&nbsp;", " "}}};
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    bool matched = false;
    for (auto [from, to] : named) {
      if (s.substr(i, from.size()) == from) {
        out += to;
        i += from.size();
        matched = true;
        break;
      }
    }
    if (!matched && s.substr(i, 2) == "&#") {
      std::size_t semi = s.find(';', i);
      if (semi != std::string_view::npos && semi - i <= 10) {
        std::string_view digits = s.substr(i + 2, semi - i - 2);
        int base = 10;
        if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
          base = 16;
          digits.remove_prefix(1);
        }
        unsigned long cp = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, base);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() &&
            cp <= 0x10FFFF) {
          out += utf8::encode(std::u32string(1, static_cast<char32_t>(cp)));
          i = semi + 1;
          matched = true;
        }
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
}

bool is_structural(const std::string& name) {
  return name == "table" || name == "thead" || name == "tbody" || name == "tr" ||
         name == "td" || name == "th";
}

bool breaks_text(const std::string& name) {
  return name == "br" || name == "p" || name == "div" || name == "li";
}

class TableBuilder {
 public:
  TableNormalization finish() {
    if (!done_) result_.repaired = true;
    for (std::size_t i = 0; i < result_.tree.size(); ++i) {
      TableNode& n = result_.tree.node(i);
      if (n.tag == "td") n.text = normalize_plain_text(n.text);
    }
    return std::move(result_);
  }

  bool done() const { return done_; }

  void open(const Tag& tag) {
    if (nested_ > 0) {
      if (tag.name == "table") ++nested_;
      else if (in_cell() && breaks_text(tag.name)) cell().text.push_back(' ');
      return;
    }
    if (stack_.empty()) {
      if (tag.name == "table") {
        result_.tree = TableTree(make_node("table"));
        stack_.push_back(0);
      }
      return;
    }
    if (tag.name == "table") {
      // nested tables are flattened into the enclosing cell's text
      nested_ = 1;
      return;
    }
    if (!is_structural(tag.name)) {
      if (in_cell() && breaks_text(tag.name)) cell().text.push_back(' ');
      return;
    }
    if (tag.name == "thead" || tag.name == "tbody") {
      close_implicitly_to({"table"});
      push(tag.name, tag);
    } else if (tag.name == "tr") {
      close_implicitly_to({"table", "thead", "tbody"});
      push("tr", tag);
    } else {  // td / th
      close_implicitly_to({"table", "thead", "tbody", "tr"});
      if (top().tag != "tr") {
        result_.repaired = true;
        push("tr", Tag{});
      }
      push("td", tag);
    }
  }

  void close(const Tag& tag) {
    if (nested_ > 0) {
      if (tag.name == "table") --nested_;
      else if (in_cell() && breaks_text(tag.name)) cell().text.push_back(' ');
      return;
    }
    if (stack_.empty()) return;
    if (!is_structural(tag.name)) {
      if (in_cell() && breaks_text(tag.name)) cell().text.push_back(' ');
      return;
    }
    const std::string name = tag.name == "th" ? "td" : tag.name;
    auto it = std::find_if(stack_.rbegin(), stack_.rend(), [&](std::size_t n) {
      return result_.tree.node(n).tag == name;
    });
    if (it == stack_.rend()) {
      result_.repaired = true;  // stray closing tag
      return;
    }
    const std::size_t keep = static_cast<std::size_t>(stack_.rend() - it) - 1;
    if (stack_.size() - keep > 1) result_.repaired = true;
    stack_.resize(keep);
    if (stack_.empty()) done_ = true;
  }

  void text(std::string_view raw) {
    if (in_cell()) append_entity_decoded(raw, cell().text);
  }

 private:
  bool in_cell() const {
    return !stack_.empty() && result_.tree.node(stack_.back()).tag == "td";
  }
  TableNode& cell() { return result_.tree.node(stack_.back()); }
  const TableNode& top() const { return result_.tree.node(stack_.back()); }

  void push(const std::string& name, const Tag& tag) {
    TableNode n;
    n.tag = name;
    n.rowspan = tag.rowspan;
    n.colspan = tag.colspan;
    stack_.push_back(result_.tree.add_child(stack_.back(), std::move(n)));
  }

  // Pops open elements until the top is one of `parents`.
  void close_implicitly_to(std::initializer_list<std::string_view> parents) {
    while (stack_.size() > 1 &&
           std::find(parents.begin(), parents.end(), top().tag) == parents.end()) {
      stack_.pop_back();
      result_.repaired = true;
    }
  }

  TableNormalization result_;
  std::vector<std::size_t> stack_;
  int nested_ = 0;
  bool done_ = false;
};

}  // namespace

TableNormalization normalize_table(std::string_view s) {
  std::size_t pos = std::string_view::npos;
  for (std::size_t i = s.find('<'); i != std::string_view::npos; i = s.find('<', i + 1)) {
    std::size_t probe = i;
    auto tag = read_tag(s, probe);
    if (tag && !tag->closing && tag->name == "table") {
      pos = i;
      break;
    }
  }
  if (pos == std::string_view::npos) throw NormalizationError("no <table> element found");

  TableBuilder builder;
  while (pos < s.size() && !builder.done()) {
    if (s[pos] == '<') {
      if (s.substr(pos, 4) == "<!--") {
        std::size_t end = s.find("-->", pos + 4);
        pos = end == std::string_view::npos ? s.size() : end + 3;
        continue;
      }
      if (s.substr(pos, 2) == "<!" || s.substr(pos, 2) == "<?") {
        std::size_t end = s.find('>', pos);
        pos = end == std::string_view::npos ? s.size() : end + 1;
        continue;
      }
      std::size_t next = pos;
      if (auto tag = read_tag(s, next)) {
        if (tag->closing) builder.close(*tag);
        else builder.open(*tag);
        pos = next;
        continue;
      }
    }
    std::size_t end = s.find('<', pos + 1);
    if (end == std::string_view::npos) end = s.size();
    builder.text(s.substr(pos, end - pos));
    pos = end;
  }
  return builder.finish();
}

}  // namespace docreward
