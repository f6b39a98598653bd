#include "docreward/text_reward.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "docreward/errors.hpp"
#include "docreward/normalize.hpp"
#include "docreward/tree_edit.hpp"
#include "docreward/utf8.hpp"

namespace docreward {

std::size_t levenshtein(std::string_view a_bytes, std::string_view b_bytes) {
  const std::u32string a = utf8::decode(a_bytes);
  const std::u32string b = utf8::decode(b_bytes);
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();

  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double text_edit_reward(std::string_view pred, std::string_view gt) {
  const std::size_t longest = std::max(utf8::length(pred), utf8::length(gt));
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein(pred, gt)) / static_cast<double>(longest);
}

double sentence_bleu(const std::vector<std::string>& candidate,
                     const std::vector<std::string>& reference, int max_order) {
  if (max_order < 1) throw ContractError("sentence_bleu: max_order must be >= 1");
  if (candidate.empty() || reference.empty()) return 0.0;

  using NGram = std::vector<std::string>;
  auto count = [](const std::vector<std::string>& toks, std::size_t n) {
    std::map<NGram, int> counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i)
      ++counts[NGram(toks.begin() + static_cast<std::ptrdiff_t>(i),
                     toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
    return counts;
  };

  double log_precision = 0.0;
  for (int order = 1; order <= max_order; ++order) {
    const auto n = static_cast<std::size_t>(order);
    const auto cand = count(candidate, n);
    const auto ref = count(reference, n);
    double matched = 0.0;
    for (const auto& [gram, c] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(c, it->second);
    }
    const double total = candidate.size() >= n ? static_cast<double>(candidate.size() - n + 1) : 0.0;
    const double smoothing = order >= 2 ? 1.0 : 0.0;
    if (matched + smoothing == 0.0) return 0.0;
    log_precision += std::log((matched + smoothing) / (total + smoothing));
  }
  log_precision /= max_order;

  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double log_bp = c >= r ? 0.0 : 1.0 - r / c;
  return std::exp(log_precision + log_bp);
}

std::optional<double> formula_bleu_reward(std::string_view pred, std::string_view gt) {
  const LatexTokenSeq ref = normalize_latex(gt);
  if (ref.tokens.empty()) return std::nullopt;
  return sentence_bleu(normalize_latex(pred).tokens, ref.tokens);
}

TableScore score_table(std::string_view pred, std::string_view gt) {
  const TableTree gt_tree = normalize_table(gt).tree;
  TableScore score;
  TableTree pred_tree;
  try {
    pred_tree = normalize_table(pred).tree;
  } catch (const NormalizationError&) {
    return score;
  }
  score.pred_parsed = true;
  score.teds_s = teds_s(pred_tree, gt_tree);
  score.teds = teds(pred_tree, gt_tree);
  return score;
}

double table_reward(std::string_view pred, std::string_view gt) {
  return score_table(pred, gt).teds_s;
}

std::optional<double> TextRewardBreakdown::reward(ContentType type) const {
  switch (type) {
    case ContentType::plain_text: return plain_text;
    case ContentType::formula: return formula;
    case ContentType::table: return table;
  }
  return std::nullopt;
}

namespace {

std::string joined_text(const SegmentedContent& s) {
  std::string out;
  for (const std::string& span : s.text_spans) {
    if (!out.empty()) out.push_back(' ');
    out += span;
  }
  return normalize_plain_text(out);
}

double mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

}  // namespace

TextRewardBreakdown aggregate_text_reward(const SegmentedContent& pred,
                                          const SegmentedContent& gt) {
  TextRewardBreakdown out;

  if (std::string gt_text = joined_text(gt); !gt_text.empty())
    out.plain_text = text_edit_reward(joined_text(pred), gt_text);

  std::vector<double> formula_scores;
  for (std::size_t i = 0; i < gt.formulas.size(); ++i) {
    const std::string_view p = i < pred.formulas.size() ? std::string_view(pred.formulas[i]) : "";
    if (auto r = formula_bleu_reward(p, gt.formulas[i])) {
      formula_scores.push_back(*r);
    } else {
      out.warnings.push_back("formula " + std::to_string(i) +
                             ": ground truth normalizes to no tokens, skipped");
    }
  }
  if (!formula_scores.empty()) out.formula = mean(formula_scores);

  std::vector<double> teds_s_scores, teds_scores;
  for (std::size_t i = 0; i < gt.tables.size(); ++i) {
    const std::string_view p = i < pred.tables.size() ? std::string_view(pred.tables[i]) : "";
    try {
      TableScore s = score_table(p, gt.tables[i]);
      if (!s.pred_parsed)
        out.warnings.push_back("table " + std::to_string(i) + ": no parsable prediction, scored 0");
      teds_s_scores.push_back(s.teds_s);
      teds_scores.push_back(s.teds);
    } catch (const NormalizationError& e) {
      out.warnings.push_back("table " + std::to_string(i) + ": ground truth unusable (" +
                             e.what() + "), skipped");
    }
  }
  if (!teds_s_scores.empty()) {
    out.table = mean(teds_s_scores);
    out.table_teds = mean(teds_scores);
  }

  std::vector<double> present;
  for (auto r : {out.plain_text, out.formula, out.table})
    if (r) present.push_back(*r);
  out.scoreable = !present.empty();
  out.aggregate = out.scoreable ? mean(present) : 0.0;
  if (!out.scoreable) out.warnings.push_back("ground truth has no scoreable content");
  return out;
}

}  // namespace docreward
