#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docreward/segment.hpp"

namespace docreward {

// Edit distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - levenshtein / max(len); 1 when both are empty. Callers normalize first.
double text_edit_reward(std::string_view pred, std::string_view gt);

// Sentence BLEU with clipped n-gram counts up to `max_order`, add-one
// smoothing on orders >= 2 and the exponential brevity penalty. 0 when the
// candidate is empty or shares no unigram with the reference.
double sentence_bleu(const std::vector<std::string>& candidate,
                     const std::vector<std::string>& reference, int max_order = 4);

// BLEU of the normalized LaTeX token sequences. std::nullopt when the ground
// truth normalizes to nothing (the span cannot be scored).
std::optional<double> formula_bleu_reward(std::string_view pred, std::string_view gt);

struct TableScore {
  double teds_s = 0.0;  // the reward
  double teds = 0.0;
  bool pred_parsed = false;
};

// Scores the first table in `pred` against the first table in `gt`. A
// prediction without a parsable table scores 0. Throws NormalizationError
// when `gt` has no table.
TableScore score_table(std::string_view pred, std::string_view gt);

// TEDS-S reward, i.e. score_table(pred, gt).teds_s.
double table_reward(std::string_view pred, std::string_view gt);

struct TextRewardBreakdown {
  std::optional<double> plain_text;
  std::optional<double> formula;
  std::optional<double> table;
  std::optional<double> table_teds;  // content-aware TEDS, reported alongside
  double aggregate = 0.0;
  bool scoreable = false;
  std::vector<std::string> warnings;

  std::optional<double> reward(ContentType type) const;
};

// Averages the per-type rewards over the content types present in the
// ground truth. Plain text is compared as one space-joined string; formulas
// and tables are paired by position and averaged, with missing predictions
// scoring 0. Types that only appear in the prediction are not penalized.
TextRewardBreakdown aggregate_text_reward(const SegmentedContent& pred,
                                          const SegmentedContent& gt);

}  // namespace docreward
