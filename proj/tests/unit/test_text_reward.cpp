#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "docreward/normalize.hpp"
#include "docreward/segment.hpp"
#include "docreward/text_reward.hpp"

using namespace docreward;

TEST_CASE("levenshtein examples") {
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("abc", "abd") == oracle::levenshtein(U"abc", U"abd"));
  CHECK(levenshtein("abc", "abd") == 1);
  CHECK(levenshtein("kitten", "sitting") == oracle::levenshtein(U"kitten", U"sitting"));
  CHECK(levenshtein("kitten", "sitting") == 3);
  // scalar granularity: one substitution, not two byte edits
  CHECK(levenshtein("caf\xc3\xa9", "cafe") == 1);
  CHECK(levenshtein("\xe6\xbc\xa2\xe5\xad\x97", "\xe5\xad\x97") == 1);
}

TEST_CASE("levenshtein agrees with the memo oracle") {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 300; ++k) {
    std::string a, b;
    for (int i = 0, n = static_cast<int>(rng() % 8); i < n; ++i) a.push_back(static_cast<char>('a' + rng() % 3));
    for (int i = 0, n = static_cast<int>(rng() % 8); i < n; ++i) b.push_back(static_cast<char>('a' + rng() % 3));
    CHECK(levenshtein(a, b) == oracle::levenshtein(oracle::ascii32(a), oracle::ascii32(b)));
  }
}

TEST_CASE("text_edit_reward") {
  CHECK(text_edit_reward("abc", "abc") == 1.0);
  CHECK(text_edit_reward("abc", "abd") == doctest::Approx(1.0 - 1.0 / 3.0).epsilon(1e-15));
  CHECK(text_edit_reward("", "x") == 0.0);
  CHECK(text_edit_reward("", "") == 1.0);
  CHECK(text_edit_reward("abc", "abcd") == text_edit_reward("abcd", "abc"));
  CHECK(text_edit_reward("hello world junk", "hello world") < text_edit_reward("hello world", "hello world"));
}

TEST_CASE("BLEU against the reference implementation") {
  using T = std::vector<std::string>;
  const T p{"a", "+", "b"}, g{"a", "+", "c"};
  const double expected = oracle::bleu(p, g);
  // recorded from the reference oracle: (2/3 * 2/3 * 1/2 * 1)^(1/4)
  CHECK(expected == doctest::Approx(0.6865890479690392).epsilon(1e-12));
  CHECK(sentence_bleu(p, g) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(*formula_bleu_reward("a+b", "a + c") == doctest::Approx(expected).epsilon(1e-12));

  CHECK(*formula_bleu_reward("\\frac{1}{2}", "\\dfrac {1}{2}") == 1.0);
  CHECK(*formula_bleu_reward("", "x") == 0.0);
  CHECK_FALSE(formula_bleu_reward("x", "%only a comment").has_value());

  std::mt19937_64 rng(9);
  const T vocab{"x", "y", "+", "{", "}", "\\frac"};
  for (int k = 0; k < 300; ++k) {
    T c, r;
    for (int i = 0, n = 1 + static_cast<int>(rng() % 9); i < n; ++i) c.push_back(vocab[rng() % vocab.size()]);
    for (int i = 0, n = 1 + static_cast<int>(rng() % 9); i < n; ++i) r.push_back(vocab[rng() % vocab.size()]);
    const double v = sentence_bleu(c, r);
    CHECK(v == doctest::Approx(oracle::bleu(c, r)).epsilon(1e-12));
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("table_reward") {
  const std::string gt = "<table><tr><td>a</td><td>b</td></tr></table>";
  CHECK(table_reward(gt, gt) == 1.0);
  CHECK(table_reward("<table><tr><td>a</td></tr></table>", gt) == 0.75);
  CHECK(table_reward("no table here", gt) == 0.0);
  CHECK_FALSE(score_table("no table here", gt).pred_parsed);
}

TEST_CASE("aggregate_text_reward") {
  auto gt = segment_content("Hello  world");
  auto r = aggregate_text_reward(segment_content("Hello world"), gt);
  CHECK(r.scoreable);
  CHECK(r.aggregate == 1.0);
  CHECK_FALSE(r.formula);
  CHECK_FALSE(r.table);

  gt = segment_content("Intro <table><tr><td>a</td><td>b</td></tr></table>");
  r = aggregate_text_reward(segment_content("Intro <table><tr><td>a</td></tr></table>"), gt);
  REQUIRE(r.plain_text);
  REQUIRE(r.table);
  CHECK(*r.plain_text == 1.0);
  CHECK(*r.table == 0.75);
  CHECK(r.aggregate == doctest::Approx((1.0 + 0.75) / 2.0).epsilon(1e-15));

  // one GT table with reward 0.5
  gt = segment_content("t <table><tr><td>a</td></tr><tr><td>b</td></tr></table>");
  const auto pred = segment_content("t <table><tr><td>a</td></tr></table>");
  r = aggregate_text_reward(pred, gt);
  CHECK(*r.table == doctest::Approx(1.0 - 2.0 / 5.0));

  gt = segment_content("$$a$$ $$b$$");
  r = aggregate_text_reward(segment_content("$$a$$"), gt);
  REQUIRE(r.formula);
  CHECK(*r.formula == doctest::Approx(0.5));
  CHECK_FALSE(r.plain_text);  // the blank between the formulas normalizes away
  CHECK(r.aggregate == doctest::Approx(0.5));

  r = aggregate_text_reward(segment_content("anything"), segment_content(""));
  CHECK_FALSE(r.scoreable);
  CHECK(r.aggregate == 0.0);
  CHECK_FALSE(r.warnings.empty());

  // a prediction-only type is not penalized
  r = aggregate_text_reward(segment_content("x $$y$$"), segment_content("x"));
  CHECK(r.aggregate == 1.0);
  CHECK_FALSE(r.formula);
}
