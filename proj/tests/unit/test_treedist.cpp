#include <doctest.h>

#include <random>

#include "../oracles.hpp"
#include "docreward/normalize.hpp"
#include "docreward/text_reward.hpp"
#include "docreward/tree_edit.hpp"

using namespace docreward;
using oracle::labeled;

namespace {

TableTree chain(std::initializer_list<const char*> tags) {
  auto it = tags.begin();
  TableTree t(labeled(*it++));
  std::size_t last = 0;
  for (; it != tags.end(); ++it) last = t.add_child(last, labeled(*it));
  return t;
}

TableNode cell(std::string text) {
  TableNode n = labeled("td");
  n.text = std::move(text);
  return n;
}

}  // namespace

TEST_CASE("tree_edit_distance examples") {
  const auto full = chain({"table", "tr", "td"});
  CHECK(tree_edit_distance(full, full, unit_costs()) == 0.0);
  CHECK(tree_edit_distance(full, chain({"table", "tr"}), unit_costs()) == 1.0);

  TableTree a(labeled("table")), b(labeled("table"));
  a.add_child(a.add_child(0, labeled("tr")), cell("a"));
  b.add_child(b.add_child(0, labeled("tr")), cell("b"));
  EditCosts half = unit_costs();
  half.rename = [](const TableNode& x, const TableNode& y) { return x == y ? 0.0 : 0.5; };
  const double expected =
      oracle::tree_edit_distance(a, b, 1.0, 1.0, [](const TableNode& x, const TableNode& y) {
        return x.text == y.text ? 0.0 : 0.5;
      });
  CHECK(expected == 0.5);
  CHECK(tree_edit_distance(a, b, half) == expected);
}

TEST_CASE("tree_edit_distance matches enumeration on classic shapes") {
  // f(d(a c(b)) e) vs f(c(d(a b)) e): the textbook pair, distance 2
  TableTree x(labeled("f"));
  const auto d = x.add_child(0, labeled("d"));
  x.add_child(d, labeled("a"));
  x.add_child(x.add_child(d, labeled("c")), labeled("b"));
  x.add_child(0, labeled("e"));
  TableTree y(labeled("f"));
  const auto c = y.add_child(0, labeled("c"));
  const auto d2 = y.add_child(c, labeled("d"));
  y.add_child(d2, labeled("a"));
  y.add_child(d2, labeled("b"));
  y.add_child(0, labeled("e"));
  const double o = oracle::tree_edit_distance(x, y, 1, 1, oracle::unit_rename);
  CHECK(o == 2.0);
  CHECK(tree_edit_distance(x, y, unit_costs()) == o);
}

TEST_CASE("tree_edit_distance random trees with asymmetric costs") {
  std::mt19937_64 rng(17);
  EditCosts costs;
  costs.insert = 0.7;
  costs.remove = 1.3;
  costs.rename = [](const TableNode& a, const TableNode& b) { return a.tag == b.tag ? 0.0 : 0.9; };
  for (int k = 0; k < 60; ++k) {
    const auto a = oracle::random_tree(rng, 1 + static_cast<int>(rng() % 5));
    const auto b = oracle::random_tree(rng, 1 + static_cast<int>(rng() % 5));
    const double o = oracle::tree_edit_distance(a, b, 0.7, 1.3, costs.rename);
    CHECK(tree_edit_distance(a, b, costs) == doctest::Approx(o).epsilon(1e-12));
  }
}

TEST_CASE("teds examples") {
  TableTree a(labeled("table")), b(labeled("table"));
  a.add_child(a.add_child(0, labeled("tr")), cell("12"));
  b.add_child(b.add_child(0, labeled("tr")), cell("13"));
  CHECK(teds(a, a) == 1.0);
  const double rename = static_cast<double>(oracle::levenshtein(U"12", U"13")) / 2.0;
  CHECK(rename == 0.5);
  const double ted = oracle::tree_edit_distance(a, b, 1, 1, [&](const TableNode& x, const TableNode& y) {
    return x.text == y.text ? 0.0 : rename;
  });
  CHECK(teds(a, b) == doctest::Approx(1.0 - ted / 3.0).epsilon(1e-12));
  CHECK(teds(a, b) == doctest::Approx(1.0 - 0.5 / 3.0).epsilon(1e-12));

  const auto one = normalize_table("<table><tr><td>1</td><td>2</td></tr></table>").tree;
  const auto two =
      normalize_table("<table><tr><td>1</td><td>2</td></tr><tr><td>1</td><td>2</td></tr></table>").tree;
  const double ted2 = oracle::tree_edit_distance(one, two, 1, 1, teds_rename_cost);
  CHECK(ted2 == 3.0);
  CHECK(teds(one, two) == doctest::Approx(1.0 - 3.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("teds_s examples") {
  const auto x = normalize_table("<table><tr><td>a</td><td>b</td></tr></table>").tree;
  const auto y = normalize_table("<table><tr><td>c</td><td>d</td></tr></table>").tree;
  CHECK(teds_s(x, y) == 1.0);
  CHECK(teds(x, y) < 1.0);
  CHECK(teds_s(x, x) == 1.0);
  const auto z = normalize_table("<table><tr><td>a</td></tr></table>").tree;
  CHECK(teds_s(x, z) == 0.75);
  const auto spans = normalize_table("<table><tr><td colspan=2>a</td></tr></table>").tree;
  CHECK(teds_rename_cost(z.node(2), spans.node(2)) == 1.0);
  CHECK(teds_s_rename_cost(z.node(2), spans.node(2)) == 1.0);
  CHECK(teds_s(z, spans) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("teds bounds and ordering on random tables") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 100; ++k) {
    const auto a = oracle::random_table(rng);
    const auto b = oracle::random_table(rng);
    const double t = teds(a, b), s = teds_s(a, b);
    CHECK(t >= 0.0);
    CHECK(t <= 1.0);
    CHECK(s >= t);
    CHECK(s <= 1.0);
  }
}
