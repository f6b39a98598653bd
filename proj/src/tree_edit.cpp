#include "docreward/tree_edit.hpp"

#include <algorithm>
#include <vector>

#include "docreward/errors.hpp"
#include "docreward/text_reward.hpp"

namespace docreward {

namespace {

// Postorder view of a tree with 1-based indices, as the keyroot DP expects.
struct Postorder {
  std::vector<const TableNode*> node;  // node[k], k in 1..n
  std::vector<std::size_t> leftmost;   // leftmost leaf descendant of k
  std::vector<std::size_t> keyroots;   // ascending

  explicit Postorder(const TableTree& t) {
    node.push_back(nullptr);
    leftmost.push_back(0);
    visit(t, 0);
    const std::size_t n = node.size() - 1;
    std::vector<bool> seen(n + 1, false);
    for (std::size_t k = n; k >= 1; --k) {
      if (!seen[leftmost[k]]) {
        keyroots.push_back(k);
        seen[leftmost[k]] = true;
      }
    }
    std::reverse(keyroots.begin(), keyroots.end());
  }

  std::size_t size() const { return node.size() - 1; }

 private:
  // Returns the postorder index assigned to `i`.
  std::size_t visit(const TableTree& t, std::size_t i) {
    std::size_t first_leaf = 0;
    for (std::size_t c : t.node(i).children) {
      std::size_t k = visit(t, c);
      if (first_leaf == 0) first_leaf = leftmost[k];
    }
    node.push_back(&t.node(i));
    const std::size_t self = node.size() - 1;
    leftmost.push_back(first_leaf == 0 ? self : first_leaf);
    return self;
  }
};

bool same_shape_label(const TableNode& a, const TableNode& b) {
  return a.tag == b.tag && a.rowspan == b.rowspan && a.colspan == b.colspan;
}

}  // namespace

EditCosts unit_costs() {
  EditCosts c;
  c.rename = [](const TableNode& a, const TableNode& b) {
    return same_shape_label(a, b) && a.text == b.text ? 0.0 : 1.0;
  };
  return c;
}

double teds_rename_cost(const TableNode& a, const TableNode& b) {
  if (!same_shape_label(a, b)) return 1.0;
  if (a.tag != "td") return 0.0;
  return 1.0 - text_edit_reward(a.text, b.text);
}

double teds_s_rename_cost(const TableNode& a, const TableNode& b) {
  return same_shape_label(a, b) ? 0.0 : 1.0;
}

double tree_edit_distance(const TableTree& a, const TableTree& b, const EditCosts& costs) {
  if (a.empty() || b.empty()) throw ContractError("tree_edit_distance: empty tree");
  if (!costs.rename) throw ContractError("tree_edit_distance: rename cost not set");

  const Postorder pa(a);
  const Postorder pb(b);
  const std::size_t n = pa.size();
  const std::size_t m = pb.size();

  std::vector<double> tree_dist((n + 1) * (m + 1), 0.0);
  auto td = [&](std::size_t i, std::size_t j) -> double& { return tree_dist[i * (m + 1) + j]; };

  std::vector<double> forest;
  for (std::size_t i : pa.keyroots) {
    for (std::size_t j : pb.keyroots) {
      const std::size_t li = pa.leftmost[i];
      const std::size_t lj = pb.leftmost[j];
      const std::size_t rows = i - li + 2;
      const std::size_t cols = j - lj + 2;
      forest.assign(rows * cols, 0.0);
      // fd(x, y) with x in [li-1, i], y in [lj-1, j]
      auto fd = [&](std::size_t x, std::size_t y) -> double& {
        return forest[(x - li + 1) * cols + (y - lj + 1)];
      };
      for (std::size_t x = li; x <= i; ++x) fd(x, lj - 1) = fd(x - 1, lj - 1) + costs.remove;
      for (std::size_t y = lj; y <= j; ++y) fd(li - 1, y) = fd(li - 1, y - 1) + costs.insert;

      for (std::size_t x = li; x <= i; ++x) {
        for (std::size_t y = lj; y <= j; ++y) {
          const double del = fd(x - 1, y) + costs.remove;
          const double ins = fd(x, y - 1) + costs.insert;
          if (pa.leftmost[x] == li && pb.leftmost[y] == lj) {
            const double ren = fd(x - 1, y - 1) + costs.rename(*pa.node[x], *pb.node[y]);
            fd(x, y) = std::min({del, ins, ren});
            td(x, y) = fd(x, y);
          } else {
            const double sub = fd(pa.leftmost[x] - 1, pb.leftmost[y] - 1) + td(x, y);
            fd(x, y) = std::min({del, ins, sub});
          }
        }
      }
    }
  }
  return td(n, m);
}

namespace {

double similarity(const TableTree& a, const TableTree& b,
                  double (*rename)(const TableNode&, const TableNode&)) {
  EditCosts costs;
  costs.rename = rename;
  const double dist = tree_edit_distance(a, b, costs);
  const double denom = static_cast<double>(std::max(a.size(), b.size()));
  return std::clamp(1.0 - dist / denom, 0.0, 1.0);
}

}  // namespace

double teds(const TableTree& a, const TableTree& b) {
  return similarity(a, b, &teds_rename_cost);
}

double teds_s(const TableTree& a, const TableTree& b) {
  return similarity(a, b, &teds_s_rename_cost);
}

}  // namespace docreward
