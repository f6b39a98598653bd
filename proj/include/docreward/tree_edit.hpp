#pragma once

#include <functional>

#include "docreward/table_tree.hpp"

namespace docreward {

struct EditCosts {
  double insert = 1.0;
  double remove = 1.0;
  // Must be >= 0, symmetric, and 0 for equal labels.
  std::function<double(const TableNode&, const TableNode&)> rename;
};

// insert = remove = 1, rename = 0 if tag, spans and text all match, else 1.
EditCosts unit_costs();

// Rename cost used by TEDS: 1 when tags or spans differ, otherwise the
// normalized Levenshtein distance of the cell texts for td nodes and 0 for
// every other tag.
double teds_rename_cost(const TableNode& a, const TableNode& b);

// Rename cost used by TEDS-S: 1 when tags or spans differ, else 0.
double teds_s_rename_cost(const TableNode& a, const TableNode& b);

// Ordered tree edit distance (Zhang-Shasha keyroot dynamic program).
// Both trees must be non-empty.
double tree_edit_distance(const TableTree& a, const TableTree& b, const EditCosts& costs);

// 1 - TED / max(|a|, |b|) with unit insert/delete and the matching rename
// cost above. Results are clamped to [0, 1].
double teds(const TableTree& a, const TableTree& b);
double teds_s(const TableTree& a, const TableTree& b);

}  // namespace docreward
