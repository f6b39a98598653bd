#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace docreward {

struct TableNode {
  std::string tag;
  int rowspan = 1;
  int colspan = 1;
  std::string text;  // cell text, only meaningful on td leaves
  std::vector<std::size_t> children;

  bool operator==(const TableNode&) const = default;
};

// Rooted ordered tree stored as a node arena; node 0 is the root.
//
// Table trees produced by normalize_table() have a "table" root, but the
// edit-distance routines accept any labeled ordered tree so they can be
// exercised on arbitrary shapes.
class TableTree {
 public:
  TableTree() = default;
  explicit TableTree(TableNode root);

  std::size_t add_child(std::size_t parent, TableNode node);

  const TableNode& node(std::size_t i) const { return nodes_.at(i); }
  TableNode& node(std::size_t i) { return nodes_.at(i); }
  const TableNode& root() const { return nodes_.at(0); }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  // Bracket notation, e.g. {table{tr{td:1}}}; attributes print as td[c2].
  std::string to_string() const;

  // Structural equality (same shape, labels, spans and texts).
  bool operator==(const TableTree& other) const;

 private:
  std::vector<TableNode> nodes_;
};

}  // namespace docreward
