#include "docreward/table_tree.hpp"

#include "docreward/errors.hpp"

namespace docreward {

TableTree::TableTree(TableNode root) {
  root.children.clear();
  nodes_.push_back(std::move(root));
}

std::size_t TableTree::add_child(std::size_t parent, TableNode node) {
  if (parent >= nodes_.size()) throw ContractError("add_child: parent out of range");
  node.children.clear();
  nodes_.push_back(std::move(node));
  const std::size_t id = nodes_.size() - 1;
  nodes_[parent].children.push_back(id);
  return id;
}

namespace {

void print(const TableTree& t, std::size_t i, std::string& out) {
  const TableNode& n = t.node(i);
  out += '{';
  out += n.tag;
  if (n.rowspan != 1 || n.colspan != 1) {
    out += '[';
    if (n.rowspan != 1) out += "r" + std::to_string(n.rowspan);
    if (n.colspan != 1) out += "c" + std::to_string(n.colspan);
    out += ']';
  }
  if (!n.text.empty()) out += ":" + n.text;
  for (std::size_t c : n.children) print(t, c, out);
  out += '}';
}

bool equal_subtrees(const TableTree& a, std::size_t i, const TableTree& b, std::size_t j) {
  const TableNode& x = a.node(i);
  const TableNode& y = b.node(j);
  if (x.tag != y.tag || x.rowspan != y.rowspan || x.colspan != y.colspan ||
      x.text != y.text || x.children.size() != y.children.size())
    return false;
  for (std::size_t k = 0; k < x.children.size(); ++k)
    if (!equal_subtrees(a, x.children[k], b, y.children[k])) return false;
  return true;
}

}  // namespace

std::string TableTree::to_string() const {
  std::string out;
  if (!nodes_.empty()) print(*this, 0, out);
  return out;
}

bool TableTree::operator==(const TableTree& other) const {
  if (size() != other.size()) return false;
  if (empty()) return true;
  return equal_subtrees(*this, 0, other, 0);
}

}  // namespace docreward
