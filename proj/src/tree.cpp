#include "ig/tree.hpp"

#include <algorithm>

#include "ig/error.hpp"

namespace ig {

AtomicFeatureStructure representative(const TreeFeatures& features) {
  AtomicFeatureStructure out;
  for (const auto& [name, values] : features) {
    if (!values.empty()) out.emplace(name, values.first());
  }
  return out;
}

std::size_t SyntacticTree::add_root(TreeFeatures features) {
  if (!nodes_.empty()) throw Error("INVALID_TREE", "tree already has a root");
  nodes_.push_back(TreeNode{std::move(features), {}, std::nullopt, std::nullopt});
  return 0;
}

std::size_t SyntacticTree::add_child(std::size_t parent, TreeFeatures features) {
  if (parent >= nodes_.size()) throw Error("INVALID_TREE", "unknown parent node");
  nodes_.push_back(TreeNode{std::move(features), {}, parent, std::nullopt});
  std::size_t id = nodes_.size() - 1;
  nodes_[parent].children.push_back(id);
  return id;
}

void SyntacticTree::set_phon(std::size_t node, std::string phon) { nodes_.at(node).phon = std::move(phon); }

bool SyntacticTree::dominates(std::size_t ancestor, std::size_t descendant) const {
  std::optional<std::size_t> cur = descendant;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = nodes_.at(*cur).parent;
  }
  return false;
}

std::size_t SyntacticTree::sibling_index(std::size_t i) const {
  const auto& p = nodes_.at(i).parent;
  if (!p) return 0;
  const auto& sisters = nodes_.at(*p).children;
  return static_cast<std::size_t>(std::find(sisters.begin(), sisters.end(), i) - sisters.begin());
}

bool SyntacticTree::well_formed() const {
  for (const auto& n : nodes_) {
    if (n.children.empty() != n.phon.has_value()) return false;
  }
  return !nodes_.empty();
}

namespace {

void project(const SyntacticTree& tree, std::size_t node, std::vector<std::string>& out) {
  const TreeNode& n = tree.node(node);
  if (n.children.empty()) {
    if (n.phon && !n.phon->empty()) out.push_back(*n.phon);
    return;
  }
  for (std::size_t c : n.children) project(tree, c, out);
}

void write_bracketed(const SyntacticTree& tree, const Signature& sig, std::size_t node, std::string& out) {
  const TreeNode& n = tree.node(node);
  out += '(';
  if (n.features.empty()) {
    out += '_';
  } else {
    bool first = true;
    for (const auto& [name, values] : n.features) {
      if (!first) out += ',';
      first = false;
      out += sig.name(name);
      out += '=';
      out += sig.format_values(name, values);
    }
  }
  if (n.children.empty()) {
    if (n.phon && !n.phon->empty()) {
      out += " \"";
      out += *n.phon;
      out += '"';
    } else {
      out += " \xCE\xB5";  // epsilon
    }
  }
  for (std::size_t c : n.children) {
    out += ' ';
    write_bracketed(tree, sig, c, out);
  }
  out += ')';
}

}  // namespace

std::vector<std::string> phonological_projection(const SyntacticTree& tree, std::size_t node) {
  std::vector<std::string> out;
  project(tree, node, out);
  return out;
}

std::optional<std::vector<std::size_t>> path(const SyntacticTree& tree, std::size_t from, std::size_t to) {
  std::vector<std::size_t> up;
  std::optional<std::size_t> cur = to;
  while (cur) {
    up.push_back(*cur);
    if (*cur == from) {
      std::reverse(up.begin(), up.end());
      return up;
    }
    cur = tree.node(*cur).parent;
  }
  return std::nullopt;
}

std::string bracketed(const SyntacticTree& tree, const Signature& sig) {
  std::string out;
  if (!tree.empty()) write_bracketed(tree, sig, tree.root(), out);
  return out;
}

std::string tree_node_name(std::size_t index) {
  std::string out;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    out.insert(out.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return out;
}

}  // namespace ig
