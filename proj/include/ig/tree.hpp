#pragma once

// Ordered syntactic trees: the models that parsing produces.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ig/feature.hpp"

namespace ig {

// Feature values on tree nodes.  Trees built by hand or read from files
// carry singletons; extracted trees may carry a wider set when every member
// gives a model, in which case the least member is the representative.
using TreeFeatures = std::map<FeatureId, ValueSet>;

AtomicFeatureStructure representative(const TreeFeatures& features);

struct TreeNode {
  TreeFeatures features;
  std::vector<std::size_t> children;
  std::optional<std::size_t> parent;
  // Present exactly on leaves; the empty string is epsilon.
  std::optional<std::string> phon;
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class SyntacticTree {
 public:
  SyntacticTree() = default;

  // Creates the root; returns its index (always 0).
  std::size_t add_root(TreeFeatures features);
  std::size_t add_child(std::size_t parent, TreeFeatures features);
  void set_phon(std::size_t node, std::string phon);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  std::size_t root() const { return 0; }
  const TreeNode& node(std::size_t i) const { return nodes_.at(i); }
  TreeNode& node(std::size_t i) { return nodes_.at(i); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  bool is_leaf(std::size_t i) const { return nodes_.at(i).children.empty(); }
  // Reflexive-transitive parenthood.
  bool dominates(std::size_t ancestor, std::size_t descendant) const;
  // Position of a node among its sisters.
  std::size_t sibling_index(std::size_t i) const;

  // Leaves have a phon, internal nodes do not.
  bool well_formed() const;

  friend bool operator==(const SyntacticTree&, const SyntacticTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

std::vector<std::string> phonological_projection(const SyntacticTree& tree, std::size_t node);
inline std::vector<std::string> phonological_projection(const SyntacticTree& tree) {
  return phonological_projection(tree, tree.root());
}

// Nodes from `from` down to `to` inclusive; nullopt when `from` does not
// dominate `to` (NOT_ANCESTOR).
std::optional<std::vector<std::size_t>> path(const SyntacticTree& tree, std::size_t from, std::size_t to);

// One-line bracketed form, e.g. (cat=s (cat=np "Jean") (cat=v ε)).
std::string bracketed(const SyntacticTree& tree, const Signature& sig);

// Preorder letter names: A, B, ..., Z, AA, AB, ...
std::string tree_node_name(std::size_t index);

}  // namespace ig
