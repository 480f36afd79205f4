#pragma once

// Polarized tree descriptions.  A Ptd is a value: every operation that
// changes one (merging, juxtaposition) returns a new Ptd.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ig/feature.hpp"

namespace ig {

using NodeId = std::uint32_t;

struct NodeType {
  enum class Kind : std::uint8_t { Anchor, Full, Empty, Default };
  Kind kind = Kind::Default;
  std::string phon;  // anchors only; empty on an unanchored template slot

  static NodeType anchor(std::string phon) { return {Kind::Anchor, std::move(phon)}; }
  static NodeType full() { return {Kind::Full, {}}; }
  static NodeType empty() { return {Kind::Empty, {}}; }
  static NodeType none() { return {Kind::Default, {}}; }
  bool is_anchor() const { return kind == Kind::Anchor; }
  friend bool operator==(const NodeType&, const NodeType&) = default;
};

std::string_view node_type_name(NodeType::Kind kind);

// A node of an IPTD instance, identified by instance and local index.
struct Origin {
  std::uint32_t instance = 0;
  std::uint32_t node = 0;
  friend auto operator<=>(const Origin&, const Origin&) = default;
};

// The accumulated state of one feature name on a (possibly merged) node.
struct NodeFeature {
  PolarityCounts counts;
  ValueSet values;
  std::vector<CorefTag> corefs;  // sorted, unique
  friend bool operator==(const NodeFeature&, const NodeFeature&) = default;
};

struct DescNode {
  NodeId id = 0;
  std::string name;
  std::map<FeatureId, NodeFeature> features;
  NodeType type;
  std::vector<Origin> origin;  // sorted, non-empty

  const NodeFeature* feature(FeatureId f) const;
  Origin canonical() const { return origin.front(); }
  friend bool operator==(const DescNode&, const DescNode&) = default;
};

enum class RelationKind : std::uint8_t { Dom, Arity, LargeDom, Prec, LargePrec };
enum class EdgePosition : std::uint8_t { Any, Leftmost, Rightmost };

std::string_view relation_kind_name(RelationKind kind);

struct Relation {
  RelationKind kind = RelationKind::Dom;
  NodeId from = 0;
  NodeId to = 0;
  EdgePosition edge = EdgePosition::Any;  // Dom only
  std::vector<NodeId> daughters;          // Arity only
  std::optional<FilterStructure> filter;  // LargeDom only

  static Relation dom(NodeId m, NodeId n, EdgePosition e = EdgePosition::Any) {
    return {RelationKind::Dom, m, n, e, {}, std::nullopt};
  }
  static Relation arity(NodeId m, std::vector<NodeId> ds) {
    return {RelationKind::Arity, m, m, EdgePosition::Any, std::move(ds), std::nullopt};
  }
  static Relation large_dom(NodeId m, NodeId n, std::optional<FilterStructure> f = std::nullopt) {
    return {RelationKind::LargeDom, m, n, EdgePosition::Any, {}, std::move(f)};
  }
  static Relation prec(NodeId a, NodeId b) { return {RelationKind::Prec, a, b, EdgePosition::Any, {}, std::nullopt}; }
  static Relation large_prec(NodeId a, NodeId b) {
    return {RelationKind::LargePrec, a, b, EdgePosition::Any, {}, std::nullopt};
  }
  friend bool operator==(const Relation&, const Relation&) = default;
};

class Ptd {
 public:
  Ptd() = default;

  const std::vector<DescNode>& nodes() const { return nodes_; }
  const std::vector<Relation>& relations() const { return relations_; }
  NodeId next_id() const { return next_id_; }

  const DescNode* find(NodeId id) const;
  DescNode* find(NodeId id);
  const DescNode& at(NodeId id) const;

  // Appends a node with a fresh id.
  NodeId add_node(DescNode node);
  void add_relation(Relation r) { relations_.push_back(std::move(r)); }

  // Node whose origin set contains `o`, if any.
  std::optional<NodeId> node_of(Origin o) const;

  // Partition of origins, the identity of a PTD built from a fixed selection.
  std::vector<std::vector<Origin>> canonical_key() const;

  // Raw access for the merging engine.
  std::vector<DescNode>& mutable_nodes() { return nodes_; }
  std::vector<Relation>& mutable_relations() { return relations_; }
  void set_next_id(NodeId id) { next_id_ = id; }

  friend bool operator==(const Ptd&, const Ptd&) = default;

 private:
  std::vector<DescNode> nodes_;  // sorted by id
  std::vector<Relation> relations_;
  NodeId next_id_ = 0;
};

// Places `b` beside `a`; nodes of `b` get fresh ids.
Ptd juxtapose(const Ptd& a, const Ptd& b);

// An initial description: an unanchored template or an anchored instance.
// Node ids of the description equal local indices.
struct Iptd {
  std::string template_id;
  Ptd ptd;
  FilterStructure interface;
  NodeId anchor = 0;
  std::uint32_t instance = 0;  // 0 for templates
  std::vector<std::string> node_names;
  std::vector<std::string> coref_names;  // tag index to its written name

  std::string phon() const { return ptd.at(anchor).type.phon; }
};

// Copy of an instance ready for juxtaposition: origins carry the instance id
// and node names get `label` appended (so node A of word 2 reads "A2").
Ptd instance_ptd(const Iptd& iptd, const std::string& label);

struct Diagnostic {
  std::string code;
  std::vector<std::string> ids;
  std::string message;
};

std::vector<Diagnostic> validate_ptd(const Ptd& d);
// Includes validate_ptd, then the tree condition on dominance and large
// dominance and the anchor check.
std::vector<Diagnostic> validate_iptd(const Iptd& d);

struct UnsaturatedFeature {
  NodeId node = 0;
  FeatureId feature = 0;
  PolarityCounts polarities;
};

std::vector<UnsaturatedFeature> saturation_status(const Ptd& d);
bool is_saturated(const Ptd& d);
// Positive and negative polarities not yet neutralized.
int active_polarity_count(const Ptd& d);

}  // namespace ig
