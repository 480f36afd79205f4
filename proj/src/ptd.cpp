#include "ig/ptd.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "ig/error.hpp"

namespace ig {

std::string_view node_type_name(NodeType::Kind kind) {
  switch (kind) {
    case NodeType::Kind::Anchor: return "anchor";
    case NodeType::Kind::Full: return "full";
    case NodeType::Kind::Empty: return "empty";
    case NodeType::Kind::Default: return "default";
  }
  return "default";
}

std::string_view relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Dom: return "dom";
    case RelationKind::Arity: return "arity";
    case RelationKind::LargeDom: return "ldom";
    case RelationKind::Prec: return "prec";
    case RelationKind::LargePrec: return "lprec";
  }
  return "dom";
}

const NodeFeature* DescNode::feature(FeatureId f) const {
  auto it = features.find(f);
  return it == features.end() ? nullptr : &it->second;
}

const DescNode* Ptd::find(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const DescNode& n, NodeId v) { return n.id < v; });
  if (it != nodes_.end() && it->id == id) return &*it;
  return nullptr;
}

DescNode* Ptd::find(NodeId id) {
  return const_cast<DescNode*>(static_cast<const Ptd*>(this)->find(id));
}

const DescNode& Ptd::at(NodeId id) const {
  const DescNode* n = find(id);
  if (!n) throw Error("UNKNOWN_NODE", "no node with id " + std::to_string(id));
  return *n;
}

NodeId Ptd::add_node(DescNode node) {
  node.id = next_id_++;
  nodes_.push_back(std::move(node));
  return nodes_.back().id;
}

std::optional<NodeId> Ptd::node_of(Origin o) const {
  for (const auto& n : nodes_) {
    if (std::binary_search(n.origin.begin(), n.origin.end(), o)) return n.id;
  }
  return std::nullopt;
}

std::vector<std::vector<Origin>> Ptd::canonical_key() const {
  std::vector<std::vector<Origin>> key;
  key.reserve(nodes_.size());
  for (const auto& n : nodes_) key.push_back(n.origin);
  std::sort(key.begin(), key.end());
  return key;
}

Ptd juxtapose(const Ptd& a, const Ptd& b) {
  Ptd out = a;
  std::map<NodeId, NodeId> remap;
  for (const auto& n : b.nodes()) remap[n.id] = out.add_node(n);
  for (Relation r : b.relations()) {
    r.from = remap.at(r.from);
    r.to = remap.at(r.to);
    for (auto& d : r.daughters) d = remap.at(d);
    out.add_relation(std::move(r));
  }
  return out;
}

Ptd instance_ptd(const Iptd& iptd, const std::string& label) {
  Ptd out = iptd.ptd;
  for (auto& n : out.mutable_nodes()) {
    n.origin = {Origin{iptd.instance, n.id}};
    std::string base = n.id < iptd.node_names.size() ? iptd.node_names[n.id] : std::to_string(n.id);
    n.name = base + label;
  }
  return out;
}

namespace {

std::string id_str(const Ptd& d, NodeId id) {
  const DescNode* n = d.find(id);
  if (n && !n->name.empty()) return n->name;
  return std::to_string(id);
}

bool has_dom(const Ptd& d, NodeId m, NodeId n) {
  for (const auto& r : d.relations()) {
    if (r.kind == RelationKind::Dom && r.from == m && r.to == n) return true;
  }
  return false;
}

}  // namespace

std::vector<Diagnostic> validate_ptd(const Ptd& d) {
  std::vector<Diagnostic> out;
  for (const auto& n : d.nodes()) {
    if (n.origin.empty()) out.push_back({"EMPTY_ORIGIN", {id_str(d, n.id)}, "node has no origin"});
    for (const auto& [f, nf] : n.features) {
      if (nf.values.empty()) {
        out.push_back({"EMPTY_VALUE", {id_str(d, n.id)}, "feature with an empty value set"});
      }
    }
  }
  bool dangling = false;
  for (const auto& r : d.relations()) {
    std::vector<NodeId> ends = {r.from, r.to};
    ends.insert(ends.end(), r.daughters.begin(), r.daughters.end());
    for (NodeId e : ends) {
      if (!d.find(e)) {
        out.push_back({"DANGLING_REF", {std::to_string(e)},
                       std::string(relation_kind_name(r.kind)) + " refers to a missing node"});
        dangling = true;
      }
    }
  }
  if (dangling) return out;

  for (const auto& r : d.relations()) {
    if (r.kind == RelationKind::Prec || r.kind == RelationKind::LargePrec) {
      if (r.from == r.to) {
        out.push_back({"ORDER_SELF", {id_str(d, r.from)}, "a node cannot precede itself"});
      }
      bool shared = false;
      for (const auto& m : d.relations()) {
        if (m.kind == RelationKind::Dom && m.to == r.from && has_dom(d, m.from, r.to)) shared = true;
      }
      if (!shared) {
        out.push_back({"PREC_NO_MOTHER", {id_str(d, r.from), id_str(d, r.to)},
                       "precedence between nodes without a common dominance mother"});
      }
    } else if (r.kind == RelationKind::Arity) {
      std::set<NodeId> seen;
      for (NodeId x : r.daughters) {
        if (!seen.insert(x).second) {
          out.push_back({"ARITY_DUPLICATE", {id_str(d, r.from), id_str(d, x)}, "daughter listed twice"});
        }
        if (!has_dom(d, r.from, x)) {
          out.push_back({"ARITY_NO_DOM", {id_str(d, r.from), id_str(d, x)},
                         "arity daughter without a dominance edge"});
        }
      }
    } else if (r.kind == RelationKind::Dom && r.from == r.to) {
      out.push_back({"DOM_CYCLE", {id_str(d, r.from)}, "a node dominates itself"});
    }
  }

  // Dominance cycles of length > 1.
  std::map<NodeId, std::vector<NodeId>> succ;
  for (const auto& r : d.relations()) {
    if (r.kind == RelationKind::Dom && r.from != r.to) succ[r.from].push_back(r.to);
  }
  std::map<NodeId, int> color;
  std::function<bool(NodeId)> visit = [&](NodeId v) {
    color[v] = 1;
    for (NodeId w : succ[v]) {
      if (color[w] == 1) return true;
      if (color[w] == 0 && visit(w)) return true;
    }
    color[v] = 2;
    return false;
  };
  for (const auto& n : d.nodes()) {
    if (color[n.id] == 0 && visit(n.id)) {
      out.push_back({"DOM_CYCLE", {id_str(d, n.id)}, "dominance edges form a cycle"});
      break;
    }
  }
  return out;
}

std::vector<Diagnostic> validate_iptd(const Iptd& iptd) {
  const Ptd& d = iptd.ptd;
  std::vector<Diagnostic> out = validate_ptd(d);
  for (const auto& diag : out) {
    if (diag.code == "DANGLING_REF") return out;
  }

  std::map<NodeId, std::vector<NodeId>> parents;
  for (const auto& r : d.relations()) {
    if (r.kind == RelationKind::Dom || r.kind == RelationKind::LargeDom) {
      auto& ps = parents[r.to];
      if (std::find(ps.begin(), ps.end(), r.from) == ps.end()) ps.push_back(r.from);
    }
  }
  std::vector<NodeId> roots;
  for (const auto& n : d.nodes()) {
    auto it = parents.find(n.id);
    if (it == parents.end()) {
      roots.push_back(n.id);
    } else if (it->second.size() > 1) {
      out.push_back({"MULTIPLE_MOTHERS", {id_str(d, n.id)}, "node has more than one mother or ancestor"});
    }
  }
  if (roots.size() != 1 && !d.nodes().empty()) {
    std::vector<std::string> ids;
    for (NodeId r : roots) ids.push_back(id_str(d, r));
    out.push_back({"NOT_A_TREE", ids, "dominance relations do not form a single tree"});
  }
  if (roots.size() == 1) {
    // Connectivity from the root.
    std::set<NodeId> reached = {roots.front()};
    std::vector<NodeId> stack = {roots.front()};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (const auto& r : d.relations()) {
        if ((r.kind == RelationKind::Dom || r.kind == RelationKind::LargeDom) && r.from == v &&
            reached.insert(r.to).second) {
          stack.push_back(r.to);
        }
      }
    }
    if (reached.size() != d.nodes().size()) {
      out.push_back({"NOT_A_TREE", {id_str(d, roots.front())}, "some nodes are unreachable from the root"});
    }
  }

  int anchors = 0;
  for (const auto& n : d.nodes()) {
    if (n.type.is_anchor()) ++anchors;
  }
  if (anchors != 1) {
    out.push_back({"ANCHOR_COUNT", {iptd.template_id}, "expected exactly one anchor, found " + std::to_string(anchors)});
  } else {
    const DescNode* a = d.find(iptd.anchor);
    if (!a || !a->type.is_anchor()) {
      out.push_back({"ANCHOR_COUNT", {iptd.template_id}, "designated anchor slot is not an anchor"});
    } else if (iptd.instance != 0 && a->type.phon.empty()) {
      out.push_back({"ANCHOR_PHON", {id_str(d, a->id)}, "anchored instance has an empty phonological form"});
    }
  }
  return out;
}

std::vector<UnsaturatedFeature> saturation_status(const Ptd& d) {
  std::vector<UnsaturatedFeature> out;
  for (const auto& n : d.nodes()) {
    for (const auto& [f, nf] : n.features) {
      if (!globally_saturated(nf.counts)) out.push_back({n.id, f, nf.counts});
    }
  }
  return out;
}

bool is_saturated(const Ptd& d) {
  for (const auto& n : d.nodes()) {
    for (const auto& [f, nf] : n.features) {
      if (!globally_saturated(nf.counts)) return false;
    }
  }
  return true;
}

int active_polarity_count(const Ptd& d) {
  int total = 0;
  for (const auto& n : d.nodes()) {
    for (const auto& [f, nf] : n.features) {
      if (!globally_saturated(nf.counts)) total += nf.counts.active();
    }
  }
  return total;
}

}  // namespace ig
