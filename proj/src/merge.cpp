#include "ig/merge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace ig {

std::string_view merge_error_code(MergeError e) {
  switch (e) {
    case MergeError::PolarityClash: return "POLARITY_CLASH";
    case MergeError::ValueClash: return "VALUE_CLASH";
    case MergeError::TypeClash: return "TYPE_CLASH";
    case MergeError::OrderClash: return "ORDER_CLASH";
    case MergeError::StructClash: return "STRUCT_CLASH";
    case MergeError::AnchorClash: return "ANCHOR_CLASH";
  }
  return "STRUCT_CLASH";
}

std::optional<NodeType> node_type_combine(const NodeType& x, const NodeType& y) {
  using K = NodeType::Kind;
  if (x.kind == K::Default) return y;
  if (y.kind == K::Default) return x;
  if (x.kind == y.kind) {
    if (x.kind == K::Anchor) return std::nullopt;
    return x;
  }
  if (x.kind == K::Anchor && y.kind == K::Full) return x;
  if (y.kind == K::Anchor && x.kind == K::Full) return y;
  return std::nullopt;
}

namespace {

struct Clash {
  MergeError error;
  std::string message;
};

// Combines the features and types of several nodes into one.
std::optional<Clash> combine_into(DescNode& acc, const DescNode& other) {
  if (acc.type.is_anchor() && other.type.is_anchor()) {
    return Clash{MergeError::AnchorClash, "two anchors cannot be identified"};
  }
  auto t = node_type_combine(acc.type, other.type);
  if (!t) {
    return Clash{MergeError::TypeClash, std::string("node types ") + std::string(node_type_name(acc.type.kind)) +
                                            " and " + std::string(node_type_name(other.type.kind)) + " clash"};
  }
  acc.type = *t;
  for (const auto& [f, nf] : other.features) {
    auto it = acc.features.find(f);
    if (it == acc.features.end()) {
      acc.features.emplace(f, nf);
      continue;
    }
    NodeFeature& mine = it->second;
    mine.counts = mine.counts + nf.counts;
    if (mine.counts.positive > 1 || mine.counts.negative > 1) {
      return Clash{MergeError::PolarityClash, "feature accumulates two polarities of the same sign"};
    }
    mine.values = mine.values & nf.values;
    if (mine.values.empty()) return Clash{MergeError::ValueClash, "feature values have an empty intersection"};
    std::vector<CorefTag> tags;
    std::set_union(mine.corefs.begin(), mine.corefs.end(), nf.corefs.begin(), nf.corefs.end(),
                   std::back_inserter(tags));
    mine.corefs = std::move(tags);
  }
  std::vector<Origin> origin;
  std::set_union(acc.origin.begin(), acc.origin.end(), other.origin.begin(), other.origin.end(),
                 std::back_inserter(origin));
  acc.origin = std::move(origin);
  return std::nullopt;
}

// The clash combine_into would report, without building the merged node.
std::optional<Clash> clash_of(const DescNode& x, const DescNode& y) {
  if (x.type.is_anchor() && y.type.is_anchor()) {
    return Clash{MergeError::AnchorClash, "two anchors cannot be identified"};
  }
  if (!node_type_combine(x.type, y.type)) {
    return Clash{MergeError::TypeClash, std::string("node types ") + std::string(node_type_name(x.type.kind)) +
                                            " and " + std::string(node_type_name(y.type.kind)) + " clash"};
  }
  for (const auto& [f, nf] : y.features) {
    auto it = x.features.find(f);
    if (it == x.features.end()) continue;
    PolarityCounts c = it->second.counts + nf.counts;
    if (c.positive > 1 || c.negative > 1) {
      return Clash{MergeError::PolarityClash, "feature accumulates two polarities of the same sign"};
    }
    if ((it->second.values & nf.values).empty()) {
      return Clash{MergeError::ValueClash, "feature values have an empty intersection"};
    }
  }
  return std::nullopt;
}

// Merges the '+'-separated name parts of two nodes in origin order.
std::string merged_name(const std::vector<const DescNode*>& members) {
  std::vector<std::pair<Origin, std::string>> parts;
  for (const DescNode* n : members) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (true) {
      std::size_t plus = n->name.find('+', start);
      names.push_back(n->name.substr(start, plus == std::string::npos ? std::string::npos : plus - start));
      if (plus == std::string::npos) break;
      start = plus + 1;
    }
    if (names.size() == n->origin.size()) {
      for (std::size_t i = 0; i < names.size(); ++i) parts.emplace_back(n->origin[i], names[i]);
    } else {
      parts.emplace_back(n->origin.front(), n->name);
    }
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& [o, s] : parts) {
    if (!out.empty()) out += '+';
    out += s;
  }
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

bool dom_path_exists(const std::map<NodeId, std::vector<NodeId>>& children, NodeId from, NodeId to) {
  std::vector<NodeId> stack = {from};
  std::set<NodeId> seen;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (!seen.insert(v).second) continue;
    auto it = children.find(v);
    if (it != children.end()) stack.insert(stack.end(), it->second.begin(), it->second.end());
  }
  return false;
}

MergeResult run(const Ptd& d, std::optional<std::pair<NodeId, NodeId>> primary) {
  if (primary) {
    const DescNode* x = d.find(primary->first);
    const DescNode* y = d.find(primary->second);
    if (!x || !y || x == y) return MergeResult::failure(MergeError::StructClash, "merge requires two distinct existing nodes");
    if (auto c = clash_of(*x, *y)) return MergeResult::failure(c->error, c->message);
  }
  const auto& nodes = d.nodes();
  const std::size_t n = nodes.size();
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[nodes[i].id] = i;

  UnionFind uf(n);
  if (primary) uf.unite(index[primary->first], index[primary->second]);

  const auto& rels = d.relations();
  auto cls = [&](NodeId id) { return uf.find(index.at(id)); };

  // Structural propagation to a fixpoint.
  while (true) {
    std::vector<std::pair<std::size_t, std::size_t>> todo;
    std::map<std::size_t, std::set<std::size_t>> mothers, succ, pred, leftmost, rightmost, daughters;
    for (const auto& r : rels) {
      std::size_t a = cls(r.from), b = cls(r.to);
      switch (r.kind) {
        case RelationKind::Dom:
          if (a == b) return MergeResult::failure(MergeError::StructClash, "a node would dominate itself");
          mothers[b].insert(a);
          daughters[a].insert(b);
          if (r.edge == EdgePosition::Leftmost) leftmost[a].insert(b);
          if (r.edge == EdgePosition::Rightmost) rightmost[a].insert(b);
          break;
        case RelationKind::Prec:
          succ[a].insert(b);
          pred[b].insert(a);
          break;
        default: break;
      }
    }
    auto collapse = [&](const std::map<std::size_t, std::set<std::size_t>>& groups) {
      for (const auto& [key, members] : groups) {
        for (auto it = std::next(members.begin()); it != members.end(); ++it) todo.emplace_back(*members.begin(), *it);
      }
    };
    collapse(mothers);
    collapse(succ);
    collapse(pred);
    collapse(leftmost);
    collapse(rightmost);
    // A daughter that is both leftmost and rightmost is the only daughter.
    for (const auto& [m, ls] : leftmost) {
      auto rit = rightmost.find(m);
      if (rit == rightmost.end()) continue;
      if (ls.size() == 1 && rit->second.size() == 1 && *ls.begin() == *rit->second.begin()) {
        for (std::size_t c : daughters[m]) todo.emplace_back(*ls.begin(), c);
      }
    }
    for (const auto& r : rels) {
      if (r.kind == RelationKind::Arity && r.daughters.size() == 1) {
        std::size_t only = cls(r.daughters.front());
        for (std::size_t c : daughters[cls(r.from)]) todo.emplace_back(only, c);
      }
    }
    bool changed = false;
    for (const auto& [x, y] : todo) changed |= uf.unite(x, y);
    if (!changed) break;
  }

  // Build the quotient nodes.
  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) classes[uf.find(i)].push_back(i);

  Ptd out;
  std::map<std::size_t, NodeId> class_id;
  std::vector<std::pair<std::size_t, DescNode>> merged;
  for (const auto& [root, members] : classes) {
    if (members.size() == 1) {
      class_id[root] = nodes[members.front()].id;
      continue;
    }
    DescNode acc = nodes[members.front()];
    std::vector<const DescNode*> ptrs = {&nodes[members.front()]};
    for (std::size_t k = 1; k < members.size(); ++k) {
      if (auto c = combine_into(acc, nodes[members[k]])) {
        return MergeResult::failure(MergeError::StructClash,
                                    "propagated identification fails: " + std::string(merge_error_code(c->error)));
      }
      ptrs.push_back(&nodes[members[k]]);
    }
    acc.name = merged_name(ptrs);
    merged.emplace_back(root, std::move(acc));
  }
  // Survivors keep their ids; merged nodes get fresh ids in canonical order.
  std::sort(merged.begin(), merged.end(),
            [](const auto& x, const auto& y) { return x.second.origin.front() < y.second.origin.front(); });
  std::vector<DescNode> result_nodes;
  for (const auto& [root, members] : classes) {
    if (members.size() == 1) result_nodes.push_back(nodes[members.front()]);
  }
  std::sort(result_nodes.begin(), result_nodes.end(), [](const DescNode& x, const DescNode& y) { return x.id < y.id; });
  NodeId next = d.next_id();
  for (auto& [root, m] : merged) {
    m.id = next++;
    class_id[root] = m.id;
    result_nodes.push_back(std::move(m));
  }
  auto new_id = [&](NodeId old) { return class_id.at(cls(old)); };

  // Remap relations, dropping duplicates.
  std::vector<Relation> result_rels;
  for (Relation r : rels) {
    r.from = new_id(r.from);
    r.to = new_id(r.to);
    for (auto& x : r.daughters) x = new_id(x);
    if (r.kind == RelationKind::Arity) {
      std::vector<NodeId> sorted = r.daughters;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        return MergeResult::failure(MergeError::StructClash, "two arity daughters would be identified");
      }
    }
    if (std::find(result_rels.begin(), result_rels.end(), r) == result_rels.end()) result_rels.push_back(std::move(r));
  }

  // Dominance acyclicity.
  std::map<NodeId, std::vector<NodeId>> children;
  for (const auto& r : result_rels) {
    if (r.kind == RelationKind::Dom) children[r.from].push_back(r.to);
  }
  {
    std::map<NodeId, int> color;
    std::function<bool(NodeId)> cyclic = [&](NodeId v) {
      color[v] = 1;
      for (NodeId w : children[v]) {
        if (color[w] == 1 || (color[w] == 0 && cyclic(w))) return true;
      }
      color[v] = 2;
      return false;
    };
    for (const auto& node : result_nodes) {
      if (color[node.id] == 0 && cyclic(node.id)) {
        return MergeResult::failure(MergeError::StructClash, "dominance edges would form a cycle");
      }
    }
  }

  // Large dominance: a strict dominance chain in the other direction is fatal.
  for (const auto& r : result_rels) {
    if (r.kind == RelationKind::LargeDom && r.from != r.to && dom_path_exists(children, r.to, r.from)) {
      return MergeResult::failure(MergeError::StructClash, "large dominance contradicts a dominance chain");
    }
  }

  // Order relations.
  std::map<NodeId, std::vector<NodeId>> before;
  std::map<NodeId, EdgePosition> position;
  for (const auto& r : result_rels) {
    if (r.kind == RelationKind::Dom && r.edge != EdgePosition::Any) {
      auto [it, fresh] = position.emplace(r.to, r.edge);
      if (!fresh && it->second != r.edge) {
        // Both leftmost and rightmost: the only daughter, already collapsed.
        it->second = EdgePosition::Any;
      }
    }
  }
  for (const auto& r : result_rels) {
    if (r.kind != RelationKind::Prec && r.kind != RelationKind::LargePrec) continue;
    if (r.from == r.to) return MergeResult::failure(MergeError::OrderClash, "a node would precede itself");
    before[r.from].push_back(r.to);
    auto pf = position.find(r.to);
    if (pf != position.end() && pf->second == EdgePosition::Leftmost) {
      return MergeResult::failure(MergeError::OrderClash, "a leftmost daughter would have a left sister");
    }
    auto pt = position.find(r.from);
    if (pt != position.end() && pt->second == EdgePosition::Rightmost) {
      return MergeResult::failure(MergeError::OrderClash, "a rightmost daughter would have a right sister");
    }
  }
  {
    std::map<NodeId, int> color;
    std::function<bool(NodeId)> cyclic = [&](NodeId v) {
      color[v] = 1;
      for (NodeId w : before[v]) {
        if (color[w] == 1 || (color[w] == 0 && cyclic(w))) return true;
      }
      color[v] = 2;
      return false;
    };
    for (const auto& node : result_nodes) {
      if (color[node.id] == 0 && cyclic(node.id)) {
        return MergeResult::failure(MergeError::OrderClash, "precedence relations would form a cycle");
      }
    }
  }

  // Co-reference closure per feature name.
  std::map<std::pair<FeatureId, CorefTag>, ValueSet> group_values;
  std::map<std::pair<FeatureId, CorefTag>, std::pair<FeatureId, CorefTag>> link;
  std::function<std::pair<FeatureId, CorefTag>(std::pair<FeatureId, CorefTag>)> root_of = [&](auto k) {
    auto it = link.find(k);
    if (it == link.end() || it->second == k) return k;
    auto r = root_of(it->second);
    link[k] = r;
    return r;
  };
  for (const auto& node : result_nodes) {
    for (const auto& [f, nf] : node.features) {
      for (std::size_t i = 1; i < nf.corefs.size(); ++i) {
        auto ra = root_of({f, nf.corefs[0]}), rb = root_of({f, nf.corefs[i]});
        if (ra != rb) link[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }
  for (const auto& node : result_nodes) {
    for (const auto& [f, nf] : node.features) {
      if (nf.corefs.empty()) continue;
      auto r = root_of({f, nf.corefs.front()});
      auto [it, fresh] = group_values.emplace(r, nf.values);
      if (!fresh) it->second = it->second & nf.values;
      if (it->second.empty()) {
        return MergeResult::failure(MergeError::ValueClash, "co-referent values have an empty intersection");
      }
    }
  }
  for (auto& node : result_nodes) {
    for (auto& [f, nf] : node.features) {
      if (!nf.corefs.empty()) nf.values = group_values.at(root_of({f, nf.corefs.front()}));
    }
  }

  for (auto& node : result_nodes) out.mutable_nodes().push_back(std::move(node));
  out.mutable_relations() = std::move(result_rels);
  out.set_next_id(next);
  return MergeResult::success(std::move(out), static_cast<int>(n - classes.size()));
}

std::tuple<const std::string*, Origin, Origin> candidate_key(const Signature& sig, const Ptd& d,
                                                             const MergeCandidate& c) {
  Origin x = d.at(c.a).canonical(), y = d.at(c.b).canonical();
  return {&sig.name(c.feature), std::min(x, y), std::max(x, y)};
}

}  // namespace

MergeResult merge_nodes(const Ptd& d, NodeId a, NodeId b) { return run(d, std::make_pair(a, b)); }

MergeResult propagate(const Ptd& d) { return run(d, std::nullopt); }

std::vector<MergeCandidate> candidate_merges(const Ptd& d, const Signature& sig) {
  std::vector<MergeCandidate> out;
  const auto& nodes = d.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& [f, fi] : nodes[i].features) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (i == j) continue;
        const NodeFeature* fj = nodes[j].feature(f);
        if (!fj) continue;
        bool dual = fi.counts.positive == 1 && fi.counts.negative == 0 && fj->counts.negative == 1 &&
                    fj->counts.positive == 0;
        bool attach = fi.counts.only_virtual() &&
                      (fj->counts.positive + fj->counts.negative + fj->counts.neutral) >= 1;
        if (!dual && !attach) continue;
        NodeId a = nodes[i].id, b = nodes[j].id;
        if (nodes[j].canonical() < nodes[i].canonical()) std::swap(a, b);
        out.push_back({a, b, f, attach && !dual});
      }
    }
  }
  std::sort(out.begin(), out.end(), [&](const MergeCandidate& x, const MergeCandidate& y) {
    auto kx = candidate_key(sig, d, x), ky = candidate_key(sig, d, y);
    if (*std::get<0>(kx) != *std::get<0>(ky)) return *std::get<0>(kx) < *std::get<0>(ky);
    if (std::get<1>(kx) != std::get<1>(ky)) return std::get<1>(kx) < std::get<1>(ky);
    if (std::get<2>(kx) != std::get<2>(ky)) return std::get<2>(kx) < std::get<2>(ky);
    return x.virtual_attachment < y.virtual_attachment;
  });
  std::vector<MergeCandidate> unique;
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& c : out) {
    if (seen.insert({c.a, c.b}).second) unique.push_back(c);
  }
  return unique;
}

bool large_dom_realized(const Ptd& d, const Relation& r) {
  if (r.kind != RelationKind::LargeDom) return false;
  if (r.from == r.to) return true;
  std::map<NodeId, std::vector<NodeId>> children;
  for (const auto& x : d.relations()) {
    if (x.kind == RelationKind::Dom) children[x.from].push_back(x.to);
  }
  return dom_path_exists(children, r.from, r.to);
}

}  // namespace ig
