#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "ig/error.hpp"
#include "ig/parser.hpp"

namespace ig {

namespace {

using Values = std::map<NodeId, std::map<FeatureId, ValueSet>>;

// Intersects the values of co-referent features; false on an empty result.
bool close_corefs(const Ptd& d, Values& values) {
  std::map<std::pair<FeatureId, CorefTag>, std::pair<FeatureId, CorefTag>> link;
  std::function<std::pair<FeatureId, CorefTag>(std::pair<FeatureId, CorefTag>)> root = [&](auto k) {
    auto it = link.find(k);
    if (it == link.end() || it->second == k) return k;
    auto r = root(it->second);
    link[k] = r;
    return r;
  };
  for (const auto& n : d.nodes()) {
    for (const auto& [f, nf] : n.features) {
      for (std::size_t i = 1; i < nf.corefs.size(); ++i) {
        auto a = root({f, nf.corefs[0]}), b = root({f, nf.corefs[i]});
        if (a != b) link[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::map<std::pair<FeatureId, CorefTag>, ValueSet> group;
  for (const auto& n : d.nodes()) {
    for (const auto& [f, nf] : n.features) {
      if (nf.corefs.empty()) continue;
      auto r = root({f, nf.corefs.front()});
      ValueSet v = values[n.id][f];
      auto [it, fresh] = group.emplace(r, v);
      if (!fresh) it->second = it->second & v;
      if (it->second.empty()) return false;
    }
  }
  for (const auto& n : d.nodes()) {
    for (const auto& [f, nf] : n.features) {
      if (!nf.corefs.empty()) values[n.id][f] = group.at(root({f, nf.corefs.front()}));
    }
  }
  return true;
}

struct Shape {
  NodeId root = 0;
  std::map<NodeId, std::vector<NodeId>> children;  // sorted by id
  std::map<NodeId, NodeId> parent;
};

std::optional<Shape> dom_tree(const Ptd& d) {
  Shape s;
  for (const auto& r : d.relations()) {
    if (r.kind != RelationKind::Dom) continue;
    auto [it, fresh] = s.parent.emplace(r.to, r.from);
    if (!fresh && it->second != r.from) return std::nullopt;
    auto& kids = s.children[r.from];
    if (std::find(kids.begin(), kids.end(), r.to) == kids.end()) kids.push_back(r.to);
  }
  std::vector<NodeId> roots;
  for (const auto& n : d.nodes()) {
    if (!s.parent.count(n.id)) roots.push_back(n.id);
  }
  if (roots.size() != 1) return std::nullopt;
  s.root = roots.front();
  std::set<NodeId> reached;
  std::vector<NodeId> stack = {s.root};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (!reached.insert(v).second) return std::nullopt;
    auto kids = s.children.find(v);
    if (kids == s.children.end()) continue;
    for (NodeId c : kids->second) stack.push_back(c);
  }
  if (reached.size() != d.nodes().size()) return std::nullopt;
  for (auto& [m, kids] : s.children) std::sort(kids.begin(), kids.end());
  return s;
}

bool ancestor_or_self(const Shape& s, NodeId a, NodeId n) {
  while (true) {
    if (n == a) return true;
    auto it = s.parent.find(n);
    if (it == s.parent.end()) return false;
    n = it->second;
  }
}

// Every ordering of the daughters of `m` allowed by the order relations.
std::vector<std::vector<NodeId>> sister_orders(const Ptd& d, NodeId m, const std::vector<NodeId>& kids) {
  std::set<NodeId> kidset(kids.begin(), kids.end());
  std::map<NodeId, NodeId> next_of;
  std::vector<std::pair<NodeId, NodeId>> before;
  std::optional<NodeId> first, last;
  for (const auto& r : d.relations()) {
    if (r.kind == RelationKind::Dom && r.from == m) {
      if (r.edge == EdgePosition::Leftmost) {
        if (first && *first != r.to) return {};
        first = r.to;
      } else if (r.edge == EdgePosition::Rightmost) {
        if (last && *last != r.to) return {};
        last = r.to;
      }
    } else if (r.kind == RelationKind::Arity && r.from == m) {
      std::set<NodeId> ds(r.daughters.begin(), r.daughters.end());
      if (ds != kidset || r.daughters.size() != kids.size()) return {};
    } else if ((r.kind == RelationKind::Prec || r.kind == RelationKind::LargePrec) && kidset.count(r.from)) {
      if (!kidset.count(r.to)) return {};
      if (r.kind == RelationKind::Prec) {
        auto [it, fresh] = next_of.emplace(r.from, r.to);
        if (!fresh && it->second != r.to) return {};
      }
      before.emplace_back(r.from, r.to);
    }
  }
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> cur;
  std::set<NodeId> used;
  auto fits = [&](NodeId x) {
    if (used.count(x)) return false;
    if (cur.empty() && first && *first != x) return false;
    if (!cur.empty() && first && *first == x) return false;
    if (last && *last == x && cur.size() + 1 != kids.size()) return false;
    for (const auto& [a, b] : before) {
      if (b == x && !used.count(a)) return false;
    }
    if (!cur.empty()) {
      auto it = next_of.find(cur.back());
      if (it != next_of.end() && it->second != x) return false;
    }
    for (const auto& [a, b] : next_of) {
      if (b == x && (cur.empty() || cur.back() != a)) return false;
    }
    return true;
  };
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == kids.size()) {
      out.push_back(cur);
      return;
    }
    for (NodeId x : kids) {
      if (!fits(x)) continue;
      cur.push_back(x);
      used.insert(x);
      self(self);
      used.erase(x);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

struct Serialized {
  std::string text;
  bool empty_pp = true;
};

Serialized serialize(const SyntacticTree& t, std::size_t i, const std::vector<std::string>& labels, const Signature& sig,
                     bool canonical) {
  const TreeNode& n = t.node(i);
  Serialized s;
  s.text = "(";
  bool first = true;
  for (const auto& [f, v] : n.features) {
    if (!first) s.text += ',';
    first = false;
    s.text += sig.name(f) + "=" + sig.format_values(f, v);
  }
  s.text += " {" + labels[i] + "}";
  if (n.children.empty()) {
    if (n.phon && !n.phon->empty()) {
      s.text += " \"" + *n.phon + "\"";
      s.empty_pp = false;
    }
  }
  std::vector<Serialized> kids;
  for (std::size_t c : n.children) {
    kids.push_back(serialize(t, c, labels, sig, canonical));
    s.empty_pp &= kids.back().empty_pp;
  }
  if (canonical) {
    std::size_t k = 0;
    while (k < kids.size()) {
      std::size_t e = k;
      while (e < kids.size() && kids[e].empty_pp) ++e;
      std::sort(kids.begin() + static_cast<std::ptrdiff_t>(k), kids.begin() + static_cast<std::ptrdiff_t>(e),
                [](const Serialized& a, const Serialized& b) { return a.text < b.text; });
      k = e == k ? k + 1 : e;
    }
  }
  for (const auto& c : kids) s.text += " " + c.text;
  s.text += ")";
  return s;
}

std::vector<std::string> preimage_labels(const SyntacticTree& t, const Interpretation& interp,
                                         const std::vector<Iptd>& selection) {
  std::vector<std::vector<std::pair<Origin, std::string>>> parts(t.size());
  for (const auto& [o, x] : interp) parts.at(x).emplace_back(o, origin_name(selection, o));
  std::vector<std::string> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::sort(parts[i].begin(), parts[i].end());
    for (const auto& [o, s] : parts[i]) {
      if (!out[i].empty()) out[i] += ',';
      out[i] += s;
    }
  }
  return out;
}

}  // namespace

std::string canonical_model_key(const SyntacticTree& tree, const Interpretation& interp, const std::vector<Iptd>& selection,
                                const Signature& sig) {
  if (tree.empty()) return "";
  return serialize(tree, tree.root(), preimage_labels(tree, interp, selection), sig, true).text;
}

std::vector<Model> extract_models(const Ptd& d, const std::vector<Iptd>& selection, const std::vector<std::string>& words,
                                  const Signature& sig, std::size_t max_models) {
  if (!is_saturated(d)) throw Error("NOT_SATURATED", "description still has unsaturated features");
  std::vector<Model> out;
  auto shape = dom_tree(d);
  if (!shape) return out;

  Values values;
  for (const auto& n : d.nodes()) {
    for (const auto& [f, nf] : n.features) values[n.id][f] = nf.values;
  }
  if (!close_corefs(d, values)) return out;

  // Large dominance obligations.
  for (const auto& r : d.relations()) {
    if (r.kind == RelationKind::LargeDom && !ancestor_or_self(*shape, r.from, r.to)) return out;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : d.relations()) {
      if (r.kind != RelationKind::LargeDom || !r.filter) continue;
      NodeId x = r.to;
      while (true) {
        for (const auto& pf : r.filter->features()) {
          auto it = values[x].find(pf.name);
          if (it == values[x].end()) continue;
          ValueSet narrowed = it->second & pf.values;
          if (narrowed.empty()) return out;
          if (narrowed != it->second) {
            it->second = narrowed;
            changed = true;
          }
        }
        if (x == r.from) break;
        x = shape->parent.at(x);
      }
    }
    if (changed && !close_corefs(d, values)) return out;
  }

  std::map<NodeId, std::vector<std::vector<NodeId>>> orders;
  for (const auto& [m, kids] : shape->children) {
    orders[m] = sister_orders(d, m, kids);
    if (orders[m].empty()) return out;
  }

  // Depth-first linearization against the words.
  constexpr std::size_t kMaxLinearizations = 20000;
  std::vector<std::map<NodeId, std::size_t>> found;
  std::map<NodeId, std::size_t> chosen;
  auto leaf_phon = [&](NodeId x) {
    const DescNode& n = d.at(x);
    return n.type.is_anchor() ? n.type.phon : std::string();
  };
  auto walk = [&](auto&& self, std::vector<NodeId> pending, std::size_t pos) -> void {
    if (found.size() >= kMaxLinearizations) return;
    if (pending.empty()) {
      if (pos == words.size()) found.push_back(chosen);
      return;
    }
    NodeId x = pending.back();
    pending.pop_back();
    auto it = orders.find(x);
    if (it == orders.end()) {
      std::string phon = leaf_phon(x);
      if (phon.empty()) {
        self(self, pending, pos);
      } else if (pos < words.size() && words[pos] == phon) {
        self(self, pending, pos + 1);
      }
      return;
    }
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      auto next = pending;
      const auto& order = it->second[k];
      for (auto c = order.rbegin(); c != order.rend(); ++c) next.push_back(*c);
      chosen[x] = k;
      self(self, next, pos);
    }
    chosen.erase(x);
  };
  walk(walk, {shape->root}, 0);

  std::map<std::string, std::pair<std::string, Model>> best;
  for (const auto& assignment : found) {
    SyntacticTree tree;
    Interpretation interp;
    auto build = [&](auto&& self, NodeId x, std::optional<std::size_t> parent) -> void {
      TreeFeatures feats(values[x].begin(), values[x].end());
      std::size_t idx = parent ? tree.add_child(*parent, feats) : tree.add_root(feats);
      for (const auto& o : d.at(x).origin) interp[o] = idx;
      auto it = orders.find(x);
      if (it == orders.end()) {
        tree.set_phon(idx, leaf_phon(x));
        return;
      }
      for (NodeId c : it->second[assignment.at(x)]) self(self, c, idx);
    };
    build(build, shape->root, std::nullopt);
    if (!check_model(tree, selection, interp, sig).ok) continue;
    auto labels = preimage_labels(tree, interp, selection);
    std::string key = serialize(tree, tree.root(), labels, sig, true).text;
    std::string actual = serialize(tree, tree.root(), labels, sig, false).text;
    auto it = best.find(key);
    if (it == best.end() || actual < it->second.first) {
      best[key] = {actual, Model{std::move(tree), std::move(interp), key}};
    }
  }
  for (auto& [key, entry] : best) {
    if (out.size() >= max_models) break;
    out.push_back(std::move(entry.second));
  }
  return out;
}

}  // namespace ig
