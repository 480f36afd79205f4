#include "ig/model.hpp"

#include <algorithm>
#include <set>

#include "ig/error.hpp"

namespace ig {

const std::vector<std::string>& model_conditions() {
  static const std::vector<std::string> tags = {"DOM",      "LDOM",     "PREC",     "LPREC",
                                                "FEAT",     "COREF",    "NODETYPE", "SAT",
                                                "MIN-SURJ", "MIN-EDGE", "MIN-FEAT", "MIN-PHON"};
  return tags;
}

std::string origin_name(const std::vector<Iptd>& ds, Origin o) {
  for (const auto& d : ds) {
    if (d.instance == o.instance) {
      std::string base = o.node < d.node_names.size() ? d.node_names[o.node] : std::to_string(o.node);
      return base + std::to_string(o.instance);
    }
  }
  return std::to_string(o.node) + "@" + std::to_string(o.instance);
}

namespace {

struct TreeFacts {
  std::vector<std::vector<std::string>> pp;
  std::vector<AtomicFeatureStructure> rep;
};

TreeFacts tree_facts(const SyntacticTree& t) {
  TreeFacts f;
  f.pp.resize(t.size());
  f.rep.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    f.pp[i] = phonological_projection(t, i);
    f.rep[i] = representative(t.node(i).features);
  }
  return f;
}

bool is_mother(const SyntacticTree& t, std::size_t m, std::size_t n) {
  return t.node(n).parent && *t.node(n).parent == m;
}

// Dominance with edge position and arity, for one relation.
bool dom_holds(const SyntacticTree& t, const Relation& r, std::size_t m, std::size_t n) {
  if (!is_mother(t, m, n)) return false;
  const auto& kids = t.node(m).children;
  if (r.edge == EdgePosition::Leftmost) return kids.front() == n;
  if (r.edge == EdgePosition::Rightmost) return kids.back() == n;
  return true;
}

bool arity_holds(const SyntacticTree& t, std::size_t m, const std::vector<std::size_t>& images) {
  std::set<std::size_t> distinct(images.begin(), images.end());
  if (distinct.size() != images.size()) return false;
  const auto& kids = t.node(m).children;
  if (kids.size() != images.size()) return false;
  return std::set<std::size_t>(kids.begin(), kids.end()) == distinct;
}

}  // namespace

ModelVerdict check_model(const SyntacticTree& tree, const std::vector<Iptd>& ds, const Interpretation& interp,
                         const Signature& sig) {
  // Totality.
  std::size_t expected = 0;
  for (const auto& d : ds) {
    for (const auto& n : d.ptd.nodes()) {
      ++expected;
      auto it = interp.find(Origin{d.instance, n.id});
      if (it == interp.end()) {
        throw Error("INTERPRETATION_NOT_TOTAL", "description node " + origin_name(ds, {d.instance, n.id}) + " is unmapped");
      }
      if (it->second >= tree.size()) {
        throw Error("INTERPRETATION_NOT_TOTAL", "description node " + origin_name(ds, {d.instance, n.id}) +
                                                    " is mapped outside the tree");
      }
    }
  }
  if (interp.size() != expected) {
    throw Error("INTERPRETATION_NOT_TOTAL", "interpretation mentions unknown description nodes");
  }

  const TreeFacts facts = tree_facts(tree);
  std::vector<std::vector<std::pair<const Iptd*, const DescNode*>>> preimage(tree.size());
  for (const auto& d : ds) {
    for (const auto& n : d.ptd.nodes()) preimage[interp.at({d.instance, n.id})].emplace_back(&d, &n);
  }
  ModelVerdict v;
  auto report = [&](const std::string& tag, std::vector<std::string> ids, std::string msg) {
    v.violations.push_back({tag, std::move(ids), std::move(msg)});
  };
  auto img = [&](const Iptd& d, NodeId id) { return interp.at({d.instance, id}); };
  auto nm = [&](const Iptd& d, NodeId id) { return origin_name(ds, {d.instance, id}); };

  // Dominance adequacy, edge positions and arity included.
  for (const auto& d : ds) {
    for (const auto& r : d.ptd.relations()) {
      if (r.kind == RelationKind::Dom && !dom_holds(tree, r, img(d, r.from), img(d, r.to))) {
        report("DOM", {nm(d, r.from), nm(d, r.to)}, "image is not the required daughter");
      } else if (r.kind == RelationKind::Arity) {
        std::vector<std::size_t> images;
        for (NodeId x : r.daughters) images.push_back(img(d, x));
        if (!arity_holds(tree, img(d, r.from), images)) {
          report("DOM", {nm(d, r.from)}, "daughters do not match the arity constraint");
        }
      }
    }
  }
  // Large dominance adequacy with filters along the path.
  for (const auto& d : ds) {
    for (const auto& r : d.ptd.relations()) {
      if (r.kind != RelationKind::LargeDom) continue;
      auto p = path(tree, img(d, r.from), img(d, r.to));
      if (!p) {
        report("LDOM", {nm(d, r.from), nm(d, r.to)}, "image is not in the subtree");
        continue;
      }
      if (!r.filter) continue;
      for (std::size_t x : *p) {
        if (!compatible(facts.rep[x], *r.filter)) {
          report("LDOM", {nm(d, r.from), nm(d, r.to), tree_node_name(x)}, "path node is incompatible with the filter");
          break;
        }
      }
    }
  }
  // Precedence adequacy: immediate sisters.
  for (const auto& d : ds) {
    for (const auto& r : d.ptd.relations()) {
      if (r.kind != RelationKind::Prec) continue;
      std::size_t a = img(d, r.from), b = img(d, r.to);
      const auto& pa = tree.node(a).parent;
      bool ok = pa && tree.node(b).parent == pa && tree.sibling_index(a) + 1 == tree.sibling_index(b);
      if (!ok) report("PREC", {nm(d, r.from), nm(d, r.to)}, "images are not immediate sisters");
    }
  }
  // Large precedence adequacy: same mother, strictly earlier.
  for (const auto& d : ds) {
    for (const auto& r : d.ptd.relations()) {
      if (r.kind != RelationKind::LargePrec) continue;
      std::size_t a = img(d, r.from), b = img(d, r.to);
      const auto& pa = tree.node(a).parent;
      bool ok = pa && tree.node(b).parent == pa && tree.sibling_index(a) < tree.sibling_index(b);
      if (!ok) report("LPREC", {nm(d, r.from), nm(d, r.to)}, "images are not ordered sisters");
    }
  }
  // Feature adequacy.
  for (std::size_t t = 0; t < tree.size(); ++t) {
    for (const auto& [f, value] : facts.rep[t]) {
      for (const auto& [d, n] : preimage[t]) {
        const NodeFeature* nf = n->feature(f);
        if (nf && !nf->values.contains(value)) {
          report("FEAT", {nm(*d, n->id), tree_node_name(t)},
                 "value " + sig.value_name(f, value) + " is not admissible for " + sig.name(f));
        }
      }
    }
  }
  for (const auto& d : ds) {
    const auto& nodes = d.ptd.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        for (const auto& [f, fi] : nodes[i].features) {
          const NodeFeature* fj = nodes[j].feature(f);
          if (!fj || fi.corefs.empty() || fj->corefs.empty()) continue;
          bool shared = false;
          for (const auto& tag : fi.corefs) {
            shared |= std::find(fj->corefs.begin(), fj->corefs.end(), tag) != fj->corefs.end();
          }
          if (!shared) continue;
          const auto& ri = facts.rep[img(d, nodes[i].id)];
          const auto& rj = facts.rep[img(d, nodes[j].id)];
          auto vi = ri.find(f), vj = rj.find(f);
          if (vi == ri.end() || vj == rj.end() || vi->second != vj->second) {
            report("COREF", {nm(d, nodes[i].id), nm(d, nodes[j].id)}, "co-referent values of " + sig.name(f) + " differ");
          }
        }
      }
    }
  }
  // Node type adequacy.
  for (const auto& d : ds) {
    for (const auto& n : d.ptd.nodes()) {
      const auto& pp = facts.pp[img(d, n.id)];
      switch (n.type.kind) {
        case NodeType::Kind::Anchor:
          if (pp != std::vector<std::string>{n.type.phon}) {
            report("NODETYPE", {nm(d, n.id)}, "anchor image does not project [" + n.type.phon + "]");
          }
          break;
        case NodeType::Kind::Empty:
          if (!pp.empty()) report("NODETYPE", {nm(d, n.id)}, "empty node image has a non-empty projection");
          break;
        case NodeType::Kind::Full:
          if (pp.empty()) report("NODETYPE", {nm(d, n.id)}, "full node image has an empty projection");
          break;
        case NodeType::Kind::Default: break;
      }
    }
  }
  // Saturation.
  for (std::size_t t = 0; t < tree.size(); ++t) {
    std::map<FeatureId, PolarityCounts> counts;
    for (const auto& [d, n] : preimage[t]) {
      for (const auto& [f, nf] : n->features) counts[f] = counts[f] + nf.counts;
    }
    for (const auto& [f, c] : counts) {
      if (!globally_saturated(c)) report("SAT", {tree_node_name(t)}, sig.name(f) + " is not saturated");
    }
  }
  // Minimality.
  for (std::size_t t = 0; t < tree.size(); ++t) {
    if (preimage[t].empty()) report("MIN-SURJ", {tree_node_name(t)}, "tree node has no preimage");
  }
  for (std::size_t t = 0; t < tree.size(); ++t) {
    for (std::size_t c : tree.node(t).children) {
      bool witnessed = false;
      for (const auto& d : ds) {
        for (const auto& r : d.ptd.relations()) {
          if (r.kind == RelationKind::Dom && img(d, r.from) == t && img(d, r.to) == c) witnessed = true;
        }
      }
      if (!witnessed) report("MIN-EDGE", {tree_node_name(t), tree_node_name(c)}, "edge without a dominance preimage");
    }
  }
  for (std::size_t t = 0; t < tree.size(); ++t) {
    for (const auto& [f, values] : tree.node(t).features) {
      bool found = false;
      for (const auto& [d, n] : preimage[t]) found |= n->feature(f) != nullptr;
      if (!found) report("MIN-FEAT", {tree_node_name(t)}, sig.name(f) + " appears in no preimage");
    }
  }
  for (std::size_t t = 0; t < tree.size(); ++t) {
    const auto& node = tree.node(t);
    if (!node.children.empty() || !node.phon || node.phon->empty()) continue;
    int anchors = 0;
    for (const auto& [d, n] : preimage[t]) {
      if (n->type.is_anchor() && n->type.phon == *node.phon) ++anchors;
    }
    if (anchors != 1) {
      report("MIN-PHON", {tree_node_name(t)},
             "leaf \"" + *node.phon + "\" has " + std::to_string(anchors) + " matching anchors");
    }
  }
  v.ok = v.violations.empty();
  return v;
}

std::vector<Interpretation> find_interpretations(const SyntacticTree& tree, const std::vector<Iptd>& ds,
                                                 const Signature& sig, std::size_t limit, std::size_t bound) {
  std::vector<std::pair<const Iptd*, const DescNode*>> order;
  for (const auto& d : ds) {
    for (const auto& n : d.ptd.nodes()) order.emplace_back(&d, &n);
  }
  if (order.size() > bound) {
    throw Error("ORACLE_TOO_LARGE", std::to_string(order.size()) + " description nodes exceed the oracle bound of " +
                                        std::to_string(bound));
  }
  std::vector<Interpretation> out;
  if (tree.empty() || limit == 0) return out;
  const TreeFacts facts = tree_facts(tree);

  // Unary candidates per description node.
  std::vector<std::vector<std::size_t>> domain(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const DescNode& n = *order[k].second;
    for (std::size_t t = 0; t < tree.size(); ++t) {
      const auto& pp = facts.pp[t];
      if (n.type.kind == NodeType::Kind::Anchor && pp != std::vector<std::string>{n.type.phon}) continue;
      if (n.type.kind == NodeType::Kind::Empty && !pp.empty()) continue;
      if (n.type.kind == NodeType::Kind::Full && pp.empty()) continue;
      bool feat_ok = true;
      for (const auto& [f, value] : facts.rep[t]) {
        const NodeFeature* nf = n.feature(f);
        if (nf && !nf->values.contains(value)) feat_ok = false;
      }
      if (feat_ok) domain[k].push_back(t);
    }
  }
  // Dominance constraints checked as soon as both ends are assigned.
  std::map<Origin, std::size_t> position;
  for (std::size_t k = 0; k < order.size(); ++k) position[{order[k].first->instance, order[k].second->id}] = k;
  std::vector<std::vector<std::pair<std::size_t, const Relation*>>> checks(order.size());
  for (const auto& d : ds) {
    for (const auto& r : d.ptd.relations()) {
      if (r.kind != RelationKind::Dom) continue;
      std::size_t a = position.at({d.instance, r.from}), b = position.at({d.instance, r.to});
      checks[std::max(a, b)].emplace_back(a == std::max(a, b) ? b : a, &r);
    }
  }

  std::vector<std::size_t> assign(order.size());
  Interpretation interp;
  auto recurse = [&](auto&& self, std::size_t k) -> void {
    if (out.size() >= limit) return;
    if (k == order.size()) {
      if (check_model(tree, ds, interp, sig).ok) out.push_back(interp);
      return;
    }
    const Origin o{order[k].first->instance, order[k].second->id};
    for (std::size_t t : domain[k]) {
      assign[k] = t;
      bool ok = true;
      for (const auto& [other, r] : checks[k]) {
        std::size_t m = position.at({o.instance, r->from}) == k ? t : assign[other];
        std::size_t n = position.at({o.instance, r->to}) == k ? t : assign[other];
        if (!dom_holds(tree, *r, m, n)) ok = false;
      }
      if (!ok) continue;
      interp[o] = t;
      self(self, k + 1);
      interp.erase(o);
      if (out.size() >= limit) return;
    }
  };
  recurse(recurse, 0);
  return out;
}

}  // namespace ig
