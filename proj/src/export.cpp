#include "ig/export.hpp"

#include <algorithm>

#include "ig/error.hpp"
#include "ig/grammar.hpp"
#include "ig/lexer.hpp"

namespace ig {

using json = nlohmann::json;

namespace {

std::string polarity_string(const PolarityCounts& c) {
  std::string s;
  for (Polarity p : c.expand()) s += polarity_symbol(p);
  return s;
}

std::string position_name(EdgePosition e) {
  switch (e) {
    case EdgePosition::Leftmost: return "leftmost";
    case EdgePosition::Rightmost: return "rightmost";
    case EdgePosition::Any: break;
  }
  return "any";
}

json features_json(const TreeFeatures& fs, const Signature& sig) {
  json out = json::object();
  for (const auto& [f, v] : fs) out[sig.name(f)] = sig.format_values(f, v);
  return out;
}

}  // namespace

json ptd_to_json(const Ptd& d, const Signature& sig) {
  json nodes = json::array();
  for (const auto& n : d.nodes()) {
    json jn;
    jn["id"] = n.id;
    jn["name"] = n.name;
    jn["type"] = std::string(node_type_name(n.type.kind));
    if (n.type.is_anchor()) jn["phon"] = n.type.phon;
    json origins = json::array();
    for (const auto& o : n.origin) origins.push_back({o.instance, o.node});
    jn["origin"] = origins;
    json feats = json::object();
    for (const auto& [f, nf] : n.features) {
      json jf;
      jf["polarities"] = polarity_string(nf.counts);
      jf["values"] = sig.format_values(f, nf.values);
      jf["saturated"] = globally_saturated(nf.counts);
      if (!nf.corefs.empty()) {
        json tags = json::array();
        for (const auto& t : nf.corefs) tags.push_back({t.scope, t.tag});
        jf["coref"] = tags;
      }
      feats[sig.name(f)] = jf;
    }
    jn["features"] = feats;
    nodes.push_back(jn);
  }
  json edges = json::array();
  for (const auto& r : d.relations()) {
    json je;
    je["kind"] = std::string(relation_kind_name(r.kind));
    je["from"] = r.from;
    if (r.kind == RelationKind::Arity) {
      je["daughters"] = r.daughters;
    } else {
      je["to"] = r.to;
    }
    if (r.kind == RelationKind::Dom) je["position"] = position_name(r.edge);
    if (r.kind == RelationKind::LargeDom) {
      if (r.filter) {
        json jf = json::object();
        for (const auto& f : r.filter->features()) jf[sig.name(f.name)] = sig.format_values(f.name, f.values);
        je["filter"] = jf;
      }
    }
    edges.push_back(je);
  }
  json unsat = json::array();
  for (const auto& u : saturation_status(d)) {
    unsat.push_back({{"node", u.node}, {"feature", sig.name(u.feature)}, {"polarities", polarity_string(u.polarities)}});
  }
  return {{"nodes", nodes}, {"edges", edges}, {"unsaturated", unsat}};
}

json tree_to_json(const SyntacticTree& t, const Signature& sig) {
  if (t.empty()) return nullptr;
  auto rec = [&](auto&& self, std::size_t i) -> json {
    const TreeNode& n = t.node(i);
    json j;
    j["id"] = tree_node_name(i);
    j["features"] = features_json(n.features, sig);
    if (n.children.empty()) {
      j["phon"] = n.phon.value_or("");
    } else {
      json kids = json::array();
      for (std::size_t c : n.children) kids.push_back(self(self, c));
      j["children"] = kids;
    }
    return j;
  };
  return rec(rec, t.root());
}

SyntacticTree tree_from_json(const json& j, const Signature& sig) {
  SyntacticTree t;
  auto rec = [&](auto&& self, const json& jn, std::optional<std::size_t> parent) -> void {
    if (!jn.is_object()) throw Error("FORMAT_ERROR", "tree node must be an object");
    TreeFeatures fs;
    if (jn.contains("features")) {
      for (const auto& [name, val] : jn["features"].items()) {
        auto f = sig.find(name);
        if (!f) throw Error("FORMAT_ERROR", "unknown feature '" + name + "' in tree");
        auto v = val.is_string() ? sig.parse_values(*f, val.template get<std::string>()) : std::nullopt;
        if (!v) throw Error("FORMAT_ERROR", "bad value for '" + name + "' in tree");
        fs[*f] = *v;
      }
    }
    std::size_t idx = parent ? t.add_child(*parent, fs) : t.add_root(fs);
    bool has_kids = jn.contains("children") && jn["children"].is_array() && !jn["children"].empty();
    if (has_kids == jn.contains("phon")) throw Error("FORMAT_ERROR", "a tree node needs either children or a phon");
    if (!has_kids) {
      if (!jn["phon"].is_string()) throw Error("FORMAT_ERROR", "phon must be a string");
      t.set_phon(idx, jn["phon"].template get<std::string>());
      return;
    }
    for (const auto& c : jn["children"]) self(self, c, idx);
  };
  rec(rec, j, std::nullopt);
  return t;
}

std::vector<InterpretationRow> interpretation_table(const SyntacticTree& t, const Interpretation& interp,
                                                    const std::vector<Iptd>& selection) {
  std::vector<InterpretationRow> rows(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) rows[i].tree_node = tree_node_name(i);
  for (const auto& [o, x] : interp) rows.at(x).nodes.push_back(origin_name(selection, o));
  return rows;
}

std::string interpretation_text(const std::vector<InterpretationRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += "{";
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
      if (i) out += ",";
      out += r.nodes[i];
    }
    out += "} -> " + r.tree_node + "\n";
  }
  return out;
}

std::vector<Iptd> selection_from_json(const json& j, const Grammar& g) {
  if (!j.is_object() || !j.contains("iptds") || !j["iptds"].is_array()) {
    throw Error("FORMAT_ERROR", "selection needs an \"iptds\" array");
  }
  std::vector<Iptd> out;
  for (const auto& e : j["iptds"]) {
    if (!e.is_object() || !e.contains("template") || !e.contains("word") || !e["template"].is_string() ||
        !e["word"].is_string()) {
      throw Error("FORMAT_ERROR", "selection entries need \"template\" and \"word\" strings");
    }
    const Iptd* t = g.find_template(e["template"].get<std::string>());
    if (!t) throw Error("FORMAT_ERROR", "unknown template '" + e["template"].get<std::string>() + "'");
    AtomicFeatureStructure usage;
    if (e.contains("usage")) {
      for (const auto& [name, val] : e["usage"].items()) {
        auto f = g.signature.find(name);
        auto v = f && val.is_string() ? g.signature.value_index(*f, val.get<std::string>()) : std::nullopt;
        if (!v) throw Error("FORMAT_ERROR", "bad usage feature '" + name + "'");
        usage[*f] = *v;
      }
    }
    auto a = anchor(*t, e["word"].get<std::string>(), usage, static_cast<std::uint32_t>(out.size() + 1));
    if (!a) throw Error("FORMAT_ERROR", "usage does not match the interface of '" + t->template_id + "'");
    out.push_back(std::move(*a));
  }
  return out;
}

Interpretation interpretation_from_json(const json& j, const SyntacticTree& t, const std::vector<Iptd>& selection) {
  if (!j.is_object()) throw Error("FORMAT_ERROR", "interpretation must be an object");
  std::map<std::string, std::size_t> tree_ids;
  for (std::size_t i = 0; i < t.size(); ++i) tree_ids[tree_node_name(i)] = i;
  Interpretation out;
  for (const auto& [tree_name, list] : j.items()) {
    auto x = tree_ids.find(tree_name);
    if (x == tree_ids.end()) throw Error("FORMAT_ERROR", "no tree node '" + tree_name + "'");
    if (!list.is_array()) throw Error("FORMAT_ERROR", "interpretation of '" + tree_name + "' must be a list");
    for (const auto& item : list) {
      std::string s = item.is_string() ? item.get<std::string>() : "";
      auto at = s.rfind('@');
      if (at == std::string::npos) throw Error("FORMAT_ERROR", "expected node@instance, got '" + s + "'");
      std::string node = s.substr(0, at);
      std::uint32_t inst = 0;
      try {
        inst = static_cast<std::uint32_t>(std::stoul(s.substr(at + 1)));
      } catch (const std::exception&) {
        throw Error("FORMAT_ERROR", "bad instance in '" + s + "'");
      }
      if (inst == 0 || inst > selection.size()) throw Error("FORMAT_ERROR", "no instance in '" + s + "'");
      const auto& names = selection[inst - 1].node_names;
      auto n = std::find(names.begin(), names.end(), node);
      if (n == names.end()) throw Error("FORMAT_ERROR", "no description node '" + s + "'");
      out[Origin{inst, static_cast<NodeId>(n - names.begin())}] = x->second;
    }
  }
  return out;
}

json verdict_to_json(const ModelVerdict& v) {
  json conds = json::object();
  for (const auto& tag : model_conditions()) conds[tag] = "pass";
  json vs = json::array();
  for (const auto& x : v.violations) {
    conds[x.condition] = "fail";
    vs.push_back({{"condition", x.condition}, {"ids", x.ids}, {"message", x.message}});
  }
  return {{"ok", v.ok}, {"conditions", conds}, {"violations", vs}};
}

namespace {

json model_json(const ParsedModel& m, const Signature& sig) {
  json rows = json::array();
  for (const auto& r : interpretation_table(m.model.tree, m.model.interpretation, m.selection)) {
    rows.push_back({{"nodes", r.nodes}, {"tree", r.tree_node}});
  }
  json sel = json::array();
  for (const auto& d : m.selection) sel.push_back({{"instance", d.instance}, {"template", d.template_id}, {"word", d.phon()}});
  return {{"bracketed", bracketed(m.model.tree, sig)},
          {"projection", phonological_projection(m.model.tree)},
          {"tree", tree_to_json(m.model.tree, sig)},
          {"interpretation", rows},
          {"selection", sel},
          {"merges", m.merges}};
}

}  // namespace

json report_to_json(const ParseReport& r, const Signature& sig) {
  json models = json::array();
  for (const auto& m : r.models) models.push_back(model_json(m, sig));
  return {{"sentence", r.sentence},
          {"tokens", r.tokens},
          {"unknown_words", r.unknown_words},
          {"status", r.models.empty() ? "NO_PARSE" : "OK"},
          {"selections", {{"before", r.selections_before}, {"after", r.selections_after}}},
          {"models", models},
          {"stats",
           {{"steps", r.stats.steps},
            {"dead_ends", r.stats.dead_ends},
            {"cells", r.stats.cells},
            {"budget_exhausted", r.stats.budget_exhausted}}}};
}

std::string report_to_text(const ParseReport& r, const Signature& sig) {
  std::string out = "sentence: " + r.sentence + "\n";
  out += "selections: " + std::to_string(r.selections_before) + " -> " + std::to_string(r.selections_after) + "\n";
  if (r.models.empty()) {
    out += "NO_PARSE\n";
    return out;
  }
  for (std::size_t i = 0; i < r.models.size(); ++i) {
    const auto& m = r.models[i];
    out += "model " + std::to_string(i + 1) + ": " + bracketed(m.model.tree, sig) + "\n";
    out += interpretation_text(interpretation_table(m.model.tree, m.model.interpretation, m.selection));
  }
  return out;
}

json report_to_graph(const ParseReport& r, const Signature& sig) {
  json models = json::array();
  for (const auto& m : r.models) {
    models.push_back({{"bracketed", bracketed(m.model.tree, sig)}, {"ptd", ptd_to_json(m.ptd, sig)}});
  }
  return {{"sentence", r.sentence}, {"models", models}};
}

}  // namespace ig
