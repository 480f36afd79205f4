#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ig/error.hpp"
#include "ig/grammar.hpp"

namespace ig {

using json = nlohmann::json;

const Iptd* Grammar::find_template(const std::string& id) const {
  for (const auto& t : templates) {
    if (t.template_id == id) return &t;
  }
  return nullptr;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IO_ERROR", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error("PARSE_ERROR", "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
}

struct Sink {
  std::vector<LintIssue> issues;
  void add(const std::string& tmpl, std::string code, std::vector<std::string> ids, std::string message) {
    issues.push_back({tmpl, Diagnostic{std::move(code), std::move(ids), std::move(message)}});
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct TagTable {
  std::vector<std::string> names;
  std::uint32_t intern(const std::string& name) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<std::uint32_t>(i);
    }
    names.push_back(name);
    return static_cast<std::uint32_t>(names.size() - 1);
  }
};

bool is_tag(const std::string& w) { return w.size() >= 3 && w.front() == '<' && w.back() == '>'; }

// "<pol> [<tag>] values" or, when `with_polarity` is false, "[<tag>] values".
std::optional<std::string> parse_feature_text(const Signature& sig, FeatureId f, const std::string& text,
                                              bool with_polarity, TagTable& tags, NodeFeature& out) {
  auto words = split_ws(text);
  std::size_t k = 0;
  Polarity pol = Polarity::Neutral;
  if (with_polarity) {
    if (words.empty()) return "missing polarity";
    auto p = parse_polarity(words[0]);
    if (!p) return "unknown polarity '" + words[0] + "'";
    pol = *p;
    k = 1;
  }
  std::vector<CorefTag> corefs;
  if (k < words.size() && is_tag(words[k])) {
    corefs.push_back(CorefTag{0, tags.intern(words[k].substr(1, words[k].size() - 2))});
    ++k;
  }
  if (k + 1 != words.size()) return "expected a value list";
  auto values = sig.parse_values(f, words[k]);
  if (!values) return "unknown value in '" + words[k] + "'";
  out.counts = PolarityCounts::of(pol);
  out.values = *values;
  out.corefs = std::move(corefs);
  return std::nullopt;
}

std::optional<NodeType::Kind> parse_kind(const std::string& s) {
  if (s == "anchor") return NodeType::Kind::Anchor;
  if (s == "full") return NodeType::Kind::Full;
  if (s == "empty") return NodeType::Kind::Empty;
  if (s == "default") return NodeType::Kind::Default;
  return std::nullopt;
}

Signature build_signature(const json& doc, Sink& sink) {
  Signature sig;
  if (!doc.contains("signature") || !doc["signature"].is_object()) {
    sink.add("", "MISSING_SIGNATURE", {}, "document has no signature object");
    return sig;
  }
  for (const auto& [name, values] : doc["signature"].items()) {
    try {
      if (!values.is_array()) throw Error("VALIDATION_ERROR", "domain of '" + name + "' is not a list");
      std::vector<std::string> vs;
      for (const auto& v : values) {
        if (!v.is_string()) throw Error("VALIDATION_ERROR", "domain of '" + name + "' has a non-string value");
        vs.push_back(v.get<std::string>());
      }
      sig.add_feature(name, vs);
    } catch (const Error& e) {
      sink.add("", "BAD_SIGNATURE", {name}, e.what());
    }
  }
  return sig;
}

std::optional<Iptd> build_template(const json& t, const Signature& sig, Sink& sink, std::size_t index) {
  std::string id = t.contains("id") && t["id"].is_string() ? t["id"].get<std::string>() : "#" + std::to_string(index);
  std::size_t before = sink.issues.size();
  Iptd out;
  out.template_id = id;
  TagTable tags;

  std::map<std::string, NodeId> node_index;
  if (!t.contains("nodes") || !t["nodes"].is_array() || t["nodes"].empty()) {
    sink.add(id, "NO_NODES", {id}, "template has no nodes");
    return std::nullopt;
  }
  for (const auto& jn : t["nodes"]) {
    if (!jn.is_object() || !jn.contains("id") || !jn["id"].is_string()) {
      sink.add(id, "BAD_NODE", {id}, "node without a string id");
      continue;
    }
    std::string nid = jn["id"].get<std::string>();
    if (node_index.count(nid)) {
      sink.add(id, "DUPLICATE_NODE", {nid}, "node id declared twice");
      continue;
    }
    DescNode n;
    n.name = nid;
    std::string kind = jn.value("type", std::string("default"));
    auto k = parse_kind(kind);
    if (!k) {
      sink.add(id, "BAD_NODE_TYPE", {nid}, "unknown node type '" + kind + "'");
      k = NodeType::Kind::Default;
    }
    n.type.kind = *k;
    if (jn.contains("phon")) {
      if (*k != NodeType::Kind::Anchor || !jn["phon"].is_string()) {
        sink.add(id, "BAD_PHON", {nid}, "only anchors carry a phonological form");
      } else {
        n.type.phon = jn["phon"].get<std::string>();
      }
    }
    if (jn.contains("features")) {
      for (const auto& [fname, fval] : jn["features"].items()) {
        auto f = sig.find(fname);
        if (!f) {
          sink.add(id, "UNKNOWN_FEATURE", {nid, fname}, "feature '" + fname + "' is not in the signature");
          continue;
        }
        if (!fval.is_string()) {
          sink.add(id, "BAD_FEATURE", {nid, fname}, "feature value must be a string");
          continue;
        }
        NodeFeature nf;
        if (auto err = parse_feature_text(sig, *f, fval.get<std::string>(), true, tags, nf)) {
          sink.add(id, "BAD_FEATURE", {nid, fname}, *err);
          continue;
        }
        n.features.emplace(*f, nf);
      }
    }
    n.origin = {Origin{0, static_cast<std::uint32_t>(out.node_names.size())}};
    node_index[nid] = out.ptd.add_node(std::move(n));
    out.node_names.push_back(nid);
    if (*k == NodeType::Kind::Anchor) out.anchor = node_index[nid];
  }

  if (t.contains("interface")) {
    for (const auto& [fname, fval] : t["interface"].items()) {
      auto f = sig.find(fname);
      if (!f) {
        sink.add(id, "UNKNOWN_FEATURE", {fname}, "interface feature '" + fname + "' is not in the signature");
        continue;
      }
      NodeFeature nf;
      if (!fval.is_string()) {
        sink.add(id, "BAD_FEATURE", {fname}, "interface value must be a string");
        continue;
      }
      if (auto err = parse_feature_text(sig, *f, fval.get<std::string>(), false, tags, nf)) {
        sink.add(id, "BAD_FEATURE", {fname}, *err);
        continue;
      }
      out.interface.insert(*f, nf.values, nf.corefs.empty() ? std::nullopt : std::optional(nf.corefs.front()));
    }
  }

  auto ref = [&](const json& j, NodeId& dst) {
    if (!j.is_string() || !node_index.count(j.get<std::string>())) {
      sink.add(id, "DANGLING_REF", {j.dump()}, "relation refers to an unknown node");
      return false;
    }
    dst = node_index.at(j.get<std::string>());
    return true;
  };
  if (t.contains("relations")) {
    for (const auto& jr : t["relations"]) {
      if (!jr.is_array() || jr.size() < 3 || !jr[0].is_string()) {
        sink.add(id, "BAD_RELATION", {jr.dump()}, "relation must be an array [kind, a, b, ...]");
        continue;
      }
      std::string kind = jr[0].get<std::string>();
      NodeId a = 0, b = 0;
      if (kind == "arity") {
        if (!ref(jr[1], a) || !jr[2].is_array()) continue;
        std::vector<NodeId> ds;
        bool ok = true;
        for (const auto& x : jr[2]) {
          NodeId d = 0;
          ok &= ref(x, d);
          ds.push_back(d);
        }
        if (ok) out.ptd.add_relation(Relation::arity(a, ds));
        continue;
      }
      if (!ref(jr[1], a) || !ref(jr[2], b)) continue;
      if (kind == "dom") {
        EdgePosition e = EdgePosition::Any;
        if (jr.size() > 3) {
          std::string pos = jr[3].is_string() ? jr[3].get<std::string>() : "";
          if (pos == "leftmost") {
            e = EdgePosition::Leftmost;
          } else if (pos == "rightmost") {
            e = EdgePosition::Rightmost;
          } else {
            sink.add(id, "BAD_RELATION", {jr.dump()}, "edge position must be leftmost or rightmost");
            continue;
          }
        }
        out.ptd.add_relation(Relation::dom(a, b, e));
      } else if (kind == "ldom") {
        std::optional<FilterStructure> filter;
        if (jr.size() > 3) {
          if (!jr[3].is_object()) {
            sink.add(id, "BAD_RELATION", {jr.dump()}, "filter must be an object");
            continue;
          }
          filter = FilterStructure();
          for (const auto& [fname, fval] : jr[3].items()) {
            auto f = sig.find(fname);
            auto vs = f && fval.is_string() ? sig.parse_values(*f, fval.get<std::string>()) : std::nullopt;
            if (!f) {
              sink.add(id, "UNKNOWN_FEATURE", {fname}, "filter feature '" + fname + "' is not in the signature");
            } else if (!vs) {
              sink.add(id, "BAD_FEATURE", {fname}, "bad filter value");
            } else {
              filter->insert(*f, *vs);
            }
          }
        }
        out.ptd.add_relation(Relation::large_dom(a, b, filter));
      } else if (kind == "prec") {
        out.ptd.add_relation(Relation::prec(a, b));
      } else if (kind == "lprec") {
        out.ptd.add_relation(Relation::large_prec(a, b));
      } else {
        sink.add(id, "BAD_RELATION", {kind}, "unknown relation kind '" + kind + "'");
      }
    }
  }
  out.coref_names = tags.names;
  if (sink.issues.size() != before) return std::nullopt;
  for (auto& d : validate_iptd(out)) sink.add(id, d.code, d.ids, d.message);
  if (sink.issues.size() != before) return std::nullopt;
  return out;
}

Grammar build_grammar(const json& doc, Sink& sink) {
  Grammar g;
  if (!doc.is_object()) {
    sink.add("", "BAD_DOCUMENT", {}, "grammar document must be an object");
    return g;
  }
  if (doc.value("format", std::string()) != "ig-grammar/1") {
    sink.add("", "BAD_FORMAT", {}, "expected format ig-grammar/1");
  }
  g.signature = build_signature(doc, sink);
  if (doc.contains("contractions")) {
    for (const auto& [form, words] : doc["contractions"].items()) {
      std::vector<std::string> ws;
      for (const auto& w : words) {
        if (w.is_string() && !w.get<std::string>().empty()) ws.push_back(w.get<std::string>());
      }
      if (ws.empty() || ws.size() != words.size()) {
        sink.add("", "BAD_CONTRACTION", {form}, "contraction must expand to non-empty words");
        continue;
      }
      g.contractions[form] = ws;
    }
  }
  std::set<std::string> ids;
  if (!doc.contains("templates") || !doc["templates"].is_array()) {
    sink.add("", "NO_TEMPLATES", {}, "document has no templates array");
    return g;
  }
  std::size_t index = 0;
  for (const auto& t : doc["templates"]) {
    auto iptd = build_template(t, g.signature, sink, index++);
    if (!iptd) continue;
    if (!ids.insert(iptd->template_id).second) {
      sink.add(iptd->template_id, "DUPLICATE_TEMPLATE", {iptd->template_id}, "template id declared twice");
      continue;
    }
    g.templates.push_back(std::move(*iptd));
  }
  return g;
}

}  // namespace

Grammar parse_grammar(const std::string& text) {
  json doc = parse_json(text);
  Sink sink;
  Grammar g = build_grammar(doc, sink);
  if (!sink.issues.empty()) {
    const auto& first = sink.issues.front();
    std::string where = first.template_id.empty() ? "" : "template '" + first.template_id + "': ";
    throw Error("VALIDATION_ERROR", where + first.diagnostic.code + ": " + first.diagnostic.message);
  }
  return g;
}

Grammar load_grammar(const std::string& path) { return parse_grammar(read_file(path)); }

std::vector<LintIssue> lint_grammar(const std::string& text) {
  json doc;
  try {
    doc = parse_json(text);
  } catch (const Error& e) {
    return {LintIssue{"", Diagnostic{"PARSE_ERROR", {}, e.what()}}};
  }
  Sink sink;
  build_grammar(doc, sink);
  return sink.issues;
}

std::string format_feature(const Signature& sig, FeatureId f, const NodeFeature& nf,
                           const std::vector<std::string>& coref_names) {
  std::string out;
  for (Polarity p : nf.counts.expand()) {
    out += polarity_symbol(p);
  }
  if (out.empty()) out = "=";
  out += ' ';
  for (const auto& tag : nf.corefs) {
    out += '<';
    out += tag.tag < coref_names.size() ? coref_names[tag.tag] : std::to_string(tag.tag);
    out += "> ";
  }
  out += sig.format_values(f, nf.values);
  return out;
}

namespace {

json template_to_json(const Iptd& t, const Signature& sig) {
  json jt;
  jt["id"] = t.template_id;
  json iface = json::object();
  for (const auto& f : t.interface.features()) {
    std::string s;
    if (f.coref) {
      s += "<" + (f.coref->tag < t.coref_names.size() ? t.coref_names[f.coref->tag] : std::to_string(f.coref->tag)) +
           "> ";
    }
    s += sig.format_values(f.name, f.values);
    iface[sig.name(f.name)] = s;
  }
  jt["interface"] = iface;
  json nodes = json::array();
  auto name = [&](NodeId id) { return t.node_names.at(id); };
  for (const auto& n : t.ptd.nodes()) {
    json jn;
    jn["id"] = name(n.id);
    jn["type"] = std::string(node_type_name(n.type.kind));
    if (!n.type.phon.empty()) jn["phon"] = n.type.phon;
    json feats = json::object();
    for (const auto& [f, nf] : n.features) feats[sig.name(f)] = format_feature(sig, f, nf, t.coref_names);
    jn["features"] = feats;
    nodes.push_back(jn);
  }
  jt["nodes"] = nodes;
  json rels = json::array();
  for (const auto& r : t.ptd.relations()) {
    json jr = json::array({std::string(relation_kind_name(r.kind)), name(r.from)});
    if (r.kind == RelationKind::Arity) {
      json ds = json::array();
      for (NodeId d : r.daughters) ds.push_back(name(d));
      jr.push_back(ds);
    } else {
      jr.push_back(name(r.to));
    }
    if (r.kind == RelationKind::Dom && r.edge != EdgePosition::Any) {
      jr.push_back(r.edge == EdgePosition::Leftmost ? "leftmost" : "rightmost");
    }
    if (r.kind == RelationKind::LargeDom && r.filter) {
      json jf = json::object();
      for (const auto& f : r.filter->features()) jf[sig.name(f.name)] = sig.format_values(f.name, f.values);
      jr.push_back(jf);
    }
    rels.push_back(jr);
  }
  jt["relations"] = rels;
  return jt;
}

}  // namespace

std::string grammar_to_string(const Grammar& g) {
  json doc;
  doc["format"] = "ig-grammar/1";
  json sig = json::object();
  for (std::size_t f = 0; f < g.signature.size(); ++f) {
    sig[g.signature.name(static_cast<FeatureId>(f))] = g.signature.values(static_cast<FeatureId>(f));
  }
  doc["signature"] = sig;
  doc["contractions"] = g.contractions;
  json ts = json::array();
  for (const auto& t : g.templates) ts.push_back(template_to_json(t, g.signature));
  doc["templates"] = ts;
  return doc.dump(2) + "\n";
}

void save_grammar(const Grammar& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IO_ERROR", "cannot write " + path);
  out << grammar_to_string(g);
}

Lexicon parse_lexicon(const std::string& text, const Signature& sig) {
  json doc = parse_json(text);
  if (!doc.is_object() || doc.value("format", std::string()) != "ig-lexicon/1") {
    throw Error("VALIDATION_ERROR", "expected format ig-lexicon/1");
  }
  Lexicon lex;
  if (!doc.contains("entries") || !doc["entries"].is_object()) return lex;
  for (const auto& [word, usages] : doc["entries"].items()) {
    if (word.empty()) throw Error("VALIDATION_ERROR", "empty word form in lexicon");
    auto& list = lex.entries[word];
    for (const auto& u : usages) {
      AtomicFeatureStructure fs;
      for (const auto& [fname, fval] : u.items()) {
        auto f = sig.find(fname);
        if (!f) throw Error("VALIDATION_ERROR", "lexicon entry '" + word + "' uses unknown feature '" + fname + "'");
        auto v = fval.is_string() ? sig.value_index(*f, fval.get<std::string>()) : std::nullopt;
        if (!v) throw Error("VALIDATION_ERROR", "lexicon entry '" + word + "' has a bad value for '" + fname + "'");
        fs[*f] = *v;
      }
      list.push_back(fs);
    }
  }
  return lex;
}

Lexicon load_lexicon(const std::string& path, const Signature& sig) { return parse_lexicon(read_file(path), sig); }

}  // namespace ig
