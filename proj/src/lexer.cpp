#include "ig/lexer.hpp"

#include <algorithm>
#include <limits>

#include "ig/error.hpp"

namespace ig {

namespace {

bool is_punct(char c) { return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?'; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<std::string> split_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : s) {
    if (is_space(c)) {
      flush();
    } else if (is_punct(c)) {
      flush();
      out.emplace_back(1, c);
    } else if (c == '\'') {
      cur += c;
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

}  // namespace

TokenGraph tokenize(const std::string& sentence, const std::map<std::string, std::vector<std::string>>& contractions) {
  auto tokens = split_tokens(sentence);
  if (tokens.empty()) throw Error("EMPTY_INPUT", "sentence has no tokens");
  TokenGraph g;
  std::size_t cur = 0;
  g.vertex_count = 1;
  for (const auto& tok : tokens) {
    auto it = contractions.find(tok);
    if (it == contractions.end() || it->second.empty()) {
      g.edges.push_back({cur, g.vertex_count, tok});
      cur = g.vertex_count++;
      continue;
    }
    const auto& words = it->second;
    std::vector<std::size_t> inner;
    for (std::size_t i = 0; i + 1 < words.size(); ++i) inner.push_back(g.vertex_count++);
    std::size_t end = g.vertex_count++;
    g.edges.push_back({cur, end, tok});
    std::size_t prev = cur;
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::size_t next = i + 1 < words.size() ? inner[i] : end;
      g.edges.push_back({prev, next, words[i]});
      prev = next;
    }
    cur = end;
  }
  return g;
}

Iptd reinstance(const Iptd& iptd, std::uint32_t instance) {
  Iptd out = iptd;
  out.instance = instance;
  for (auto& n : out.ptd.mutable_nodes()) {
    n.origin = {Origin{instance, n.id}};
    for (auto& [f, nf] : n.features) {
      for (auto& t : nf.corefs) t.scope = instance;
    }
  }
  FilterStructure iface;
  for (auto f : iptd.interface.features()) {
    if (f.coref) f.coref->scope = instance;
    iface.insert(f.name, f.values, f.coref);
  }
  out.interface = iface;
  return out;
}

std::optional<Iptd> anchor(const Iptd& tmpl, const std::string& word, const AtomicFeatureStructure& usage,
                           std::uint32_t instance) {
  if (!compatible(usage, tmpl.interface)) return std::nullopt;
  Iptd out = reinstance(tmpl, instance);
  out.ptd.find(out.anchor)->type = NodeType::anchor(word);
  for (const auto& f : tmpl.interface.features()) {
    if (!f.coref) continue;
    auto u = usage.find(f.name);
    if (u == usage.end()) continue;
    CorefTag tag{instance, f.coref->tag};
    for (auto& n : out.ptd.mutable_nodes()) {
      auto it = n.features.find(f.name);
      if (it == n.features.end()) continue;
      auto& tags = it->second.corefs;
      if (std::find(tags.begin(), tags.end(), tag) == tags.end()) continue;
      ValueSet narrowed = it->second.values & ValueSet::single(u->second);
      if (narrowed.empty()) return std::nullopt;
      it->second.values = narrowed;
    }
  }
  return out;
}

SelectionGraph build_selection_graph(const TokenGraph& tg, const Lexicon& lex, const Grammar& g) {
  SelectionGraph sg;
  sg.vertex_count = tg.vertex_count;
  std::uint32_t next_instance = 1;
  for (std::size_t e = 0; e < tg.edges.size(); ++e) {
    const auto& tok = tg.edges[e];
    std::size_t before = sg.edges.size();
    auto it = lex.entries.find(tok.form);
    if (it != lex.entries.end()) {
      for (std::size_t u = 0; u < it->second.size(); ++u) {
        for (const auto& t : g.templates) {
          if (auto a = anchor(t, tok.form, it->second[u], next_instance)) {
            sg.edges.push_back({tok.from, tok.to, e, u, sg.edges.size(), std::move(*a)});
            ++next_instance;
          }
        }
      }
    }
    if (sg.edges.size() == before) sg.unknown_words.push_back(tok.form);
  }
  return sg;
}

std::uint64_t count_paths(const SelectionGraph& sg) {
  if (sg.vertex_count == 0) return 0;
  std::vector<std::uint64_t> ways(sg.vertex_count, 0);
  ways[0] = 1;
  std::vector<std::size_t> order(sg.edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sg.edges[a].from < sg.edges[b].from; });
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i : order) {
    const auto& e = sg.edges[i];
    std::uint64_t add = ways[e.from];
    ways[e.to] = ways[e.to] > kMax - add ? kMax : ways[e.to] + add;
  }
  return ways[sg.vertex_count - 1];
}

std::vector<std::vector<std::size_t>> enumerate_paths(const SelectionGraph& sg, std::size_t limit, std::size_t offset) {
  std::vector<std::vector<std::size_t>> out;
  if (sg.vertex_count == 0) return out;
  std::vector<std::vector<std::size_t>> outgoing(sg.vertex_count);
  for (std::size_t i = 0; i < sg.edges.size(); ++i) outgoing[sg.edges[i].from].push_back(i);
  std::vector<std::size_t> cur;
  std::size_t skipped = 0;
  auto walk = [&](auto&& self, std::size_t v) -> void {
    if (out.size() >= limit) return;
    if (v == sg.vertex_count - 1) {
      if (skipped < offset) {
        ++skipped;
      } else {
        out.push_back(cur);
      }
      return;
    }
    for (std::size_t e : outgoing[v]) {
      cur.push_back(e);
      self(self, sg.edges[e].to);
      cur.pop_back();
      if (out.size() >= limit) return;
    }
  };
  walk(walk, 0);
  return out;
}

std::vector<Iptd> selection_of(const SelectionGraph& sg, const std::vector<std::size_t>& path) {
  std::vector<Iptd> out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    out.push_back(reinstance(sg.edges.at(path[i]).iptd, static_cast<std::uint32_t>(i + 1)));
  }
  return out;
}

std::vector<std::string> words_of(const SelectionGraph& sg, const std::vector<std::size_t>& path) {
  std::vector<std::string> out;
  for (std::size_t e : path) out.push_back(sg.edges.at(e).iptd.phon());
  return out;
}

}  // namespace ig
