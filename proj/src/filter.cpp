#include "ig/filter.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

namespace ig {

Interval contribution(const Iptd& d, FeatureId f, ValueIndex v) {
  Interval total;
  for (const auto& n : d.ptd.nodes()) {
    const NodeFeature* nf = n.feature(f);
    if (!nf || !nf->values.contains(v)) continue;
    bool exact = nf->values.is_singleton();
    for (int k = 0; k < nf->counts.positive; ++k) total = total + (exact ? Interval{1, 1} : Interval{0, 1});
    for (int k = 0; k < nf->counts.negative; ++k) total = total + (exact ? Interval{-1, -1} : Interval{-1, 0});
  }
  return total;
}

std::vector<FilterKey> default_keys(const Grammar& g) {
  std::set<FeatureId> active;
  for (const auto& t : g.templates) {
    for (const auto& n : t.ptd.nodes()) {
      for (const auto& [f, nf] : n.features) {
        if (nf.counts.active() > 0) active.insert(f);
      }
    }
  }
  std::vector<FilterKey> keys;
  for (FeatureId f : active) {
    for (std::size_t v = 0; v < g.signature.domain_size(f); ++v) keys.push_back({f, static_cast<ValueIndex>(v)});
  }
  return keys;
}

namespace {

std::vector<std::vector<std::size_t>> outgoing_edges(const SelectionGraph& sg) {
  std::vector<std::vector<std::size_t>> out(sg.vertex_count);
  for (std::size_t i = 0; i < sg.edges.size(); ++i) out[sg.edges[i].from].push_back(i);
  return out;
}

// Generic determinized exploration: a state is (vertex, label); successors
// follow every outgoing selection edge.  Returns states in topological order
// (sorted by vertex, then label) and transitions between them.
template <typename Label, typename Step>
void explore(const SelectionGraph& sg, const Label& start, Step step, std::vector<std::pair<std::size_t, Label>>& states,
             std::vector<CountingAutomaton::Transition>& transitions) {
  auto outgoing = outgoing_edges(sg);
  std::map<std::pair<std::size_t, Label>, std::size_t> index;
  std::vector<std::pair<std::size_t, Label>> found = {{0, start}};
  index[{0, start}] = 0;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> raw;
  // Vertices are topologically numbered, so processing by vertex is enough.
  std::map<std::size_t, std::vector<std::size_t>> by_vertex;
  by_vertex[0].push_back(0);
  for (std::size_t v = 0; v < sg.vertex_count; ++v) {
    auto it = by_vertex.find(v);
    if (it == by_vertex.end()) continue;
    for (std::size_t s : it->second) {
      for (std::size_t e : outgoing[v]) {
        std::pair<std::size_t, Label> next = {sg.edges[e].to, step(found[s].second, e)};
        auto [pos, fresh] = index.emplace(next, found.size());
        if (fresh) {
          found.push_back(next);
          by_vertex[next.first].push_back(pos->second);
        }
        raw.emplace_back(s, pos->second, e);
      }
    }
  }
  // Renumber in (vertex, label) order.
  std::vector<std::size_t> order(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return found[a] < found[b]; });
  std::vector<std::size_t> rank(found.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  states.clear();
  for (std::size_t i : order) states.push_back(found[i]);
  transitions.clear();
  for (auto [a, b, e] : raw) transitions.push_back({rank[a], rank[b], e});
  std::sort(transitions.begin(), transitions.end(), [](const auto& x, const auto& y) {
    return std::tie(x.from, x.edge) < std::tie(y.from, y.edge);
  });
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  return a > kMax - b ? kMax : a + b;
}

// Path counts from the start state.
std::vector<std::uint64_t> forward_counts(std::size_t n, const std::vector<CountingAutomaton::Transition>& ts) {
  std::vector<std::uint64_t> ways(n, 0);
  if (n > 0) ways[0] = 1;
  for (const auto& t : ts) ways[t.to] = saturating_add(ways[t.to], ways[t.from]);
  return ways;
}

// Keeps states that are reachable and reach an accepting state; merges all
// accepting states into one sink.
template <typename Label>
FilterResult prune(const SelectionGraph& sg, const std::vector<std::pair<std::size_t, Label>>& states,
                   const std::vector<CountingAutomaton::Transition>& transitions, const std::vector<bool>& accepting) {
  std::vector<bool> alive = accepting;
  for (auto it = transitions.rbegin(); it != transitions.rend(); ++it) {
    if (alive[it->to]) alive[it->from] = true;
  }
  FilterResult out;
  out.before = count_paths(sg);
  std::map<std::size_t, std::size_t> renum;
  std::size_t sink = 0;
  bool any = alive.empty() ? false : alive[0];
  if (any) {
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (alive[s] && !accepting[s]) {
        renum[s] = out.positions.size();
        out.positions.push_back(states[s].first);
      }
    }
    sink = out.positions.size();
    out.positions.push_back(sg.vertex_count - 1);
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (accepting[s]) renum[s] = sink;
    }
  }
  out.graph.vertex_count = out.positions.size();
  out.graph.unknown_words = sg.unknown_words;
  for (const auto& t : transitions) {
    if (!any || !alive[t.from] || !alive[t.to]) continue;
    SelectionEdge e = sg.edges[t.edge];
    e.from = renum.at(t.from);
    e.to = renum.at(t.to);
    out.graph.edges.push_back(std::move(e));
  }
  std::stable_sort(out.graph.edges.begin(), out.graph.edges.end(),
                   [](const SelectionEdge& a, const SelectionEdge& b) { return a.from < b.from; });
  out.after = any ? count_paths(out.graph) : 0;
  return out;
}

}  // namespace

CountingAutomaton build_automaton(const SelectionGraph& sg, FilterKey key) {
  std::vector<Interval> contrib;
  for (const auto& e : sg.edges) contrib.push_back(contribution(e.iptd, key.feature, key.value));
  std::vector<std::pair<std::size_t, Interval>> states;
  CountingAutomaton a;
  explore(sg, Interval{}, [&](const Interval& i, std::size_t e) { return i + contrib[e]; }, states, a.transitions);
  for (std::size_t s = 0; s < states.size(); ++s) {
    a.states.push_back({states[s].first, states[s].second});
    if (states[s].first == sg.vertex_count - 1 && states[s].second.contains(0)) a.accepting.push_back(s);
  }
  return a;
}

namespace {

std::vector<KeyStat> key_stats(const SelectionGraph& sg, const std::vector<FilterKey>& keys) {
  std::vector<KeyStat> stats;
  for (const auto& k : keys) {
    CountingAutomaton a = build_automaton(sg, k);
    auto ways = forward_counts(a.states.size(), a.transitions);
    std::uint64_t rejected = 0;
    for (std::size_t s = 0; s < a.states.size(); ++s) {
      if (a.states[s].vertex == sg.vertex_count - 1 && !a.states[s].interval.contains(0)) {
        rejected = saturating_add(rejected, ways[s]);
      }
    }
    stats.push_back({k, rejected});
  }
  return stats;
}

}  // namespace

FilterResult filter_selections(const SelectionGraph& sg, const std::vector<FilterKey>& keys) {
  std::vector<std::vector<Interval>> contrib(sg.edges.size());
  for (std::size_t e = 0; e < sg.edges.size(); ++e) {
    for (const auto& k : keys) contrib[e].push_back(contribution(sg.edges[e].iptd, k.feature, k.value));
  }
  using Label = std::vector<Interval>;
  std::vector<std::pair<std::size_t, Label>> states;
  std::vector<CountingAutomaton::Transition> transitions;
  explore(
      sg, Label(keys.size()),
      [&](const Label& l, std::size_t e) {
        Label out = l;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] + contrib[e][i];
        return out;
      },
      states, transitions);
  std::vector<bool> accepting(states.size(), false);
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (states[s].first != sg.vertex_count - 1) continue;
    accepting[s] = std::all_of(states[s].second.begin(), states[s].second.end(),
                               [](const Interval& i) { return i.contains(0); });
  }
  FilterResult out = prune(sg, states, transitions, accepting);
  out.stats = key_stats(sg, keys);
  return out;
}

FilterResult filter_selections_product(const SelectionGraph& sg, const std::vector<FilterKey>& keys) {
  std::vector<CountingAutomaton> automata;
  // Per automaton: (state, edge) -> successor state.
  std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>> delta;
  for (const auto& k : keys) {
    automata.push_back(build_automaton(sg, k));
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> d;
    for (const auto& t : automata.back().transitions) d[{t.from, t.edge}] = t.to;
    delta.push_back(std::move(d));
  }
  using Label = std::vector<std::size_t>;
  std::vector<std::pair<std::size_t, Label>> states;
  std::vector<CountingAutomaton::Transition> transitions;
  explore(
      sg, Label(keys.size(), 0),
      [&](const Label& l, std::size_t e) {
        Label out = l;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = delta[i].at({l[i], e});
        return out;
      },
      states, transitions);
  std::vector<bool> accepting(states.size(), false);
  for (std::size_t s = 0; s < states.size(); ++s) {
    if (states[s].first != sg.vertex_count - 1) continue;
    bool all = true;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto& acc = automata[i].accepting;
      all &= std::find(acc.begin(), acc.end(), states[s].second[i]) != acc.end();
    }
    accepting[s] = all;
  }
  FilterResult out = prune(sg, states, transitions, accepting);
  out.stats = key_stats(sg, keys);
  return out;
}

}  // namespace ig
