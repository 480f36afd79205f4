#pragma once

// Lexical-selection filtering by polarity counting.  For a feature f and a
// value v every IPTD contributes an interval of net counts (positive minus
// negative); a selection survives when, for every key, 0 lies in the sum of
// its contributions.

#include <cstdint>
#include <string>
#include <vector>

#include "ig/lexer.hpp"

namespace ig {

struct Interval {
  int lo = 0;
  int hi = 0;
  bool contains(int x) const { return lo <= x && x <= hi; }
  Interval operator+(Interval o) const { return {lo + o.lo, hi + o.hi}; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

struct FilterKey {
  FeatureId feature = 0;
  ValueIndex value = 0;
  friend auto operator<=>(const FilterKey&, const FilterKey&) = default;
};

Interval contribution(const Iptd& d, FeatureId f, ValueIndex v);

// Every (f, v) with f carrying an active polarity somewhere in the grammar.
std::vector<FilterKey> default_keys(const Grammar& g);

// Deterministic acyclic automaton for one key: states are (vertex, interval)
// pairs reached from (source, [0,0]); transitions follow selection edges.
struct CountingAutomaton {
  struct State {
    std::size_t vertex = 0;
    Interval interval;
  };
  struct Transition {
    std::size_t from = 0;
    std::size_t to = 0;
    std::size_t edge = 0;  // selection edge index
  };
  std::vector<State> states;  // topological order; state 0 is the start
  std::vector<Transition> transitions;
  std::vector<std::size_t> accepting;  // sink states whose interval holds 0
};

CountingAutomaton build_automaton(const SelectionGraph& sg, FilterKey key);

struct KeyStat {
  FilterKey key;
  std::uint64_t rejected = 0;  // unfiltered paths this key alone rejects
};

struct FilterResult {
  SelectionGraph graph;
  std::vector<std::size_t> positions;  // original vertex of each output vertex
  std::uint64_t before = 0;
  std::uint64_t after = 0;
  std::vector<KeyStat> stats;
};

// Keeps exactly the paths accepted by every key's automaton, by labelling
// the shared graph with vectors of intervals and pruning states that reach
// no accepting sink.
FilterResult filter_selections(const SelectionGraph& sg, const std::vector<FilterKey>& keys);

// Same language through an explicit product of the per-key automata.
FilterResult filter_selections_product(const SelectionGraph& sg, const std::vector<FilterKey>& keys);

}  // namespace ig
