#pragma once

// Tokenization, anchoring and lexical-selection graphs.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ig/grammar.hpp"

namespace ig {

struct TokenEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string form;
};

// Acyclic; vertices are numbered in topological order, 0 is the source and
// vertex_count - 1 the sink.
struct TokenGraph {
  std::size_t vertex_count = 0;
  std::vector<TokenEdge> edges;
};

// Splits on whitespace; . , ; : ! ? become tokens of their own and an
// apostrophe ends a token (qu'aime -> qu' aime).  A contracted form gets a
// parallel path through its expansion.  Throws Error(EMPTY_INPUT).
TokenGraph tokenize(const std::string& sentence, const std::map<std::string, std::vector<std::string>>& contractions);

// Anchors `tmpl` on `word` when `usage` is compatible with its interface.
// The copy gets `instance` as instance id and coref scope; template features
// linked to an interface feature by a co-reference are narrowed to the
// usage value.
std::optional<Iptd> anchor(const Iptd& tmpl, const std::string& word, const AtomicFeatureStructure& usage,
                           std::uint32_t instance);

// Gives an anchored IPTD a new instance id (origins and coref scopes).
Iptd reinstance(const Iptd& iptd, std::uint32_t instance);

struct SelectionEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t token = 0;  // index into TokenGraph::edges
  std::size_t usage = 0;
  std::size_t source = 0;  // edge index in the unfiltered graph
  Iptd iptd;
};

struct SelectionGraph {
  std::size_t vertex_count = 0;
  std::vector<SelectionEdge> edges;
  std::vector<std::string> unknown_words;  // tokens with no anchoring
};

SelectionGraph build_selection_graph(const TokenGraph& tg, const Lexicon& lex, const Grammar& g);

// Number of source-to-sink paths (saturating at UINT64_MAX).
std::uint64_t count_paths(const SelectionGraph& sg);

// Paths as edge index lists, in lexicographic order of edge indices, at
// most `limit` of them.
std::vector<std::vector<std::size_t>> enumerate_paths(const SelectionGraph& sg, std::size_t limit, std::size_t offset = 0);

// A lexical selection: the IPTDs of one path, re-instanced 1..k.
std::vector<Iptd> selection_of(const SelectionGraph& sg, const std::vector<std::size_t>& path);

// The words read along a path.
std::vector<std::string> words_of(const SelectionGraph& sg, const std::vector<std::size_t>& path);

}  // namespace ig
