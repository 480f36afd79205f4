#pragma once

// Deep parsing: search over node merges from a lexical selection to
// saturated descriptions, then extraction of ordered tree models.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "ig/filter.hpp"
#include "ig/merge.hpp"
#include "ig/model.hpp"

namespace ig {

enum class Engine : std::uint8_t { Incremental, Cky };

struct ParseOptions {
  Engine engine = Engine::Incremental;
  int polarity_bound = 6;
  std::size_t max_models = 1000;
  std::size_t max_steps = 1'000'000;  // merge attempts per selection
  bool use_filter = true;
  std::size_t jobs = 1;
};

struct SearchStats {
  std::size_t steps = 0;  // merge attempts
  std::size_t dead_ends = 0;
  std::size_t cells = 0;  // CKY chart entries
  bool budget_exhausted = false;
};

struct SearchResult {
  std::vector<Ptd> saturated;  // distinct by canonical key, in discovery order
  SearchStats stats;
};

// Juxtaposition of a selection's instances in order.
Ptd juxtapose_selection(const std::vector<Iptd>& selection);

SearchResult parse_incremental(const std::vector<Iptd>& selection, const Signature& sig, const ParseOptions& opts);
SearchResult parse_cky(const std::vector<Iptd>& selection, const Signature& sig, const ParseOptions& opts);

// Depth-first REDUCE closure of one description: every saturated
// description reachable by candidate merges, each neutralization set once.
void reduce_closure(const Ptd& start, const Signature& sig, const ParseOptions& opts, SearchResult& out);

struct Model {
  SyntacticTree tree;
  Interpretation interpretation;
  std::string key;  // canonical form used for deduplication and ordering
};

// Throws Error(NOT_SATURATED).  Returns no models when no ordering of the
// described tree projects `words` (NO_LINEARIZATION is then the caller's
// verdict).  Every returned model passes check_model.
std::vector<Model> extract_models(const Ptd& d, const std::vector<Iptd>& selection, const std::vector<std::string>& words,
                                  const Signature& sig, std::size_t max_models = 1000);

// Canonical form of a model: bracketed structure with preimage labels where
// runs of adjacent sisters with an empty projection are sorted.
std::string canonical_model_key(const SyntacticTree& tree, const Interpretation& interp, const std::vector<Iptd>& selection,
                                const Signature& sig);

struct ParsedModel {
  Model model;
  std::vector<std::size_t> path;  // selection-graph edges (unfiltered numbering)
  std::vector<Iptd> selection;
  Ptd ptd;  // the saturated description
  int merges = 0;  // atomic merges from the juxtaposed selection
};

struct ParseReport {
  std::string sentence;
  std::vector<std::string> tokens;
  std::vector<std::string> unknown_words;
  std::uint64_t selections_before = 0;
  std::uint64_t selections_after = 0;
  std::vector<ParsedModel> models;
  SearchStats stats;
  std::chrono::microseconds duration{0};
};

// Tokenize, anchor, filter, deep parse every surviving selection, extract.
ParseReport parse(const std::string& sentence, const Grammar& g, const Lexicon& lex, const ParseOptions& opts);

}  // namespace ig
