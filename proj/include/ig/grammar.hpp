#pragma once

// Grammar and lexicon documents.
//
// A grammar is a JSON document:
//
//   {"format": "ig-grammar/1",
//    "signature": {"cat": ["s", "np", "v"], ...},
//    "contractions": {"au": ["à", "le"]},
//    "templates": [
//      {"id": "pn", "interface": {"cat": "np"},
//       "nodes": [{"id": "B", "type": "full", "features": {"cat": "+ np"}},
//                 {"id": "C", "type": "anchor", "features": {"cat": "= np"}}],
//       "relations": [["dom", "B", "C"]]}]}
//
// Feature strings read "<polarity> [<tag>] <values>", where values is "?" or
// a '|'-separated list.  Relations are arrays:
//   ["dom", m, n] ["dom", m, n, "leftmost"|"rightmost"] ["arity", m, [n...]]
//   ["ldom", m, n] ["ldom", m, n, {"cat": "s"}] ["prec", a, b] ["lprec", a, b]

#include <map>
#include <string>
#include <vector>

#include "ig/ptd.hpp"

namespace ig {

struct Grammar {
  Signature signature;
  std::map<std::string, std::vector<std::string>> contractions;
  std::vector<Iptd> templates;

  const Iptd* find_template(const std::string& id) const;
};

struct Lexicon {
  std::map<std::string, std::vector<AtomicFeatureStructure>> entries;
};

// Throws Error(PARSE_ERROR) with line and column, or Error(VALIDATION_ERROR)
// naming the offending template.
Grammar parse_grammar(const std::string& text);
Grammar load_grammar(const std::string& path);
std::string grammar_to_string(const Grammar& g);
void save_grammar(const Grammar& g, const std::string& path);

struct LintIssue {
  std::string template_id;  // empty for document-level issues
  Diagnostic diagnostic;
};

// Every problem in a grammar document, rather than the first one.
std::vector<LintIssue> lint_grammar(const std::string& text);

Lexicon parse_lexicon(const std::string& text, const Signature& sig);
Lexicon load_lexicon(const std::string& path, const Signature& sig);

std::string read_file(const std::string& path);

// Feature strings in the grammar notation.
std::string format_feature(const Signature& sig, FeatureId f, const NodeFeature& nf,
                           const std::vector<std::string>& coref_names);

}  // namespace ig
