#pragma once

// JSON and text renderings of descriptions, trees and parse reports.  All
// output is deterministic: no timings, maps in key order.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ig/parser.hpp"

namespace ig {

// Node and edge lists with polarity annotations.
nlohmann::json ptd_to_json(const Ptd& d, const Signature& sig);

// {"id": "A", "features": {...}, "children": [...]} with "phon" on leaves.
nlohmann::json tree_to_json(const SyntacticTree& t, const Signature& sig);
// Reads the same shape; throws Error(FORMAT_ERROR).
SyntacticTree tree_from_json(const nlohmann::json& j, const Signature& sig);

// Rows of (description nodes, tree node), ordered by tree node.
struct InterpretationRow {
  std::vector<std::string> nodes;
  std::string tree_node;
};
std::vector<InterpretationRow> interpretation_table(const SyntacticTree& t, const Interpretation& interp,
                                                    const std::vector<Iptd>& selection);
// "{A2,A3,A4} -> A" lines.
std::string interpretation_text(const std::vector<InterpretationRow>& rows);

// {"iptds": [{"template": "clitic", "word": "la", "usage": {"cat": "np"}}]};
// instance ids are 1-based positions.  Throws Error(FORMAT_ERROR).
std::vector<Iptd> selection_from_json(const nlohmann::json& j, const Grammar& g);
// {"A": ["A@2", "A@3"], ...}: tree node names to template node @ instance.
Interpretation interpretation_from_json(const nlohmann::json& j, const SyntacticTree& t,
                                        const std::vector<Iptd>& selection);

nlohmann::json verdict_to_json(const ModelVerdict& v);

nlohmann::json report_to_json(const ParseReport& r, const Signature& sig);
std::string report_to_text(const ParseReport& r, const Signature& sig);
nlohmann::json report_to_graph(const ParseReport& r, const Signature& sig);

}  // namespace ig
