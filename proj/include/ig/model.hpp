#pragma once

// Model checking: whether an ordered tree is a saturated minimal model of a
// multiset of anchored IPTDs under a given interpretation.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ig/ptd.hpp"
#include "ig/tree.hpp"

namespace ig {

// Description node (instance, local index) to tree node index.
using Interpretation = std::map<Origin, std::size_t>;

struct Violation {
  std::string condition;  // DOM, LDOM, PREC, LPREC, FEAT, COREF, NODETYPE, SAT, MIN-SURJ, ...
  std::vector<std::string> ids;
  std::string message;
};

struct ModelVerdict {
  bool ok = true;
  std::vector<Violation> violations;
};

// Condition tags in checking order.
const std::vector<std::string>& model_conditions();

// Name of a description node in diagnostics: template node name followed by
// the instance number, e.g. "A2".
std::string origin_name(const std::vector<Iptd>& ds, Origin o);

// Throws Error(INTERPRETATION_NOT_TOTAL) when some description node is
// unmapped, mapped outside the tree, or unknown.  Value sets on tree nodes
// are checked through their representative (least) values.
ModelVerdict check_model(const SyntacticTree& tree, const std::vector<Iptd>& ds, const Interpretation& interp,
                         const Signature& sig);

inline constexpr std::size_t kDefaultOracleBound = 14;

// All interpretations under which `tree` is a model, up to `limit`.
// Throws Error(ORACLE_TOO_LARGE) beyond `bound` description nodes.
std::vector<Interpretation> find_interpretations(const SyntacticTree& tree, const std::vector<Iptd>& ds,
                                                 const Signature& sig, std::size_t limit,
                                                 std::size_t bound = kDefaultOracleBound);

}  // namespace ig
