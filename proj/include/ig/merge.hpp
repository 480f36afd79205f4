#pragma once

// Node merging with constraint propagation, and the dual-pair candidates
// that drive every parsing engine.

#include <optional>
#include <string>
#include <vector>

#include "ig/ptd.hpp"

namespace ig {

enum class MergeError : std::uint8_t {
  PolarityClash,
  ValueClash,
  TypeClash,
  OrderClash,
  StructClash,
  AnchorClash,
};

std::string_view merge_error_code(MergeError e);

class MergeResult {
 public:
  static MergeResult success(Ptd ptd, int merge_count) { return MergeResult(std::move(ptd), merge_count); }
  static MergeResult failure(MergeError e, std::string message) { return MergeResult(e, std::move(message)); }

  bool ok() const { return ptd_.has_value(); }
  explicit operator bool() const { return ok(); }
  const Ptd& ptd() const& { return *ptd_; }
  Ptd&& ptd() && { return std::move(*ptd_); }
  // Atomic merges performed, the requested one included.
  int merge_count() const { return merge_count_; }
  MergeError error() const { return error_; }
  std::string_view code() const { return ok() ? std::string_view("OK") : merge_error_code(error_); }
  const std::string& message() const { return message_; }

 private:
  MergeResult(Ptd p, int count) : ptd_(std::move(p)), merge_count_(count) {}
  MergeResult(MergeError e, std::string m) : error_(e), message_(std::move(m)) {}
  std::optional<Ptd> ptd_;
  int merge_count_ = 0;
  MergeError error_ = MergeError::StructClash;
  std::string message_;
};

// nullopt is TYPE_CLASH; two anchors give ANCHOR_CLASH through merge_nodes.
std::optional<NodeType> node_type_combine(const NodeType& x, const NodeType& y);

// Identifies a and b, then propagates to a fixpoint: shared daughters force
// their mothers together, as do two immediate successors (or predecessors)
// of one node and two leftmost (or rightmost) daughters of one mother;
// co-referent values are intersected; realized large dominances are marked.
MergeResult merge_nodes(const Ptd& d, NodeId a, NodeId b);

// Runs propagation alone (used on freshly juxtaposed descriptions).
MergeResult propagate(const Ptd& d);

struct MergeCandidate {
  NodeId a = 0;
  NodeId b = 0;
  FeatureId feature = 0;
  // A virtual-only feature meeting a non-virtual one rather than a
  // positive/negative pair.
  bool virtual_attachment = false;
};

// Dual active pairs and virtual attachments, ordered by feature name, then
// by the canonical origins of the two nodes; each node pair appears once.
std::vector<MergeCandidate> candidate_merges(const Ptd& d, const Signature& sig);

// Large dominances already realized by a dominance chain (or collapsed).
bool large_dom_realized(const Ptd& d, const Relation& r);

}  // namespace ig
