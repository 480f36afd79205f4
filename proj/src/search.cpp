#include <map>
#include <set>

#include "ig/parser.hpp"

namespace ig {

Ptd juxtapose_selection(const std::vector<Iptd>& selection) {
  Ptd acc;
  for (const auto& d : selection) acc = juxtapose(acc, instance_ptd(d, std::to_string(d.instance)));
  return acc;
}

namespace {

class Searcher {
 public:
  Searcher(const std::vector<Iptd>& selection, const Signature& sig, const ParseOptions& opts, SearchResult& out)
      : selection_(selection), sig_(sig), opts_(opts), out_(out) {
    for (const auto& p : out_.saturated) seen_.insert(p.canonical_key());
  }

  void run(const Ptd& start, std::size_t next) { step(start, next); }

 private:
  void record(const Ptd& d) {
    if (seen_.insert(d.canonical_key()).second) out_.saturated.push_back(d);
  }

  bool exhausted() const { return out_.stats.budget_exhausted; }

  void step(const Ptd& d, std::size_t next) {
    if (exhausted()) return;
    if (!visited_.emplace(next, d.canonical_key()).second) return;
    if (next < selection_.size() && active_polarity_count(d) <= opts_.polarity_bound) {
      const Iptd& s = selection_[next];
      step(juxtapose(d, instance_ptd(s, std::to_string(s.instance))), next + 1);
      return;
    }
    auto candidates = candidate_merges(d, sig_);
    if (candidates.empty()) {
      if (next == selection_.size() && is_saturated(d)) {
        record(d);
      } else {
        ++out_.stats.dead_ends;
      }
      return;
    }
    for (const auto& c : candidates) {
      if (out_.stats.steps >= opts_.max_steps) {
        out_.stats.budget_exhausted = true;
        return;
      }
      ++out_.stats.steps;
      MergeResult r = merge_nodes(d, c.a, c.b);
      if (r.ok()) {
        step(r.ptd(), next);
      } else {
        ++out_.stats.dead_ends;
      }
      if (exhausted()) return;
    }
  }

  const std::vector<Iptd>& selection_;
  const Signature& sig_;
  const ParseOptions& opts_;
  SearchResult& out_;
  std::set<std::vector<std::vector<Origin>>> seen_;
  std::set<std::pair<std::size_t, std::vector<std::vector<Origin>>>> visited_;
};

std::set<std::uint32_t> instances_of(const DescNode& n) {
  std::set<std::uint32_t> out;
  for (const auto& o : n.origin) out.insert(o.instance);
  return out;
}

}  // namespace

void reduce_closure(const Ptd& start, const Signature& sig, const ParseOptions& opts, SearchResult& out) {
  static const std::vector<Iptd> none;
  Searcher(none, sig, opts, out).run(start, 0);
}

SearchResult parse_incremental(const std::vector<Iptd>& selection, const Signature& sig, const ParseOptions& opts) {
  SearchResult out;
  Searcher(selection, sig, opts, out).run(Ptd(), 0);
  return out;
}

SearchResult parse_cky(const std::vector<Iptd>& selection, const Signature& sig, const ParseOptions& opts) {
  SearchResult out;
  const std::size_t n = selection.size();
  if (n == 0) return out;
  using Cell = std::map<std::vector<std::vector<Origin>>, Ptd>;
  std::vector<std::vector<Cell>> chart(n, std::vector<Cell>(n));
  for (std::size_t i = 0; i < n; ++i) {
    Ptd p = instance_ptd(selection[i], std::to_string(selection[i].instance));
    chart[i][i].emplace(p.canonical_key(), p);
    ++out.stats.cells;
  }

  for (std::size_t len = 2; len <= n; ++len) {
    for (std::size_t i = 0; i + len <= n; ++i) {
      std::size_t j = i + len - 1;
      Cell& cell = chart[i][j];
      for (std::size_t k = i; k < j; ++k) {
        std::set<std::uint32_t> left;
        for (std::size_t x = i; x <= k; ++x) left.insert(selection[x].instance);
        for (const auto& [k1, p1] : chart[i][k]) {
          for (const auto& [k2, p2] : chart[k + 1][j]) {
            Ptd joined = juxtapose(p1, p2);
            for (const auto& c : candidate_merges(joined, sig)) {
              if (c.virtual_attachment) continue;
              auto ia = instances_of(joined.at(c.a)), ib = instances_of(joined.at(c.b));
              bool a_left = left.count(*ia.begin()) > 0, b_left = left.count(*ib.begin()) > 0;
              if (a_left == b_left) continue;
              if (out.stats.steps >= opts.max_steps) {
                out.stats.budget_exhausted = true;
                break;
              }
              ++out.stats.steps;
              MergeResult r = merge_nodes(joined, c.a, c.b);
              if (!r.ok()) {
                ++out.stats.dead_ends;
                continue;
              }
              auto key = r.ptd().canonical_key();
              if (cell.emplace(std::move(key), r.ptd()).second) ++out.stats.cells;
            }
          }
        }
      }
    }
  }
  for (const auto& [key, p] : chart[0][n - 1]) {
    if (out.stats.budget_exhausted) break;
    reduce_closure(p, sig, opts, out);
  }
  return out;
}

}  // namespace ig
