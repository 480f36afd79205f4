#include <algorithm>
#include <atomic>
#include <thread>

#include "ig/error.hpp"
#include "ig/parser.hpp"

namespace ig {

namespace {

struct SelectionOutcome {
  std::vector<ParsedModel> models;
  SearchStats stats;
};

SelectionOutcome parse_selection(const SelectionGraph& graph, const std::vector<std::size_t>& path, const Signature& sig,
                                 const ParseOptions& opts) {
  SelectionOutcome out;
  std::vector<Iptd> selection = selection_of(graph, path);
  std::vector<std::string> words = words_of(graph, path);
  SearchResult sr = opts.engine == Engine::Cky ? parse_cky(selection, sig, opts) : parse_incremental(selection, sig, opts);
  out.stats = sr.stats;
  std::size_t start_nodes = juxtapose_selection(selection).nodes().size();
  std::vector<std::size_t> source_path;
  for (std::size_t e : path) source_path.push_back(graph.edges[e].source);
  for (const auto& p : sr.saturated) {
    for (auto& m : extract_models(p, selection, words, sig, opts.max_models)) {
      if (!check_model(m.tree, selection, m.interpretation, sig).ok) {
        throw Error("INTERNAL", "extracted tree is not a model");
      }
      out.models.push_back(
          ParsedModel{std::move(m), source_path, selection, p, static_cast<int>(start_nodes - p.nodes().size())});
    }
  }
  return out;
}

}  // namespace

ParseReport parse(const std::string& sentence, const Grammar& g, const Lexicon& lex, const ParseOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  ParseReport report;
  report.sentence = sentence;
  TokenGraph tg = tokenize(sentence, g.contractions);
  for (const auto& e : tg.edges) report.tokens.push_back(e.form);
  SelectionGraph sg = build_selection_graph(tg, lex, g);
  report.unknown_words = sg.unknown_words;
  SelectionGraph graph;
  if (opts.use_filter) {
    FilterResult fr = filter_selections(sg, default_keys(g));
    report.selections_before = fr.before;
    report.selections_after = fr.after;
    graph = std::move(fr.graph);
  } else {
    report.selections_before = report.selections_after = count_paths(sg);
    graph = sg;
  }
  auto paths = enumerate_paths(graph, static_cast<std::size_t>(-1));

  std::vector<SelectionOutcome> outcomes(paths.size());
  std::vector<std::exception_ptr> errors(paths.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < paths.size(); i = next++) {
      try {
        outcomes[i] = parse_selection(graph, paths[i], g.signature, opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, paths.size()));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& o : outcomes) {
    report.stats.steps += o.stats.steps;
    report.stats.dead_ends += o.stats.dead_ends;
    report.stats.cells += o.stats.cells;
    report.stats.budget_exhausted |= o.stats.budget_exhausted;
    for (auto& m : o.models) report.models.push_back(std::move(m));
  }
  std::stable_sort(report.models.begin(), report.models.end(), [](const ParsedModel& a, const ParsedModel& b) {
    if (a.model.key != b.model.key) return a.model.key < b.model.key;
    return a.path < b.path;
  });
  if (report.models.size() > opts.max_models) report.models.resize(opts.max_models);
  report.duration = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0);
  return report;
}

}  // namespace ig
