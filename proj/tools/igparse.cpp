// igparse: command-line front end.
//
// Exit codes: 0 success, 1 no parse / failed check / lint issues, 2 errors.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ig/error.hpp"
#include "ig/export.hpp"
#include "ig/service.hpp"

using json = nlohmann::json;

namespace {

struct Common {
  std::string grammar;
  std::string lexicon;
};

std::vector<std::string> sentences_from(const std::vector<std::string>& args, const std::string& input) {
  std::vector<std::string> out = args;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw ig::Error("IO_ERROR", "cannot open " + input);
    for (std::string line; std::getline(in, line);) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(line);
    }
  }
  if (out.empty()) throw ig::Error("EMPTY_INPUT", "no sentence given");
  return out;
}

int run_parse(const Common& c, const std::vector<std::string>& args, const std::string& input,
              const std::string& engine, const std::string& format, ig::ParseOptions opts) {
  ig::Grammar g = ig::load_grammar(c.grammar);
  ig::Lexicon lex = ig::load_lexicon(c.lexicon, g.signature);
  opts.engine = engine == "cky" ? ig::Engine::Cky : ig::Engine::Incremental;
  bool any_parse = false;
  json all = json::array();
  for (const auto& s : sentences_from(args, input)) {
    ig::ParseReport r = ig::parse(s, g, lex, opts);
    any_parse |= !r.models.empty();
    if (format == "text") {
      std::cout << ig::report_to_text(r, g.signature);
    } else if (format == "graph") {
      all.push_back(ig::report_to_graph(r, g.signature));
    } else {
      all.push_back(ig::report_to_json(r, g.signature));
    }
    if (r.stats.budget_exhausted) std::cerr << "warning: step budget exhausted for: " << s << "\n";
  }
  if (format != "text") std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  return any_parse ? 0 : 1;
}

int run_filter(const Common& c, const std::vector<std::string>& args, const std::string& input) {
  ig::Grammar g = ig::load_grammar(c.grammar);
  ig::Lexicon lex = ig::load_lexicon(c.lexicon, g.signature);
  json all = json::array();
  for (const auto& s : sentences_from(args, input)) {
    ig::SelectionGraph sg = ig::build_selection_graph(ig::tokenize(s, g.contractions), lex, g);
    ig::FilterResult fr = ig::filter_selections(sg, ig::default_keys(g));
    json stats = json::array();
    for (const auto& k : fr.stats) {
      stats.push_back({{"feature", g.signature.name(k.key.feature)},
                       {"value", g.signature.value_name(k.key.feature, k.key.value)},
                       {"rejected", k.rejected}});
    }
    json survivors = json::array();
    for (const auto& p : ig::enumerate_paths(fr.graph, 1000)) {
      json sel = json::array();
      for (std::size_t e : p) sel.push_back(fr.graph.edges[e].iptd.template_id + ":" + fr.graph.edges[e].iptd.phon());
      survivors.push_back(sel);
    }
    all.push_back({{"sentence", s},
                   {"unknown_words", sg.unknown_words},
                   {"before", fr.before},
                   {"after", fr.after},
                   {"keys", stats},
                   {"survivors", survivors}});
  }
  std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
  return 0;
}

json read_json(const std::string& path) {
  std::string text = ig::read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ig::Error("PARSE_ERROR", path + ": " + e.what());
  }
}

int run_check(const std::string& grammar, const std::string& tree_path, const std::string& selection_path,
              const std::string& interp_path) {
  ig::Grammar g = ig::load_grammar(grammar);
  ig::SyntacticTree t = ig::tree_from_json(read_json(tree_path), g.signature);
  std::vector<ig::Iptd> sel = ig::selection_from_json(read_json(selection_path), g);
  if (!interp_path.empty()) {
    ig::Interpretation interp = ig::interpretation_from_json(read_json(interp_path), t, sel);
    ig::ModelVerdict v = ig::check_model(t, sel, interp, g.signature);
    std::cout << ig::verdict_to_json(v).dump(2) << "\n";
    return v.ok ? 0 : 1;
  }
  auto found = ig::find_interpretations(t, sel, g.signature, 100);
  json out = json::array();
  for (const auto& interp : found) {
    json rows = json::array();
    for (const auto& r : ig::interpretation_table(t, interp, sel)) rows.push_back({{"nodes", r.nodes}, {"tree", r.tree_node}});
    out.push_back(rows);
  }
  std::cout << json{{"ok", !found.empty()}, {"interpretations", out}}.dump(2) << "\n";
  return found.empty() ? 1 : 0;
}

int run_lint(const std::string& path) {
  auto issues = ig::lint_grammar(ig::read_file(path));
  json out = json::array();
  for (const auto& i : issues) {
    out.push_back({{"template", i.template_id},
                   {"code", i.diagnostic.code},
                   {"ids", i.diagnostic.ids},
                   {"message", i.diagnostic.message}});
  }
  std::cout << json{{"ok", issues.empty()}, {"issues", out}}.dump(2) << "\n";
  return issues.empty() ? 0 : 1;
}

int run_serve(const Common& c, const std::string& host, int port) {
  ig::Grammar g = ig::load_grammar(c.grammar);
  ig::Lexicon lex = ig::load_lexicon(c.lexicon, g.signature);
  ig::SessionManager sessions(g, lex);
  std::cerr << "serving on http://" << host << ":" << port << "\n";
  if (!ig::serve(sessions, host, port)) throw ig::Error("IO_ERROR", "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interaction Grammar parser"};
  app.require_subcommand(1);

  Common common;
  std::vector<std::string> sentences;
  std::string input;

  auto* parse = app.add_subcommand("parse", "parse sentences");
  ig::ParseOptions opts;
  std::string engine = "incremental";
  std::string format = "text";
  bool no_filter = false;
  parse->add_option("-g,--grammar", common.grammar, "grammar file")->required();
  parse->add_option("-l,--lexicon", common.lexicon, "lexicon file")->required();
  parse->add_option("sentences", sentences, "sentences to parse");
  parse->add_option("-i,--input", input, "file with one sentence per line");
  parse->add_option("-e,--engine", engine, "incremental or cky")->check(CLI::IsMember({"incremental", "cky"}));
  parse->add_option("-b,--bound", opts.polarity_bound, "active polarity bound")->check(CLI::NonNegativeNumber);
  parse->add_option("--max-models", opts.max_models, "models kept per sentence");
  parse->add_option("--max-steps", opts.max_steps, "merge attempts per selection");
  parse->add_option("-j,--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
  parse->add_option("-f,--format", format, "text, json or graph")->check(CLI::IsMember({"text", "json", "graph"}));
  parse->add_flag("--no-filter", no_filter, "skip polarity filtering");

  auto* filter = app.add_subcommand("filter", "polarity-filter lexical selections");
  filter->add_option("-g,--grammar", common.grammar, "grammar file")->required();
  filter->add_option("-l,--lexicon", common.lexicon, "lexicon file")->required();
  filter->add_option("sentences", sentences, "sentences");
  filter->add_option("-i,--input", input, "file with one sentence per line");

  auto* check = app.add_subcommand("check", "check a tree against a selection");
  std::string check_grammar, tree_path, selection_path, interp_path;
  check->add_option("-g,--grammar", check_grammar, "grammar file")->required();
  check->add_option("-t,--tree", tree_path, "tree JSON")->required();
  check->add_option("-s,--selection", selection_path, "selection JSON")->required();
  check->add_option("--interpretation", interp_path, "interpretation JSON; searched when absent");

  auto* lint = app.add_subcommand("lint", "report every problem in a grammar");
  std::string lint_path;
  lint->add_option("grammar", lint_path, "grammar file")->required();

  auto* serve = app.add_subcommand("serve", "run the interactive debugging service");
  std::string host = "127.0.0.1";
  int port = 8765;
  serve->add_option("-g,--grammar", common.grammar, "grammar file")->required();
  serve->add_option("-l,--lexicon", common.lexicon, "lexicon file")->required();
  serve->add_option("--host", host, "listen address");
  serve->add_option("-p,--port", port, "listen port");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    opts.use_filter = !no_filter;
    if (*parse) return run_parse(common, sentences, input, engine, format, opts);
    if (*filter) return run_filter(common, sentences, input);
    if (*check) return run_check(check_grammar, tree_path, selection_path, interp_path);
    if (*lint) return run_lint(lint_path);
    if (*serve) return run_serve(common, host, port);
  } catch (const ig::Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
