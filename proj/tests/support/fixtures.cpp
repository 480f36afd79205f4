#include "fixtures.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace igtest {

std::string fixture_dir() { return IG_FIXTURE_DIR; }

std::string fixture_path(const std::string& file) { return fixture_dir() + "/" + file; }

std::vector<FixtureCase> load_suite() {
  auto doc = nlohmann::json::parse(ig::read_file(fixture_path("suite.json")));
  std::vector<FixtureCase> out;
  for (const auto& f : doc.at("fixtures")) {
    FixtureCase fc;
    fc.name = f.at("name");
    fc.grammar_path = fixture_path(f.at("grammar"));
    fc.lexicon_path = fixture_path(f.at("lexicon"));
    fc.grammar = ig::load_grammar(fc.grammar_path);
    fc.lexicon = ig::load_lexicon(fc.lexicon_path, fc.grammar.signature);
    for (const auto& s : f.at("sentences")) {
      SentenceCase sc;
      sc.text = s.at("text");
      sc.parses = s.at("expect") == "parse";
      sc.models = s.value("models", 0);
      sc.cky = s.value("cky", true);
      sc.bound = s.value("bound", 6);
      fc.sentences.push_back(sc);
    }
    out.push_back(std::move(fc));
  }
  return out;
}

ig::Iptd instance_of(const ig::Grammar& g, const std::string& id, std::uint32_t instance, const std::string& word) {
  const ig::Iptd* t = g.find_template(id);
  if (!t) throw std::runtime_error("no template " + id);
  auto out = ig::anchor(*t, word, {}, instance);
  if (!out) throw std::runtime_error("cannot anchor " + id);
  return *out;
}

ig::NodeId node_named(const ig::Ptd& d, const std::string& name) {
  for (const auto& n : d.nodes()) {
    if (n.name == name) return n.id;
  }
  throw std::runtime_error("no node " + name);
}

const FixtureCase& find_fixture(const std::vector<FixtureCase>& suite, const std::string& name) {
  for (const auto& f : suite) {
    if (f.name == name) return f;
  }
  throw std::runtime_error("no fixture " + name);
}

}  // namespace igtest
