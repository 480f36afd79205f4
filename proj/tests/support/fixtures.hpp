#pragma once

// The fixture suite: grammars, lexicons and sentences with expected
// outcomes, read from fixtures/suite.json.

#include <string>
#include <vector>

#include "ig/parser.hpp"

namespace igtest {

struct SentenceCase {
  std::string text;
  bool parses = false;
  std::size_t models = 0;
  bool cky = true;  // whether the chart engine is expected to agree
  int bound = 6;
};

struct FixtureCase {
  std::string name;
  std::string grammar_path;
  std::string lexicon_path;
  ig::Grammar grammar;
  ig::Lexicon lexicon;
  std::vector<SentenceCase> sentences;
};

// Directory holding the fixture files (set at build time).
std::string fixture_dir();
std::string fixture_path(const std::string& file);

std::vector<FixtureCase> load_suite();
// Anchors template `id` on `word` as instance `instance`; throws when the
// template is unknown.
ig::Iptd instance_of(const ig::Grammar& g, const std::string& id, std::uint32_t instance, const std::string& word = "w");

// Id of the node called `name` (e.g. "B1"); throws when absent.
ig::NodeId node_named(const ig::Ptd& d, const std::string& name);

const FixtureCase& find_fixture(const std::vector<FixtureCase>& suite, const std::string& name);

}  // namespace igtest
