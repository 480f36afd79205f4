#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"
#include "ig/error.hpp"
#include "ig/grammar.hpp"

using namespace ig;
using namespace igtest;

namespace {

std::pair<std::string, std::string> thrown(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  return {};
}

std::string doc(const std::string& templates) {
  return R"({"format": "ig-grammar/1", "signature": {"cat": ["s", "np"], "agr": ["sg", "pl"]}, "templates": [)" +
         templates + "]}";
}

const char* kGood = R"({"id": "t", "nodes": [{"id": "A", "features": {"cat": "+ s", "agr": "= <x> sg|pl"}},
  {"id": "B", "type": "anchor", "features": {"agr": "~ <x> ?"}}], "relations": [["dom", "A", "B", "rightmost"]]})";

}  // namespace

TEST(GrammarIo, ParseErrorCarriesPosition) {
  auto [code, what] = thrown([] { parse_grammar("{\n  \"format\": \n}"); });
  EXPECT_EQ(code, "PARSE_ERROR");
  EXPECT_EQ(what.rfind("line 3, column", 0), 0u) << what;
  EXPECT_EQ(thrown([] { load_grammar("/nonexistent/grammar.json"); }).first, "IO_ERROR");
}

TEST(GrammarIo, FeatureNotation) {
  Grammar g = parse_grammar(doc(kGood));
  const Iptd& t = g.templates.at(0);
  FeatureId agr = *g.signature.find("agr"), cat = *g.signature.find("cat");
  const NodeFeature& a = *t.ptd.at(0).feature(agr);
  const NodeFeature& b = *t.ptd.at(1).feature(agr);
  ASSERT_EQ(a.corefs.size(), 1u);
  EXPECT_EQ(a.corefs, b.corefs);
  EXPECT_EQ(format_feature(g.signature, agr, a, t.coref_names), "= <x> ?");
  EXPECT_EQ(format_feature(g.signature, cat, *t.ptd.at(0).feature(cat), t.coref_names), "+ s");
  EXPECT_EQ(t.ptd.relations().at(0).edge, EdgePosition::Rightmost);
  EXPECT_EQ(t.anchor, 1u);
}

TEST(GrammarIo, ValidationNamesFirstProblem) {
  auto [code, what] = thrown([] {
    parse_grammar(doc(R"({"id": "bad", "nodes": [{"id": "A", "features": {"gen": "+ m"}}, {"id": "W", "type": "anchor"}],
                         "relations": [["dom", "A", "W"]]})"));
  });
  EXPECT_EQ(code, "VALIDATION_ERROR");
  EXPECT_NE(what.find("bad"), std::string::npos);
  EXPECT_NE(what.find("UNKNOWN_FEATURE"), std::string::npos);
}

TEST(GrammarIo, LintListsEveryIssue) {
  std::string text = doc(std::string(kGood) + "," + kGood + R"(,
    {"id": "u", "nodes": [{"id": "A", "features": {"cat": "+ vp"}}, {"id": "W", "type": "anchor"}],
     "relations": [["dom", "A", "Z"]]},
    {"id": "v", "nodes": [{"id": "A"}, {"id": "B"}], "relations": [["dom", "A", "B"], ["dom", "B", "A"]]})");
  std::vector<std::string> codes;
  for (const auto& i : lint_grammar(text)) codes.push_back(i.diagnostic.code);
  for (const char* c : {"DUPLICATE_TEMPLATE", "BAD_FEATURE", "DANGLING_REF", "DOM_CYCLE", "ANCHOR_COUNT"}) {
    EXPECT_NE(std::find(codes.begin(), codes.end(), c), codes.end()) << c;
  }
  auto missing = lint_grammar(R"({"format": "ig-grammar/0"})");
  std::vector<std::string> mcodes;
  for (const auto& i : missing) mcodes.push_back(i.diagnostic.code);
  EXPECT_EQ(mcodes, (std::vector<std::string>{"BAD_FORMAT", "MISSING_SIGNATURE", "NO_TEMPLATES"}));
  EXPECT_TRUE(lint_grammar(doc(kGood)).empty());
  EXPECT_EQ(lint_grammar("[").at(0).diagnostic.code, "PARSE_ERROR");
}

TEST(GrammarIo, FixturesRoundTrip) {
  for (const auto& f : {"jean", "french", "quaime", "noncontig"}) {
    Grammar g = load_grammar(fixture_path(std::string(f) + ".grammar.json"));
    std::string once = grammar_to_string(g);
    Grammar back = parse_grammar(once);
    EXPECT_EQ(grammar_to_string(back), once) << f;
    ASSERT_EQ(back.templates.size(), g.templates.size());
    for (std::size_t i = 0; i < g.templates.size(); ++i) {
      EXPECT_EQ(back.templates[i].ptd, g.templates[i].ptd) << f << ":" << g.templates[i].template_id;
    }
    EXPECT_EQ(back.contractions, g.contractions);
  }
}

TEST(GrammarIo, Lexicon) {
  Grammar g = load_grammar(fixture_path("jean.grammar.json"));
  Lexicon lex = load_lexicon(fixture_path("jean.lexicon.json"), g.signature);
  EXPECT_EQ(lex.entries.at("la").size(), 2u);
  EXPECT_EQ(lex.entries.size(), 6u);
  EXPECT_EQ(thrown([&] { parse_lexicon(R"({"format": "ig-lexicon/1", "entries": {"x": [{"gen": "m"}]}})", g.signature); })
                .first,
            "VALIDATION_ERROR");
  EXPECT_EQ(thrown([&] { parse_lexicon(R"({"format": "ig-lexicon/1", "entries": {"x": [{"lex": "adj"}]}})", g.signature); })
                .first,
            "VALIDATION_ERROR");
  EXPECT_EQ(thrown([&] { parse_lexicon(R"({"format": "other"})", g.signature); }).first, "VALIDATION_ERROR");
}
