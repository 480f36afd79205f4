#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "ig/error.hpp"
#include "ig/grammar.hpp"
#include "oracle.hpp"

using namespace ig;
using namespace igtest;

namespace {

struct Golden {
  Grammar g = load_grammar(fixture_path("jean.grammar.json"));
  Lexicon lex = load_lexicon(fixture_path("jean.lexicon.json"), g.signature);
  ParsedModel pm;
  Golden() {
    ParseReport r = parse("Jean la voit.", g, lex, {});
    if (r.models.size() != 1) throw std::runtime_error("golden sentence should have one model");
    pm = r.models.front();
  }
  std::set<std::string> tags(const SyntacticTree& t, const Interpretation& j) const {
    auto lib = library_check(t, pm.selection, j, g.signature);
    EXPECT_EQ(lib, naive_check(t, pm.selection, j, g.signature));
    return lib;
  }
};

std::string thrown(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST(Model, GoldenModelPasses) {
  Golden gd;
  ModelVerdict v = check_model(gd.pm.model.tree, gd.pm.selection, gd.pm.model.interpretation, gd.g.signature);
  EXPECT_TRUE(v.ok);
  EXPECT_TRUE(v.violations.empty());
  EXPECT_TRUE(gd.tags(gd.pm.model.tree, gd.pm.model.interpretation).empty());
}

TEST(Model, ReorderedSistersBreakPrecedence) {
  Golden gd;
  SyntacticTree t = gd.pm.model.tree;
  auto& kids = t.node(t.root()).children;
  std::reverse(kids.begin(), kids.end());
  EXPECT_TRUE(gd.tags(t, gd.pm.model.interpretation).count("PREC"));
}

TEST(Model, WrongValueBreaksFeatures) {
  Golden gd;
  SyntacticTree t = gd.pm.model.tree;
  FeatureId cat = *gd.g.signature.find("cat");
  t.node(t.root()).features[cat] = ValueSet::single(*gd.g.signature.value_index(cat, "np"));
  EXPECT_TRUE(gd.tags(t, gd.pm.model.interpretation).count("FEAT"));
}

TEST(Model, CollapsedInterpretationFails) {
  Golden gd;
  Interpretation j = gd.pm.model.interpretation;
  for (auto& [o, n] : j) n = gd.pm.model.tree.root();
  auto tags = gd.tags(gd.pm.model.tree, j);
  EXPECT_FALSE(tags.empty());
  EXPECT_TRUE(tags.count("MIN-SURJ"));
}

TEST(Model, PartialInterpretationThrows) {
  Golden gd;
  Interpretation j = gd.pm.model.interpretation;
  j.erase(j.begin());
  EXPECT_EQ(thrown([&] { check_model(gd.pm.model.tree, gd.pm.selection, j, gd.g.signature); }),
            "INTERPRETATION_NOT_TOTAL");
  Interpretation far = gd.pm.model.interpretation;
  far.begin()->second = gd.pm.model.tree.size();
  EXPECT_EQ(thrown([&] { check_model(gd.pm.model.tree, gd.pm.selection, far, gd.g.signature); }),
            "INTERPRETATION_NOT_TOTAL");
  Interpretation extra = gd.pm.model.interpretation;
  extra[Origin{99, 0}] = 0;
  EXPECT_EQ(thrown([&] { check_model(gd.pm.model.tree, gd.pm.selection, extra, gd.g.signature); }),
            "INTERPRETATION_NOT_TOTAL");
}

TEST(Model, FindInterpretations) {
  Golden gd;
  auto found = find_interpretations(gd.pm.model.tree, gd.pm.selection, gd.g.signature, 10);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found.front(), gd.pm.model.interpretation);
  EXPECT_EQ(thrown([&] { find_interpretations(gd.pm.model.tree, gd.pm.selection, gd.g.signature, 10, 3); }),
            "ORACLE_TOO_LARGE");
}

TEST(Model, ConditionOrder) {
  const std::vector<std::string> expected = {"DOM",      "LDOM", "PREC",     "LPREC",    "FEAT",     "COREF",
                                             "NODETYPE", "SAT",  "MIN-SURJ", "MIN-EDGE", "MIN-FEAT", "MIN-PHON"};
  EXPECT_EQ(model_conditions(), expected);
}

TEST(Model, AgreesWithNaiveCheckerOnPlantedInstances) {
  Rng rng(7);
  for (int i = 0; i < 40; ++i) {
    PlantedInstance inst = random_instance(rng, {6, 10});
    EXPECT_TRUE(library_check(inst.tree, inst.ds, inst.planted, inst.sig).empty());
    EXPECT_TRUE(naive_check(inst.tree, inst.ds, inst.planted, inst.sig).empty());
    // Sending one node elsewhere: both checkers report the same conditions.
    for (std::size_t t = 0; t < inst.tree.size(); ++t) {
      Interpretation j = inst.planted;
      j.begin()->second = t;
      EXPECT_EQ(library_check(inst.tree, inst.ds, j, inst.sig), naive_check(inst.tree, inst.ds, j, inst.sig));
    }
  }
}
