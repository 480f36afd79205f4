#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "ig/filter.hpp"
#include "oracle.hpp"

using namespace ig;
using namespace igtest;

namespace {

struct Jean {
  Grammar g = load_grammar(fixture_path("jean.grammar.json"));
  Lexicon lex = load_lexicon(fixture_path("jean.lexicon.json"), g.signature);
  SelectionGraph graph(const std::string& s) const { return build_selection_graph(tokenize(s, g.contractions), lex, g); }
  FilterKey key(const std::string& f, const std::string& v) const {
    FeatureId id = *g.signature.find(f);
    return {id, *g.signature.value_index(id, v)};
  }
};

}  // namespace

TEST(Interval, Sums) {
  EXPECT_EQ((Interval{1, 1} + Interval{-1, -1}), (Interval{0, 0}));
  EXPECT_EQ((Interval{0, 1} + Interval{-1, 0}), (Interval{-1, 1}));
  EXPECT_TRUE((Interval{-1, 1}).contains(0));
  EXPECT_FALSE((Interval{1, 2}).contains(0));
}

TEST(Filter, Contributions) {
  Jean j;
  const Iptd& pn = *j.g.find_template("pn");
  EXPECT_EQ(contribution(pn, j.key("cat", "np").feature, j.key("cat", "np").value), (Interval{1, 1}));
  EXPECT_EQ(contribution(pn, j.key("cat", "s").feature, j.key("cat", "s").value), (Interval{0, 0}));
  // funct - subj|obj: the value is open, so the count is -1 or 0.
  EXPECT_EQ(contribution(pn, j.key("funct", "subj").feature, j.key("funct", "subj").value), (Interval{-1, 0}));
  const Iptd& tverb = *j.g.find_template("tverb");
  EXPECT_EQ(contribution(tverb, j.key("cat", "np").feature, j.key("cat", "np").value), (Interval{-2, -2}));
  EXPECT_EQ(default_keys(j.g).size(), 9u);  // cat (7 values) and funct (2); lex is never polarized
}

TEST(Filter, RemovesUnbalancedSelections) {
  Jean j;
  SelectionGraph sg = j.graph("Jean la voit.");
  FilterResult fr = filter_selections(sg, default_keys(j.g));
  EXPECT_EQ(fr.before, 2u);
  EXPECT_EQ(fr.after, 1u);
  EXPECT_EQ(count_paths(fr.graph), 1u);
  auto kept = enumerate_paths(fr.graph, 10);
  EXPECT_EQ(selection_of(fr.graph, kept.at(0)).at(1).template_id, "clitic");
  EXPECT_EQ(survivors_of(fr), brute_force_survivors(sg, default_keys(j.g)));
}

TEST(Filter, MonotoneInKeys) {
  Jean j;
  for (const char* s : {"Jean la voit la femme.", "la femme voit Jean.", "la Jean voit femme."}) {
    SelectionGraph sg = j.graph(s);
    auto keys = default_keys(j.g);
    auto previous = survivors_of(filter_selections(sg, {}));
    EXPECT_EQ(previous.size(), count_paths(sg));
    std::vector<FilterKey> used;
    for (const auto& k : keys) {
      used.push_back(k);
      auto now = survivors_of(filter_selections(sg, used));
      EXPECT_TRUE(std::includes(previous.begin(), previous.end(), now.begin(), now.end())) << s;
      EXPECT_EQ(now, survivors_of(filter_selections_product(sg, used))) << s;
      previous = now;
    }
  }
}

TEST(Filter, AutomatonMatchesPrefixSums) {
  Jean j;
  SelectionGraph sg = j.graph("Jean la voit la femme.");
  for (const auto& key : default_keys(j.g)) {
    CountingAutomaton a = build_automaton(sg, key);
    auto expected = prefix_intervals(sg, key);
    std::vector<std::set<Interval>> got(sg.vertex_count);
    for (const auto& s : a.states) got.at(s.vertex).insert(s.interval);
    EXPECT_EQ(got, expected);
    for (std::size_t s : a.accepting) {
      EXPECT_EQ(a.states.at(s).vertex, sg.vertex_count - 1);
      EXPECT_TRUE(a.states.at(s).interval.contains(0));
    }
  }
}
