#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ig/error.hpp"
#include "ig/export.hpp"

using namespace ig;
using namespace igtest;

TEST(Pipeline, SuiteExpectations) {
  for (const auto& f : load_suite()) {
    for (const auto& s : f.sentences) {
      ParseOptions opts;
      opts.polarity_bound = s.bound;
      ParseReport r = parse(s.text, f.grammar, f.lexicon, opts);
      EXPECT_EQ(!r.models.empty(), s.parses) << f.name << ": " << s.text;
      if (s.parses) EXPECT_EQ(r.models.size(), s.models) << f.name << ": " << s.text;
      EXPECT_LE(r.selections_after, r.selections_before);
      EXPECT_FALSE(r.stats.budget_exhausted);
    }
  }
}

TEST(Pipeline, JobsDoNotChangeOutput) {
  for (const auto& f : load_suite()) {
    for (const auto& s : f.sentences) {
      ParseOptions one;
      one.polarity_bound = s.bound;
      ParseOptions four = one;
      four.jobs = 4;
      EXPECT_EQ(report_to_json(parse(s.text, f.grammar, f.lexicon, one), f.grammar.signature),
                report_to_json(parse(s.text, f.grammar, f.lexicon, four), f.grammar.signature))
          << s.text;
    }
  }
}

TEST(Pipeline, UnknownWordsAndEmptyInput) {
  auto suite = load_suite();
  const FixtureCase& f = find_fixture(suite, "jean");
  ParseReport r = parse("Jean aime Marie.", f.grammar, f.lexicon, {});
  EXPECT_EQ(r.unknown_words, std::vector<std::string>{"aime"});
  EXPECT_TRUE(r.models.empty());
  EXPECT_EQ(r.selections_before, 0u);
  try {
    parse("  ", f.grammar, f.lexicon, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "EMPTY_INPUT");
  }
}

TEST(Pipeline, FilterCanBeDisabled) {
  auto suite = load_suite();
  const FixtureCase& f = find_fixture(suite, "jean");
  ParseOptions off;
  off.use_filter = false;
  ParseReport filtered = parse("Jean la voit la femme.", f.grammar, f.lexicon, {});
  ParseReport unfiltered = parse("Jean la voit la femme.", f.grammar, f.lexicon, off);
  EXPECT_LT(filtered.selections_after, unfiltered.selections_after);
  EXPECT_EQ(filtered.models.size(), unfiltered.models.size());
}
