#include <gtest/gtest.h>

#include <functional>

#include "fixtures.hpp"
#include "ig/error.hpp"
#include "ig/export.hpp"

using namespace ig;
using namespace igtest;
using json = nlohmann::json;

namespace {

struct Golden {
  Grammar g = load_grammar(fixture_path("jean.grammar.json"));
  Lexicon lex = load_lexicon(fixture_path("jean.lexicon.json"), g.signature);
  ParseReport report = parse("Jean la voit.", g, lex, {});
  const ParsedModel& pm() const { return report.models.at(0); }
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

TEST(Export, TreeRoundTrip) {
  Golden gd;
  json j = tree_to_json(gd.pm().model.tree, gd.g.signature);
  EXPECT_EQ(j["id"], "A");
  SyntacticTree back = tree_from_json(j, gd.g.signature);
  EXPECT_EQ(bracketed(back, gd.g.signature), bracketed(gd.pm().model.tree, gd.g.signature));
  EXPECT_EQ(tree_to_json(back, gd.g.signature), j);
  EXPECT_EQ(thrown([&] { tree_from_json(json{{"id", "A"}}, gd.g.signature); }), "FORMAT_ERROR");
  EXPECT_EQ(thrown([&] { tree_from_json(json{{"phon", "x"}, {"children", json::array({{{"phon", "y"}}})}}, gd.g.signature); }),
            "FORMAT_ERROR");
}

TEST(Export, SelectionAndInterpretationRoundTrip) {
  Golden gd;
  json sel = json{{"iptds", json::array()}};
  for (const auto& d : gd.pm().selection) sel["iptds"].push_back({{"template", d.template_id}, {"word", d.phon()}});
  std::vector<Iptd> back = selection_from_json(sel, gd.g);
  ASSERT_EQ(back.size(), gd.pm().selection.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(back[i].ptd, gd.pm().selection[i].ptd);

  json interp = json::object();
  for (const auto& [o, t] : gd.pm().model.interpretation) {
    interp[tree_node_name(t)].push_back(back[o.instance - 1].node_names[o.node] + "@" + std::to_string(o.instance));
  }
  EXPECT_EQ(interpretation_from_json(interp, gd.pm().model.tree, back), gd.pm().model.interpretation);
  EXPECT_EQ(thrown([&] { interpretation_from_json(json{{"A", {"A@9"}}}, gd.pm().model.tree, back); }), "FORMAT_ERROR");
  EXPECT_EQ(thrown([&] { interpretation_from_json(json{{"ZZ", {"A@1"}}}, gd.pm().model.tree, back); }), "FORMAT_ERROR");
  EXPECT_EQ(thrown([&] { selection_from_json(json{{"iptds", {{{"template", "nope"}, {"word", "x"}}}}}, gd.g); }),
            "FORMAT_ERROR");
}

TEST(Export, InterpretationTable) {
  Golden gd;
  auto rows = interpretation_table(gd.pm().model.tree, gd.pm().model.interpretation, gd.pm().selection);
  std::string text = interpretation_text(rows);
  EXPECT_NE(text.find("{A2,A3,A4} -> A"), std::string::npos) << text;
  std::size_t mapped = 0;
  for (const auto& r : rows) mapped += r.nodes.size();
  EXPECT_EQ(mapped, gd.pm().model.interpretation.size());
}

TEST(Export, VerdictAndReport) {
  Golden gd;
  json v = verdict_to_json(check_model(gd.pm().model.tree, gd.pm().selection, gd.pm().model.interpretation, gd.g.signature));
  EXPECT_TRUE(v["ok"].get<bool>());
  EXPECT_EQ(v["conditions"].size(), model_conditions().size());
  json r = report_to_json(gd.report, gd.g.signature);
  EXPECT_EQ(r["status"], "OK");
  EXPECT_EQ(r["models"].size(), 1u);
  EXPECT_FALSE(r.dump().find("duration") != std::string::npos);
  EXPECT_NE(report_to_text(gd.report, gd.g.signature).find("Jean la voit."), std::string::npos);
  json graph = report_to_graph(gd.report, gd.g.signature);
  EXPECT_TRUE(graph["models"][0]["ptd"]["unsaturated"].empty());
  json p = ptd_to_json(gd.pm().ptd, gd.g.signature);
  EXPECT_EQ(p["nodes"].size(), gd.pm().ptd.nodes().size());
}
