// Copyright 2026 The sparql2q Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sparql2q/kg.h"

#include <gtest/gtest.h>

#include <sstream>

#include "sparql2q/error.h"
#include "support/fixtures.h"

namespace sparql2q {
namespace {

using testing::LoadFigureGraph;

TEST(LiteralTest, ParseCanonicalForms) {
  std::optional<Literal> date = ParseLiteral(
      "\"1985-06-21\"^^<http://www.w3.org/2001/XMLSchema#date>");
  ASSERT_TRUE(date);
  EXPECT_EQ(date->datatype, "xsd:date");
  EXPECT_EQ(date->category(), LiteralCategory::kDate);
  EXPECT_EQ(date->ToId(), "\"1985-06-21\"^^xsd:date");

  std::optional<Literal> tagged = ParseLiteral("\"Holla-Day\"@en");
  ASSERT_TRUE(tagged);
  EXPECT_EQ(tagged->language, "en");
  EXPECT_EQ(tagged->category(), LiteralCategory::kString);

  std::optional<Literal> number = ParseLiteral("\"84\"^^xsd:integer");
  ASSERT_TRUE(number);
  EXPECT_EQ(number->category(), LiteralCategory::kNumber);

  std::optional<Literal> escaped = ParseLiteral("\"say \\\"hi\\\"\"");
  ASSERT_TRUE(escaped);
  EXPECT_EQ(escaped->lexical, "say \"hi\"");
  EXPECT_EQ(ParseLiteral(escaped->ToId()), escaped);

  EXPECT_FALSE(ParseLiteral("m.01d1st"));
  EXPECT_FALSE(ParseLiteral("\"open"));
  EXPECT_FALSE(ParseLiteral("\"x\"junk"));
  EXPECT_TRUE(IsLiteralId("\"x\""));
  EXPECT_FALSE(IsLiteralId("m.x"));
}

TEST(KnowledgeGraphTest, LoadsFigureGraph) {
  LoadReport report;
  testing::GraphFiles f = testing::FigureFiles();
  KnowledgeGraph kg = LoadKnowledgeGraph(f.triples, f.entities, f.catalog, &report);
  EXPECT_EQ(report.triples, 18u);
  EXPECT_EQ(report.duplicate_triples, 0u);
  EXPECT_EQ(report.catalogued_predicates, 13u);
  EXPECT_TRUE(report.uncatalogued_predicates.empty());
  EXPECT_TRUE(kg.CheckIndexes());
  EXPECT_TRUE(kg.Contains({"m.julius", "people.deceased_person.place_of_death",
                           "m.pompey_theatre"}));
  EXPECT_TRUE(kg.Contains({"m.holla", "film.film.runtime", "\"84\"^^xsd:integer"}));
  EXPECT_EQ(kg.KindOf("film.actor.film"), PredicateKind::kCvt);
  EXPECT_TRUE(kg.IsCvtNode("m.cvt_holla"));
  EXPECT_FALSE(kg.IsCvtNode("m.holla"));
  EXPECT_EQ(kg.Describe("m.holla").name, "A Very School Gyrls Holla-Day");
  EXPECT_EQ(kg.Describe("\"84\"^^xsd:integer").name, "84");
  EXPECT_EQ(kg.Describe("m.unknown").id, "m.unknown");
}

TEST(KnowledgeGraphTest, IndexesAreSortedAndConsistent) {
  KnowledgeGraph kg = LoadFigureGraph();
  auto by_subject = kg.BySubject("m.01d1st");
  ASSERT_EQ(by_subject.size(), 3u);
  for (size_t i = 1; i < by_subject.size(); ++i) {
    EXPECT_LT(*by_subject[i - 1], *by_subject[i]);
  }
  EXPECT_EQ(kg.ByObject("m.cvt_holla").size(), 1u);
  EXPECT_EQ(kg.ByPredicate("film.film.runtime").size(), 3u);
  EXPECT_TRUE(kg.BySubject("m.none").empty());
  EXPECT_FALSE(kg.AddTriple({"m.julius", "people.person.nationality", "m.rome"}));
  EXPECT_EQ(kg.Report().duplicate_triples, 1u);
  EXPECT_TRUE(kg.CheckIndexes());
}

TEST(KnowledgeGraphTest, MatchPatternAndStar) {
  KnowledgeGraph kg = LoadFigureGraph();
  std::vector<Binding> films =
      MatchPattern(kg, PatternSlot::Ground("m.01d1st"),
                   PatternSlot::Ground("film.actor.film"), PatternSlot::Var("y"));
  ASSERT_EQ(films.size(), 2u);
  EXPECT_EQ(films[0].at("y"), "m.cvt_drumline");
  EXPECT_EQ(films[1].at("y"), "m.cvt_holla");

  std::vector<Binding> loops = MatchPattern(kg, PatternSlot::Var("a"),
                                            PatternSlot::Var("p"),
                                            PatternSlot::Var("a"));
  EXPECT_TRUE(loops.empty());

  Star star = OneHopStar(kg, "m.cvt_holla");
  ASSERT_EQ(star.inward.size(), 1u);
  EXPECT_EQ(star.inward[0].first, "m.01d1st");
  ASSERT_EQ(star.outward.size(), 2u);
  EXPECT_EQ(star.outward[0].first, "film.performance.character");
  EXPECT_THROW(OneHopStar(kg, "m.nowhere"), Error);
}

TEST(KnowledgeGraphTest, LoaderErrors) {
  KnowledgeGraph kg;
  std::istringstream bad_triples("a\tb\n");
  try {
    ReadTriples(bad_triples, "t.tsv", kg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedInput);
    EXPECT_NE(std::string(e.what()).find("t.tsv"), std::string::npos);
  }
  std::istringstream dup(
      "{\"id\": \"m.a\", \"name\": \"A\"}\n{\"id\": \"m.a\", \"name\": \"B\"}\n");
  try {
    ReadEntities(dup, "e.jsonl", kg);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateEntity);
  }
  std::istringstream bad_kind("p.q\tsometimes\n");
  EXPECT_THROW(ReadCatalog(bad_kind, "c.tsv", kg), Error);
  std::istringstream bad_literal("m.a\tp.q\t\"unterminated\n");
  EXPECT_THROW(ReadTriples(bad_literal, "t.tsv", kg), Error);
  try {
    LoadKnowledgeGraph("/nonexistent/t.tsv", "/nonexistent/e", "/nonexistent/c");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingInput);
  }
}

TEST(KnowledgeGraphTest, ReportsUncataloguedAndDangling) {
  KnowledgeGraph kg;
  std::istringstream catalog("p.known\tsingle\n");
  std::istringstream entities("{\"id\": \"m.a\", \"name\": \"A\"}\n");
  std::istringstream triples("m.a\tp.known\tm.b\nm.a\tp.other\t\"x\"\n");
  ReadCatalog(catalog, "c", kg);
  ReadEntities(entities, "e", kg);
  ReadTriples(triples, "t", kg);
  LoadReport report = kg.Report();
  EXPECT_EQ(report.uncatalogued_predicates,
            std::vector<std::string>{"p.other"});
  EXPECT_EQ(report.dangling_ids, std::vector<std::string>{"m.b"});
  EXPECT_NE(report.ToText().find("uncatalogued predicates: 1"), std::string::npos);
}

}  // namespace
}  // namespace sparql2q
