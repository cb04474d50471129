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

#include "sparql2q/prompt.h"

#include <gtest/gtest.h>

#include "sparql2q/error.h"
#include "sparql2q/generate.h"
#include "sparql2q/pipeline.h"
#include "sparql2q/rng.h"
#include "sparql2q/text.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace sparql2q {
namespace {

size_t CountOccurrences(const std::string &text, const std::string &needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

InstantiatedGraph HollaGraph(const KnowledgeGraph &kg) {
  return Instantiate(ParseQuery("SELECT DISTINCT ?x WHERE { m.01d1st film.actor.film ?y . "
                                "?y film.performance.film ?x . FILTER (?x != m.drumline) }"),
                     kg, 1);
}

TEST(PromptTest, FallbackVerbalize) {
  KnowledgeGraph kg = testing::LoadFigureGraph();
  EXPECT_EQ(FallbackVerbalize(SingleAtom(kg, {"m.julius", "people.deceased_person.place_of_death",
                                              "m.pompey_theatre"})),
            "Julius Caesar place of death The Theatre of Pompey .");
  EXPECT_EQ(FallbackVerbalize(CvtAtom(kg, "m.cvt_holla")),
            "film of Nick Cannon; character Lucky; film A Very School Gyrls Holla-Day .");
}

TEST(PromptTest, AssembleRequiresEveryAtom) {
  KnowledgeGraph kg = testing::LoadFigureGraph();
  InstantiatedGraph g = Instantiate(
      ParseQuery("SELECT ?x WHERE { m.julius people.deceased_person.place_of_death ?x . "
                 "?x architecture.structure.architect ?a }"),
      kg, 1);
  ASSERT_EQ(g.atoms.size(), 2u);
  PromptText p = Assemble(g, {{g.atoms[0].id, "First ."}, {g.atoms[1].id, "Second ."}});
  EXPECT_EQ(p.text, "First . Second .");
  ASSERT_EQ(p.segments.size(), 2u);
  try {
    Assemble(g, {{g.atoms[0].id, "First ."}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingDescription);
  }
}

TEST(PromptTest, AnnotatesTheBoundName) {
  KnowledgeGraph kg = testing::LoadFigureGraph();
  InstantiatedGraph g = HollaGraph(kg);
  PromptText p = Assemble(g, {{g.atoms[0].id, FallbackVerbalize(g.atoms[0])}});
  std::vector<std::string> warnings;
  PromptText annotated = AnnotateVariables(p, g, &warnings);
  EXPECT_EQ(CountOccurrences(annotated.text, "A Very School Gyrls Holla-Day (the ?x)"), 1u);
  ASSERT_EQ(annotated.annotations.size(), 1u);
  EXPECT_EQ(annotated.annotations[0].entity_id, "m.holla");
  EXPECT_EQ(annotated.text.substr(annotated.annotations[0].offset, 9), " (the ?x)");
  // ?y is a nameless CVT node.
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("?y"), std::string::npos);
  EXPECT_EQ(AnnotateVariables(annotated, g), annotated);
  EXPECT_EQ(StripAnnotations(annotated.text), p.text);
}

TEST(PromptTest, AnnotationOffsetsShift) {
  InstantiatedGraph g;
  g.bindings = {{"a", "m.1"}, {"b", "m.2"}};
  g.entities = {{"m.1", {"m.1", "Zed", "", {}}}, {"m.2", {"m.2", "Amy", "", {}}}};
  PromptText p;
  p.text = "Amy met Zed. Amy left.";
  PromptText out = AnnotateVariables(p, g);
  EXPECT_EQ(out.text, "Amy (the ?b) met Zed (the ?a). Amy left.");
  ASSERT_EQ(out.annotations.size(), 2u);
  EXPECT_EQ(out.annotations[0].variable, "b");
  EXPECT_EQ(out.annotations[0].offset, 3u);
  EXPECT_EQ(out.annotations[1].offset, 20u);
  EXPECT_EQ(out.text.substr(out.annotations[1].offset, 9), " (the ?a)");
}

TEST(PromptTest, SameNameTwoVariablesChain) {
  InstantiatedGraph g;
  g.bindings = {{"a", "m.1"}, {"b", "m.1"}};
  g.entities = {{"m.1", {"m.1", "Oz", "", {}}}};
  PromptText p;
  p.text = "Return to Oz .";
  PromptText out = AnnotateVariables(p, g);
  EXPECT_EQ(out.text, "Return to Oz (the ?a) (the ?b) .");
  EXPECT_EQ(AnnotateVariables(out, g), out);
  EXPECT_EQ(StripAnnotations(out.text), p.text);
}

TEST(PromptTest, MissingNameWarns) {
  InstantiatedGraph g;
  g.bindings = {{"a", "m.1"}};
  g.entities = {{"m.1", {"m.1", "Nowhere", "", {}}}};
  PromptText p;
  p.text = "Somewhere else .";
  std::vector<std::string> warnings;
  PromptText out = AnnotateVariables(p, g, &warnings);
  EXPECT_EQ(out.text, p.text);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(PromptTest, StripRoundTripsOnGeneratedPrompts) {
  testing::TempDir dir;
  testing::GraphFiles files = testing::WriteFilmWorld(dir.path(), {5, 4, 2});
  KnowledgeGraph kg = LoadKnowledgeGraph(files.triples, files.entities, files.catalog);
  std::shared_ptr<Generator> prompter = MakeTemplateBackend(GenerationRole::kPrompter);
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    DatasetItem item{"r" + std::to_string(i), PrintQuery(testing::RandomWalkQuery(kg, rng)), "",
                     DatasetSplit::kTrain};
    BuiltPrompt built = BuildPrompt(item, kg, *prompter, {}, rng.Next());
    std::vector<std::string> parts;
    for (const PromptSegment &s : built.prompt.segments) parts.push_back(s.description);
    EXPECT_EQ(StripAnnotations(built.prompt.text), Join(parts, " "));
  }
}

}  // namespace
}  // namespace sparql2q
