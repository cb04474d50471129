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

#include <gtest/gtest.h>

#include "sparql2q/error.h"
#include "sparql2q/rng.h"
#include "sparql2q/sparql.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace sparql2q {
namespace {

class SparqlEvalTest : public ::testing::Test {
 protected:
  SparqlEvalTest() : kg_(testing::LoadFigureGraph()) {}

  ResultSet Run(std::string_view text) { return Evaluate(ParseQuery(text), kg_); }

  KnowledgeGraph kg_;
};

TEST_F(SparqlEvalTest, TwoHopJoin) {
  ResultSet rs = Run(
      "SELECT DISTINCT ?x WHERE { m.01d1st film.actor.film ?y . "
      "?y film.performance.film ?x . }");
  EXPECT_EQ(rs.columns, std::vector<std::string>{"x"});
  EXPECT_EQ(rs.rows, (std::vector<std::vector<std::string>>{{"m.drumline"},
                                                            {"m.holla"}}));
}

TEST_F(SparqlEvalTest, OrderByNumericDescendingWithLimit) {
  ResultSet rs = Run(
      "SELECT DISTINCT ?x WHERE { m.01d1st film.actor.film ?y . "
      "?y film.performance.film ?x . ?x film.film.runtime ?num . } "
      "ORDER BY DESC(?num) LIMIT 1");
  EXPECT_EQ(rs.rows, (std::vector<std::vector<std::string>>{{"m.drumline"}}));
  ResultSet asc = Run(
      "SELECT ?x ?num WHERE { ?x film.film.runtime ?num } ORDER BY ?num");
  ASSERT_EQ(asc.rows.size(), 3u);
  EXPECT_EQ(asc.rows[0][1], "\"84\"^^xsd:integer");
  EXPECT_EQ(asc.rows[2][1], "\"118\"^^xsd:integer");
}

TEST_F(SparqlEvalTest, Filters) {
  ResultSet gt = Run("SELECT ?x WHERE { ?x film.film.runtime ?n FILTER (?n > 100) }");
  EXPECT_EQ(gt.rows.size(), 2u);
  ResultSet date = Run(
      "SELECT ?x WHERE { ?x film.film.initial_release_date ?d "
      "FILTER (?d < \"1990-01-01\"^^xsd:date) }");
  EXPECT_EQ(date.rows, (std::vector<std::vector<std::string>>{{"m.return_to_oz"}}));
  ResultSet lang = Run("SELECT ?x WHERE { ?x common.topic.alias ?a FILTER (lang(?a) = \"en\") }");
  EXPECT_EQ(lang.rows.size(), 1u);
  ResultSet str = Run(
      "SELECT ?x WHERE { ?x common.topic.alias ?a FILTER (str(?a) = \"Holla-Day\") }");
  EXPECT_EQ(str.rows.size(), 1u);
  ResultSet ne = Run(
      "SELECT ?y WHERE { m.01d1st film.actor.film ?y FILTER (?y != m.cvt_holla) }");
  EXPECT_EQ(ne.rows, (std::vector<std::vector<std::string>>{{"m.cvt_drumline"}}));
  // An entity never equals a literal.
  ResultSet mixed = Run(
      "SELECT ?y WHERE { m.01d1st film.actor.film ?y FILTER (?y = \"m.cvt_holla\") }");
  EXPECT_TRUE(mixed.rows.empty());
}

TEST_F(SparqlEvalTest, IncompatibleComparisonsRaise) {
  auto code = [&](std::string_view text) {
    try {
      Run(text);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kInvariantViolation;
  };
  EXPECT_EQ(code("SELECT ?x WHERE { ?x film.film.runtime ?n FILTER (?n > \"abc\") }"),
            ErrorCode::kEvaluationError);
  EXPECT_EQ(code("SELECT ?x WHERE { ?x film.film.runtime ?n FILTER (?x > 3) }"),
            ErrorCode::kEvaluationError);
  EXPECT_EQ(code("SELECT ?x WHERE { m.holla ?p ?x }"), ErrorCode::kUnsupportedFeature);
}

TEST_F(SparqlEvalTest, CountGroupsByProjection) {
  ResultSet total = Run("SELECT (COUNT(?y) AS ?c) WHERE { m.01d1st film.actor.film ?y }");
  EXPECT_EQ(total.columns, (std::vector<std::string>{"c"}));
  EXPECT_EQ(total.rows, (std::vector<std::vector<std::string>>{{"\"2\"^^xsd:integer"}}));
  ResultSet none = Run("SELECT COUNT(?y) WHERE { m.julius film.actor.film ?y }");
  EXPECT_EQ(none.columns, (std::vector<std::string>{"count"}));
  EXPECT_EQ(none.rows, (std::vector<std::vector<std::string>>{{"\"0\"^^xsd:integer"}}));
  ResultSet grouped = Run(
      "SELECT ?a (COUNT(?y) AS ?n) WHERE { ?a film.actor.film ?y }");
  EXPECT_EQ(grouped.rows,
            (std::vector<std::vector<std::string>>{{"m.01d1st", "\"2\"^^xsd:integer"}}));
  ResultSet distinct = Run(
      "SELECT (COUNT(DISTINCT ?a) AS ?n) WHERE { ?a film.actor.film ?y }");
  EXPECT_EQ(distinct.rows,
            (std::vector<std::vector<std::string>>{{"\"1\"^^xsd:integer"}}));
}

TEST_F(SparqlEvalTest, CompareValuesByCategory) {
  EXPECT_LT(CompareValues("\"9\"^^xsd:integer", "\"10\"^^xsd:integer", true), 0);
  EXPECT_GT(CompareValues("\"b\"", "\"a\"@en", true), 0);
  EXPECT_EQ(CompareValues("m.a", "m.a", false), 0);
  EXPECT_NE(CompareValues("m.a", "\"m.a\"", false), 0);
  EXPECT_THROW(CompareValues("m.a", "\"m.a\"", true), Error);
  EXPECT_THROW(CompareValues("\"1\"^^xsd:integer", "\"1999\"^^xsd:gYear", true), Error);
}

TEST(SparqlEvalOracleTest, MatchesNestedLoopOracle) {
  Rng rng(77);
  for (int i = 0; i < 250; ++i) {
    testing::RandomCase c = testing::MakeRandomCase(rng);
    KnowledgeGraph kg;
    testing::FillGraph(c.triples, kg);
    testing::OracleResult expected = testing::NaiveEvaluate(c.query, c.triples);
    bool raised = false;
    ResultSet actual;
    try {
      actual = Evaluate(c.query, kg);
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kEvaluationError);
      raised = true;
    }
    ASSERT_EQ(raised, expected.error) << PrintQuery(c.query);
    if (!raised) EXPECT_EQ(actual, expected.result) << PrintQuery(c.query);
  }
}

}  // namespace
}  // namespace sparql2q
