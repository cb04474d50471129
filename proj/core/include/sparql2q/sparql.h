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

#ifndef SPARQL2Q_SPARQL_H_
#define SPARQL2Q_SPARQL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparql2q/kg.h"

namespace sparql2q {

// The SPARQL subset found in WebQuestionsSP / ComplexWebQuestions /
// PathQuestions style datasets:
//
//   PREFIX p: <iri>
//   SELECT [DISTINCT] ?v ... | COUNT([DISTINCT] ?v) | (COUNT(...) AS ?c)
//   WHERE { s p o . ... FILTER (?v op value [&& ...]) }
//   [ORDER BY ?v | ASC(?v) | DESC(?v) | ?v DESC] [LIMIT n]
//
// The Freebase `ns:` prefix is stripped from names, so predicates and
// entity ids appear as bare dotted paths (film.actor.film, m.01d1st).

struct Term {
  enum class Kind { kVariable, kIri, kLiteral };

  Kind kind = Kind::kIri;
  // Variable name without the leading '?', bare IRI / entity id, or the
  // canonical literal id (see Literal::ToId).
  std::string value;

  static Term Var(std::string name) { return {Kind::kVariable, std::move(name)}; }
  static Term Iri(std::string id) { return {Kind::kIri, std::move(id)}; }
  static Term Lit(const Literal &lit) { return {Kind::kLiteral, lit.ToId()}; }
  static Term String(std::string_view text) {
    return Lit(Literal{std::string(text), "", ""});
  }

  bool is_variable() const { return kind == Kind::kVariable; }
  bool is_ground() const { return kind != Kind::kVariable; }

  bool operator==(const Term &) const = default;
};

struct TriplePattern {
  Term subject;
  Term predicate;
  Term object;

  bool operator==(const TriplePattern &) const = default;
};

enum class CompareOp { kLt, kGt, kLe, kGe, kEq, kNe };
enum class FilterFunction { kNone, kStr, kLang };

std::string_view CompareOpText(CompareOp op);

// FILTER (f(?variable) op operand). Conjunctions are split into one Filter
// per conjunct.
struct Filter {
  FilterFunction function = FilterFunction::kNone;
  std::string variable;
  CompareOp op = CompareOp::kEq;
  Term operand;

  bool operator==(const Filter &) const = default;
};

struct CountAggregate {
  std::string variable;
  bool distinct = false;
  std::string alias;  // empty when written without AS

  bool operator==(const CountAggregate &) const = default;
};

struct OrderBy {
  std::string variable;
  bool descending = false;

  bool operator==(const OrderBy &) const = default;
};

struct Prefix {
  std::string name;  // without the trailing colon
  std::string iri;   // without angle brackets

  bool operator==(const Prefix &) const = default;
};

struct SparqlQuery {
  std::vector<Prefix> prefixes;
  bool distinct = false;
  // Projected variables. With a COUNT aggregate these act as implicit
  // grouping keys.
  std::vector<std::string> projection;
  std::optional<CountAggregate> count;
  std::vector<TriplePattern> patterns;
  std::vector<Filter> filters;
  std::optional<OrderBy> order_by;
  std::optional<int64_t> limit;

  bool operator==(const SparqlQuery &) const = default;

  // Variables of the WHERE patterns in order of first occurrence.
  std::vector<std::string> PatternVariables() const;
};

// Throws SyntaxError (with offset and the expected token) or
// Error(kUnsupportedFeature) naming the construct.
SparqlQuery ParseQuery(std::string_view text);

// Parses a query at the start of `text` and reports how many bytes it
// consumed; anything after the final modifier is left for the caller.
struct PrefixParse {
  SparqlQuery query;
  size_t consumed = 0;
};
PrefixParse ParseQueryPrefix(std::string_view text);

// Checks the structural invariants; throws SyntaxError at `position`.
void ValidateQuery(const SparqlQuery &query, size_t position = 0);

// Canonical single-spaced rendering; ParseQuery(PrintQuery(q)) == q.
std::string PrintQuery(const SparqlQuery &query);
std::string PrintTerm(const Term &term);

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const ResultSet &) const = default;
};

// Basic graph pattern join, filters, ORDER BY, projection, DISTINCT, LIMIT
// and COUNT. Without ORDER BY rows are sorted lexicographically. Throws
// Error(kEvaluationError) on comparisons between incompatible values.
ResultSet Evaluate(const SparqlQuery &query, const KnowledgeGraph &kg);

// Three-way comparison used by filters and ORDER BY. `ordering` is false for
// = and != which also accept entity ids.
int CompareValues(std::string_view a, std::string_view b, bool ordering);
bool ApplyFilter(const Filter &filter, std::string_view value,
                 std::string_view operand_value);

// Replaces each ground entity id with its quoted surface name.
SparqlQuery SubstituteNames(const SparqlQuery &query, const KnowledgeGraph &kg);

// Projects every pattern variable and drops COUNT, ORDER BY and LIMIT.
SparqlQuery ExpandProjection(const SparqlQuery &query);

// Ground entity terms of the WHERE patterns, first-occurrence order.
std::vector<std::string> TopicEntities(const SparqlQuery &query);

struct AbstractedQuery {
  SparqlQuery query;
  // (entity id, fresh variable) in first-occurrence order.
  std::vector<std::pair<std::string, std::string>> mapping;
};

// Replaces topic entities with fresh variables ?te0, ?te1, ... (also inside
// filters) and appends them to the projection.
AbstractedQuery AbstractTopicEntities(const SparqlQuery &query);

// Replaces the given variables by ground terms and removes them from the
// projection. Inverse of AbstractTopicEntities.
SparqlQuery BindVariables(const SparqlQuery &query,
                          const std::map<std::string, Term> &values);

}  // namespace sparql2q

#endif  // SPARQL2Q_SPARQL_H_
