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

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "sparql2q/error.h"
#include "sparql2q/sparql.h"

namespace sparql2q {
namespace {

Error EvalError(const std::string &message) {
  return Error(ErrorCode::kEvaluationError, message);
}

double ParseNumber(const Literal &lit) {
  const char *begin = lit.lexical.c_str();
  char *end = nullptr;
  double value = std::strtod(begin, &end);
  if (lit.lexical.empty() || end != begin + lit.lexical.size()) {
    throw EvalError("malformed numeric literal " + lit.ToId());
  }
  return value;
}

template <typename T>
int ThreeWay(const T &a, const T &b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

bool IsOrdering(CompareOp op) {
  return op != CompareOp::kEq && op != CompareOp::kNe;
}

bool Holds(CompareOp op, int c) {
  switch (op) {
    case CompareOp::kLt: return c < 0;
    case CompareOp::kGt: return c > 0;
    case CompareOp::kLe: return c <= 0;
    case CompareOp::kGe: return c >= 0;
    case CompareOp::kEq: return c == 0;
    case CompareOp::kNe: return c != 0;
  }
  return false;
}

const Literal &RequireLiteral(const std::optional<Literal> &lit,
                              std::string_view id) {
  if (!lit) {
    throw EvalError("expected a literal operand, found " + std::string(id));
  }
  return *lit;
}

// Static join order: repeatedly take the pattern with the most positions
// that are ground or already bound; ties go to the earlier pattern.
std::vector<size_t> JoinOrder(const SparqlQuery &q) {
  std::vector<size_t> order;
  std::vector<bool> used(q.patterns.size(), false);
  std::set<std::string> bound;
  for (size_t step = 0; step < q.patterns.size(); ++step) {
    int best_score = -1;
    size_t best = 0;
    for (size_t i = 0; i < q.patterns.size(); ++i) {
      if (used[i]) continue;
      const TriplePattern &tp = q.patterns[i];
      int score = 0;
      for (const Term *t : {&tp.subject, &tp.object}) {
        if (t->is_ground() || bound.count(t->value)) ++score;
      }
      if (score > best_score) {
        best_score = score;
        best = i;
      }
    }
    used[best] = true;
    order.push_back(best);
    for (const Term *t : {&q.patterns[best].subject, &q.patterns[best].object}) {
      if (t->is_variable()) bound.insert(t->value);
    }
  }
  return order;
}

using Solution = std::vector<std::string>;

}  // namespace

int CompareValues(std::string_view a, std::string_view b, bool ordering) {
  std::optional<Literal> la = ParseLiteral(a);
  std::optional<Literal> lb = ParseLiteral(b);
  if (!la || !lb) {
    if (la || lb) {
      if (ordering) {
        throw EvalError("cannot order entity against literal: " +
                        std::string(a) + " vs " + std::string(b));
      }
      return a < b ? -1 : 1;
    }
    return ThreeWay(a, b);
  }
  LiteralCategory ca = la->category();
  LiteralCategory cb = lb->category();
  if (ca != cb) {
    throw EvalError("incompatible literal types: " + std::string(a) + " vs " +
                    std::string(b));
  }
  switch (ca) {
    case LiteralCategory::kNumber:
      return ThreeWay(ParseNumber(*la), ParseNumber(*lb));
    case LiteralCategory::kDate:
    case LiteralCategory::kString:
      return ThreeWay(la->lexical, lb->lexical);
  }
  return 0;
}

bool ApplyFilter(const Filter &filter, std::string_view value,
                 std::string_view operand_value) {
  switch (filter.function) {
    case FilterFunction::kNone: {
      if (IsOrdering(filter.op) &&
          (!IsLiteralId(value) || !IsLiteralId(operand_value))) {
        throw EvalError("ordering comparison on a non-literal value");
      }
      return Holds(filter.op, CompareValues(value, operand_value,
                                            IsOrdering(filter.op)));
    }
    case FilterFunction::kStr:
    case FilterFunction::kLang: {
      std::optional<Literal> operand = ParseLiteral(operand_value);
      const Literal &rhs = RequireLiteral(operand, operand_value);
      std::optional<Literal> lit = ParseLiteral(value);
      std::string lhs;
      if (filter.function == FilterFunction::kStr) {
        lhs = lit ? lit->lexical : std::string(value);
      } else {
        lhs = lit ? lit->language : "";
      }
      return Holds(filter.op, ThreeWay(lhs, rhs.lexical));
    }
  }
  return false;
}

ResultSet Evaluate(const SparqlQuery &q, const KnowledgeGraph &kg) {
  const std::vector<std::string> vars = q.PatternVariables();
  std::map<std::string, size_t> slot;
  for (size_t i = 0; i < vars.size(); ++i) slot[vars[i]] = i;

  std::vector<Solution> solutions;
  solutions.emplace_back(vars.size());
  for (size_t index : JoinOrder(q)) {
    const TriplePattern &tp = q.patterns[index];
    std::vector<Solution> next;
    for (const Solution &sol : solutions) {
      auto resolve = [&](const Term &t) -> const std::string * {
        if (t.is_ground()) return &t.value;
        const std::string &v = sol[slot.at(t.value)];
        return v.empty() ? nullptr : &v;
      };
      const std::string *s = resolve(tp.subject);
      const std::string *o = resolve(tp.object);
      std::span<const Triple *const> candidates =
          s ? kg.BySubject(*s)
            : (o ? kg.ByObject(*o) : kg.ByPredicate(tp.predicate.value));
      for (const Triple *t : candidates) {
        if (t->predicate != tp.predicate.value) continue;
        if (s && t->subject != *s) continue;
        if (o && t->object != *o) continue;
        Solution extended = sol;
        auto bind = [&](const Term &term, const std::string &value) {
          if (term.is_ground()) return true;
          std::string &cell = extended[slot.at(term.value)];
          if (cell.empty()) {
            cell = value;
            return true;
          }
          return cell == value;
        };
        if (bind(tp.subject, t->subject) && bind(tp.object, t->object)) {
          next.push_back(std::move(extended));
        }
      }
    }
    solutions = std::move(next);
    if (solutions.empty()) break;
  }

  std::vector<Solution> kept;
  for (Solution &sol : solutions) {
    bool pass = true;
    for (const Filter &f : q.filters) {
      const std::string &value = sol[slot.at(f.variable)];
      const std::string &operand = f.operand.is_variable()
                                       ? sol[slot.at(f.operand.value)]
                                       : f.operand.value;
      if (!ApplyFilter(f, value, operand)) {
        pass = false;
        break;
      }
    }
    if (pass) kept.push_back(std::move(sol));
  }
  std::sort(kept.begin(), kept.end());

  if (q.order_by) {
    size_t key = slot.at(q.order_by->variable);
    bool desc = q.order_by->descending;
    std::stable_sort(kept.begin(), kept.end(),
                     [&](const Solution &a, const Solution &b) {
                       int c = CompareValues(a[key], b[key], true);
                       return desc ? c > 0 : c < 0;
                     });
  }

  ResultSet result;
  result.columns = q.projection;
  std::vector<size_t> projected;
  for (const std::string &v : q.projection) projected.push_back(slot.at(v));
  auto project = [&](const Solution &sol) {
    std::vector<std::string> row;
    row.reserve(projected.size());
    for (size_t i : projected) row.push_back(sol[i]);
    return row;
  };

  if (q.count) {
    result.columns.push_back(q.count->alias.empty() ? "count"
                                                    : q.count->alias);
    size_t counted = slot.at(q.count->variable);
    std::map<std::vector<std::string>, std::set<std::string>> distinct_groups;
    std::map<std::vector<std::string>, size_t> groups;
    for (const Solution &sol : kept) {
      std::vector<std::string> key = project(sol);
      ++groups[key];
      distinct_groups[key].insert(sol[counted]);
    }
    if (groups.empty() && projected.empty()) groups[{}] = 0;
    for (const auto &[key, n] : groups) {
      size_t value = q.count->distinct ? distinct_groups[key].size() : n;
      std::vector<std::string> row = key;
      row.push_back(
          Literal{std::to_string(value), "xsd:integer", ""}.ToId());
      result.rows.push_back(std::move(row));
    }
  } else {
    for (const Solution &sol : kept) result.rows.push_back(project(sol));
    if (!q.order_by) std::sort(result.rows.begin(), result.rows.end());
    if (q.distinct) {
      std::set<std::vector<std::string>> seen;
      std::vector<std::vector<std::string>> unique;
      for (auto &row : result.rows) {
        if (seen.insert(row).second) unique.push_back(std::move(row));
      }
      result.rows = std::move(unique);
    }
  }
  if (q.limit && result.rows.size() > static_cast<size_t>(*q.limit)) {
    result.rows.resize(static_cast<size_t>(*q.limit));
  }
  return result;
}

}  // namespace sparql2q
