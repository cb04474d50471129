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

#include <regex>
#include <string>

#include "sparql2q/sparql.h"

namespace sparql2q {
namespace {

// Bare numeric forms the lexer reads back with the same datatype.
bool PrintsBare(const Literal &lit) {
  static const std::regex kInteger(R"([+-]?[0-9]+)");
  static const std::regex kDecimal(R"([+-]?[0-9]+\.[0-9]+)");
  static const std::regex kDouble(R"([+-]?[0-9]+(\.[0-9]+)?[eE][+-]?[0-9]+)");
  if (!lit.language.empty()) return false;
  if (lit.datatype == "xsd:integer") {
    return std::regex_match(lit.lexical, kInteger);
  }
  if (lit.datatype == "xsd:decimal") {
    return std::regex_match(lit.lexical, kDecimal);
  }
  if (lit.datatype == "xsd:double") {
    return std::regex_match(lit.lexical, kDouble);
  }
  return false;
}

std::string PrintVar(const std::string &name) { return "?" + name; }

bool IsBareName(const std::string &value) {
  auto name_start = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (value.empty() || !name_start(value.front()) || value.back() == '.') {
    return false;
  }
  for (char c : value) {
    bool ok = name_start(c) || (c >= '0' && c <= '9') || c == '.' ||
              c == ':' || c == '-' || c == '/' || c == '#';
    if (!ok) return false;
  }
  return true;
}

std::string PrintFilter(const Filter &f) {
  std::string lhs = PrintVar(f.variable);
  if (f.function == FilterFunction::kStr) lhs = "str(" + lhs + ")";
  if (f.function == FilterFunction::kLang) lhs = "lang(" + lhs + ")";
  return "FILTER (" + lhs + " " + std::string(CompareOpText(f.op)) + " " +
         PrintTerm(f.operand) + ")";
}

}  // namespace

std::string_view CompareOpText(CompareOp op) {
  switch (op) {
    case CompareOp::kLt: return "<";
    case CompareOp::kGt: return ">";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGe: return ">=";
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
  }
  return "=";
}

std::string PrintTerm(const Term &term) {
  switch (term.kind) {
    case Term::Kind::kVariable:
      return PrintVar(term.value);
    case Term::Kind::kIri:
      if (term.value.front() == '<' || IsBareName(term.value)) {
        return term.value;
      }
      return "<http://rdf.freebase.com/ns/" + term.value + ">";
    case Term::Kind::kLiteral: {
      auto lit = ParseLiteral(term.value);
      if (lit && PrintsBare(*lit)) return lit->lexical;
      return term.value;
    }
  }
  return term.value;
}

std::string PrintQuery(const SparqlQuery &q) {
  std::string out;
  auto word = [&out](std::string_view w) {
    if (!out.empty()) out += ' ';
    out.append(w);
  };
  for (const Prefix &p : q.prefixes) {
    word("PREFIX");
    word(p.name + ":");
    word("<" + p.iri + ">");
  }
  word("SELECT");
  if (q.distinct) word("DISTINCT");
  for (const std::string &v : q.projection) word(PrintVar(v));
  if (q.count) {
    std::string inner = "COUNT(";
    if (q.count->distinct) inner += "DISTINCT ";
    inner += PrintVar(q.count->variable) + ")";
    if (q.count->alias.empty()) {
      word(inner);
    } else {
      word("(" + inner + " AS " + PrintVar(q.count->alias) + ")");
    }
  }
  word("WHERE");
  word("{");
  for (const TriplePattern &tp : q.patterns) {
    word(PrintTerm(tp.subject));
    word(PrintTerm(tp.predicate));
    word(PrintTerm(tp.object));
    word(".");
  }
  for (const Filter &f : q.filters) word(PrintFilter(f));
  word("}");
  if (q.order_by) {
    word("ORDER BY");
    if (q.order_by->descending) {
      word("DESC(" + PrintVar(q.order_by->variable) + ")");
    } else {
      word(PrintVar(q.order_by->variable));
    }
  }
  if (q.limit) {
    word("LIMIT");
    word(std::to_string(*q.limit));
  }
  return out;
}

}  // namespace sparql2q
