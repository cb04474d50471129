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
#include <set>

#include "sparql2q/error.h"
#include "sparql2q/sparql.h"

namespace sparql2q {
namespace {

template <typename Fn>
void ForEachNode(SparqlQuery &q, Fn fn) {
  for (TriplePattern &tp : q.patterns) {
    fn(tp.subject);
    fn(tp.object);
  }
  for (Filter &f : q.filters) fn(f.operand);
}

}  // namespace

SparqlQuery SubstituteNames(const SparqlQuery &query,
                            const KnowledgeGraph &kg) {
  SparqlQuery out = query;
  ForEachNode(out, [&](Term &t) {
    if (t.kind != Term::Kind::kIri) return;
    const EntityRecord *record = kg.FindEntity(t.value);
    if (!record) {
      throw Error(ErrorCode::kUnknownEntity, "unknown entity " + t.value);
    }
    if (!record->name.empty()) t = Term::String(record->name);
  });
  return out;
}

SparqlQuery ExpandProjection(const SparqlQuery &query) {
  SparqlQuery out = query;
  out.projection = query.PatternVariables();
  out.count.reset();
  out.order_by.reset();
  out.limit.reset();
  return out;
}

std::vector<std::string> TopicEntities(const SparqlQuery &query) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const TriplePattern &tp : query.patterns) {
    for (const Term *t : {&tp.subject, &tp.object}) {
      if (t->kind == Term::Kind::kIri && seen.insert(t->value).second) {
        out.push_back(t->value);
      }
    }
  }
  return out;
}

AbstractedQuery AbstractTopicEntities(const SparqlQuery &query) {
  std::vector<std::string> entities = TopicEntities(query);
  if (entities.empty()) {
    throw Error(ErrorCode::kNothingToAbstract,
                "query has no ground entity term");
  }
  std::set<std::string> taken;
  for (const std::string &v : query.PatternVariables()) taken.insert(v);
  for (const std::string &v : query.projection) taken.insert(v);
  if (query.count && !query.count->alias.empty()) {
    taken.insert(query.count->alias);
  }

  AbstractedQuery out;
  out.query = query;
  std::map<std::string, std::string> var_of;
  size_t next = 0;
  for (const std::string &entity : entities) {
    std::string name;
    do {
      name = "te" + std::to_string(next++);
    } while (taken.count(name));
    taken.insert(name);
    var_of[entity] = name;
    out.mapping.emplace_back(entity, name);
    out.query.projection.push_back(name);
  }
  ForEachNode(out.query, [&](Term &t) {
    if (t.kind != Term::Kind::kIri) return;
    auto it = var_of.find(t.value);
    if (it != var_of.end()) t = Term::Var(it->second);
  });
  return out;
}

SparqlQuery BindVariables(const SparqlQuery &query,
                          const std::map<std::string, Term> &values) {
  SparqlQuery out = query;
  ForEachNode(out, [&](Term &t) {
    if (!t.is_variable()) return;
    auto it = values.find(t.value);
    if (it != values.end()) t = it->second;
  });
  std::erase_if(out.projection, [&](const std::string &v) {
    return values.count(v) > 0;
  });
  return out;
}

}  // namespace sparql2q
