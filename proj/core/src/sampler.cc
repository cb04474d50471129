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

#include "sparql2q/sampler.h"

#include <algorithm>
#include <set>

#include "sparql2q/error.h"
#include "sparql2q/rng.h"

namespace sparql2q {
namespace {

bool EdgeLess(const CvtEdge &a, const CvtEdge &b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return a.entity.id < b.entity.id;
}

void SortEdges(CvtStar &star) {
  std::stable_sort(star.inward.begin(), star.inward.end(), EdgeLess);
  std::stable_sort(star.outward.begin(), star.outward.end(), EdgeLess);
}

// Grows a CVT star built from pattern edges with context edges.
void AddContext(const KnowledgeGraph &kg, CvtStar &star, size_t cap) {
  std::set<std::pair<std::string, std::string>> have_in, have_out;
  for (const CvtEdge &e : star.inward) have_in.emplace(e.entity.id, e.predicate);
  for (const CvtEdge &e : star.outward) {
    have_out.emplace(e.predicate, e.entity.id);
  }
  Star full = OneHopStar(kg, star.center);
  size_t added = 0;
  for (const auto &[entity, predicate] : full.inward) {
    if (added >= cap) break;
    if (have_in.count({entity, predicate})) continue;
    star.inward.push_back({predicate, kg.Describe(entity), false});
    ++added;
  }
  for (const auto &[predicate, entity] : full.outward) {
    if (added >= cap) break;
    if (have_out.count({predicate, entity})) continue;
    star.outward.push_back({predicate, kg.Describe(entity), false});
    ++added;
  }
}

}  // namespace

std::vector<Triple> AtomicSubgraph::Triples() const {
  std::vector<Triple> out;
  if (single) {
    out.push_back({single->subject.id, single->predicate, single->object.id});
  }
  if (cvt) {
    for (const CvtEdge &e : cvt->inward) {
      out.push_back({e.entity.id, e.predicate, cvt->center});
    }
    for (const CvtEdge &e : cvt->outward) {
      out.push_back({cvt->center, e.predicate, e.entity.id});
    }
  }
  return out;
}

std::vector<Triple> AtomicSubgraph::PatternTriples() const {
  if (single) return Triples();
  std::vector<Triple> out;
  if (cvt) {
    for (const CvtEdge &e : cvt->inward) {
      if (e.from_pattern) out.push_back({e.entity.id, e.predicate, cvt->center});
    }
    for (const CvtEdge &e : cvt->outward) {
      if (e.from_pattern) out.push_back({cvt->center, e.predicate, e.entity.id});
    }
  }
  return out;
}

std::vector<EntityRecord> AtomicSubgraph::Entities() const {
  std::vector<EntityRecord> out;
  if (single) {
    out.push_back(single->subject);
    out.push_back(single->object);
  }
  if (cvt) {
    for (const CvtEdge &e : cvt->inward) out.push_back(e.entity);
    for (const CvtEdge &e : cvt->outward) out.push_back(e.entity);
  }
  return out;
}

AtomicSubgraph SingleAtom(const KnowledgeGraph &kg, const Triple &triple) {
  AtomicSubgraph atom;
  atom.id = triple.subject + " " + triple.predicate + " " + triple.object;
  atom.kind = PredicateKind::kSingle;
  atom.single = SingleFact{kg.Describe(triple.subject), triple.predicate,
                           kg.Describe(triple.object)};
  return atom;
}

AtomicSubgraph CvtAtom(const KnowledgeGraph &kg, const std::string &center) {
  AtomicSubgraph atom;
  atom.id = center;
  atom.kind = PredicateKind::kCvt;
  CvtStar star;
  star.center = center;
  Star full = OneHopStar(kg, center);
  for (const auto &[entity, predicate] : full.inward) {
    star.inward.push_back({predicate, kg.Describe(entity), false});
  }
  for (const auto &[predicate, entity] : full.outward) {
    star.outward.push_back({predicate, kg.Describe(entity), false});
  }
  SortEdges(star);
  atom.cvt = std::move(star);
  return atom;
}

std::vector<AtomicSubgraph> SampleForPredicate(const KnowledgeGraph &kg,
                                               const std::string &predicate,
                                               size_t limit, uint64_t seed) {
  if (!kg.IsCatalogued(predicate)) {
    throw Error(ErrorCode::kInvalidArgument,
                "predicate " + predicate + " is not catalogued");
  }
  if (limit < 1) {
    throw Error(ErrorCode::kInvalidArgument, "sample limit must be >= 1");
  }
  Rng rng(seed);
  std::vector<AtomicSubgraph> out;
  if (kg.KindOf(predicate) == PredicateKind::kSingle) {
    std::vector<Binding> rows =
        MatchPattern(kg, PatternSlot::Var("s"), PatternSlot::Ground(predicate),
                     PatternSlot::Var("o"));
    for (size_t i : SampleIndices(rows.size(), limit, rng)) {
      out.push_back(SingleAtom(kg, {rows[i].at("s"), predicate, rows[i].at("o")}));
    }
  } else {
    std::vector<Binding> rows =
        MatchPattern(kg, PatternSlot::Var("y"), PatternSlot::Ground(predicate),
                     PatternSlot::Var("x"));
    std::vector<std::string> centers;
    for (const Binding &b : rows) centers.push_back(b.at("x"));
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    for (size_t i : SampleIndices(centers.size(), limit, rng)) {
      out.push_back(CvtAtom(kg, centers[i]));
    }
  }
  return out;
}

InstantiatedGraph Instantiate(const SparqlQuery &query,
                              const KnowledgeGraph &kg, uint64_t seed,
                              const SamplerOptions &options) {
  SparqlQuery expanded = ExpandProjection(query);
  ResultSet rs = Evaluate(expanded, kg);
  if (rs.rows.empty()) {
    throw Error(ErrorCode::kNotInstantiable,
                "query has no solution: " + PrintQuery(query));
  }
  Rng rng(seed);
  size_t window = std::min(rs.rows.size(), std::max<size_t>(options.max_solutions, 1));
  const std::vector<std::string> &row = rs.rows[rng.Uniform(window)];

  InstantiatedGraph g;
  g.source = query;
  for (size_t i = 0; i < rs.columns.size(); ++i) {
    g.bindings[rs.columns[i]] = row[i];
  }
  auto ground = [&](const Term &t) {
    return t.is_variable() ? g.bindings.at(t.value) : t.value;
  };
  for (const TriplePattern &tp : query.patterns) {
    g.ground_patterns.push_back(
        {ground(tp.subject), tp.predicate.value, ground(tp.object)});
  }
  for (const auto &[var, id] : g.bindings) g.entities.emplace(id, kg.Describe(id));

  std::map<std::string, size_t> atom_of_center;
  for (size_t i = 0; i < g.ground_patterns.size(); ++i) {
    const Triple &t = g.ground_patterns[i];
    std::string center;
    const bool object_cvt = kg.IsCvtNode(t.object);
    const bool subject_cvt = kg.IsCvtNode(t.subject);
    if (object_cvt && (!subject_cvt ||
                       kg.KindOf(t.predicate) == PredicateKind::kCvt)) {
      center = t.object;
    } else if (subject_cvt) {
      center = t.subject;
    }
    if (center.empty()) {
      AtomicSubgraph atom = SingleAtom(kg, t);
      atom.pattern_indices.push_back(i);
      g.atoms.push_back(std::move(atom));
      continue;
    }
    auto [it, inserted] = atom_of_center.emplace(center, g.atoms.size());
    if (inserted) {
      AtomicSubgraph atom;
      atom.id = center;
      atom.kind = PredicateKind::kCvt;
      atom.cvt = CvtStar{center, {}, {}};
      g.atoms.push_back(std::move(atom));
    }
    AtomicSubgraph &atom = g.atoms[it->second];
    atom.pattern_indices.push_back(i);
    CvtStar &star = *atom.cvt;
    const bool inward = t.object == center;
    std::vector<CvtEdge> &edges = inward ? star.inward : star.outward;
    const std::string &other = inward ? t.subject : t.object;
    bool duplicate = std::any_of(edges.begin(), edges.end(), [&](const CvtEdge &e) {
      return e.predicate == t.predicate && e.entity.id == other;
    });
    if (!duplicate) edges.push_back({t.predicate, kg.Describe(other), true});
  }

  for (AtomicSubgraph &atom : g.atoms) {
    if (atom.cvt) {
      SortEdges(*atom.cvt);
      AddContext(kg, *atom.cvt, options.context_cap);
      SortEdges(*atom.cvt);
    }
    std::set<std::string> ids;
    for (const Triple &t : atom.Triples()) {
      ids.insert(t.subject);
      ids.insert(t.object);
    }
    for (const auto &[var, id] : g.bindings) {
      if (ids.count(id)) atom.var_roles.emplace(id, var);
    }
  }
  return g;
}

std::vector<AtomicSubgraph> Decompose(const InstantiatedGraph &graph) {
  return graph.atoms;
}

}  // namespace sparql2q
