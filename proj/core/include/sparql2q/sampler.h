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

#ifndef SPARQL2Q_SAMPLER_H_
#define SPARQL2Q_SAMPLER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparql2q/kg.h"
#include "sparql2q/sparql.h"

namespace sparql2q {

struct SingleFact {
  EntityRecord subject;
  std::string predicate;
  EntityRecord object;

  bool operator==(const SingleFact &) const = default;
};

struct CvtEdge {
  std::string predicate;
  EntityRecord entity;
  bool from_pattern = false;

  bool operator==(const CvtEdge &) const = default;
};

struct CvtStar {
  std::string center;
  std::vector<CvtEdge> inward;   // (entity, predicate, center)
  std::vector<CvtEdge> outward;  // (center, predicate, entity)

  bool operator==(const CvtStar &) const = default;
};

// The unit handed to the auto-prompter: one single-relation triple or one
// CVT node with its one-hop edges.
struct AtomicSubgraph {
  std::string id;
  PredicateKind kind = PredicateKind::kSingle;
  std::optional<SingleFact> single;
  std::optional<CvtStar> cvt;
  // Entity id -> query variable it was bound to; empty for training samples.
  std::map<std::string, std::string> var_roles;
  // Indexes of the query triple patterns this atom covers.
  std::vector<size_t> pattern_indices;

  // All edges as triples (pattern edges and context edges).
  std::vector<Triple> Triples() const;
  std::vector<Triple> PatternTriples() const;
  // Named endpoints (never the CVT center), in serialization order.
  std::vector<EntityRecord> Entities() const;

  bool operator==(const AtomicSubgraph &) const = default;
};

struct InstantiatedGraph {
  SparqlQuery source;
  std::map<std::string, std::string> bindings;  // variable -> id
  std::vector<Triple> ground_patterns;          // one per query pattern
  std::vector<AtomicSubgraph> atoms;
  std::map<std::string, EntityRecord> entities;  // metadata of bound ids
};

struct SamplerOptions {
  // One-hop context edges added to a CVT atom beyond its pattern edges.
  size_t context_cap = 8;
  // Solution rows considered when picking the instantiation.
  size_t max_solutions = 1000;
};

// Training-stage sampling for one catalogued predicate. Returns up to
// `limit` atoms chosen uniformly (seeded) from the canonical candidate
// order; the result keeps candidate order.
std::vector<AtomicSubgraph> SampleForPredicate(const KnowledgeGraph &kg,
                                               const std::string &predicate,
                                               size_t limit, uint64_t seed);

AtomicSubgraph SingleAtom(const KnowledgeGraph &kg, const Triple &triple);
AtomicSubgraph CvtAtom(const KnowledgeGraph &kg, const std::string &center);

// Inference-stage sampling: binds every variable of `query` from one
// seeded solution and partitions the ground patterns into atoms.
InstantiatedGraph Instantiate(const SparqlQuery &query,
                              const KnowledgeGraph &kg, uint64_t seed,
                              const SamplerOptions &options = {});

std::vector<AtomicSubgraph> Decompose(const InstantiatedGraph &graph);

// One JSON record per atom: id, kind, edges, entity metadata, var_roles.
std::string AtomToJson(const AtomicSubgraph &atom);
AtomicSubgraph AtomFromJson(std::string_view line);

}  // namespace sparql2q

#endif  // SPARQL2Q_SAMPLER_H_
