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

// JSON Lines encodings of the record types exchanged between stages.

#include "json.hpp"
#include "sparql2q/corpus.h"
#include "sparql2q/error.h"
#include "sparql2q/prompt.h"
#include "sparql2q/sampler.h"

namespace sparql2q {
namespace {

using nlohmann::json;

json EntityJson(const EntityRecord &e) {
  return {{"id", e.id},
          {"name", e.name},
          {"description", e.description},
          {"types", e.types}};
}

EntityRecord EntityFrom(const json &j) {
  EntityRecord e;
  e.id = j.at("id").get<std::string>();
  e.name = j.value("name", "");
  e.description = j.value("description", "");
  e.types = j.value("types", std::vector<std::string>{});
  return e;
}

json EdgesJson(const std::vector<CvtEdge> &edges) {
  json out = json::array();
  for (const CvtEdge &e : edges) {
    out.push_back({{"predicate", e.predicate},
                   {"entity", EntityJson(e.entity)},
                   {"from_pattern", e.from_pattern}});
  }
  return out;
}

std::vector<CvtEdge> EdgesFrom(const json &j) {
  std::vector<CvtEdge> edges;
  for (const json &e : j) {
    edges.push_back({e.at("predicate").get<std::string>(),
                     EntityFrom(e.at("entity")),
                     e.value("from_pattern", false)});
  }
  return edges;
}

json PostingsJson(const std::vector<Posting> &postings) {
  json out = json::array();
  for (const Posting &p : postings) {
    out.push_back({p.ref.document, p.ref.paragraph, p.ref.sentence, p.position});
  }
  return out;
}

}  // namespace

std::string AtomToJson(const AtomicSubgraph &atom) {
  json j = {{"id", atom.id}, {"kind", std::string(PredicateKindName(atom.kind))}};
  if (atom.single) {
    j["subject"] = EntityJson(atom.single->subject);
    j["predicate"] = atom.single->predicate;
    j["object"] = EntityJson(atom.single->object);
  }
  if (atom.cvt) {
    j["center"] = atom.cvt->center;
    j["inward"] = EdgesJson(atom.cvt->inward);
    j["outward"] = EdgesJson(atom.cvt->outward);
  }
  j["var_roles"] = atom.var_roles;
  j["pattern_indices"] = atom.pattern_indices;
  return j.dump();
}

AtomicSubgraph AtomFromJson(std::string_view line) {
  try {
    json j = json::parse(line);
    AtomicSubgraph atom;
    atom.id = j.at("id").get<std::string>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "single") {
      atom.kind = PredicateKind::kSingle;
      atom.single = SingleFact{EntityFrom(j.at("subject")),
                               j.at("predicate").get<std::string>(),
                               EntityFrom(j.at("object"))};
    } else if (kind == "cvt") {
      atom.kind = PredicateKind::kCvt;
      CvtStar star;
      star.center = j.at("center").get<std::string>();
      star.inward = EdgesFrom(j.at("inward"));
      star.outward = EdgesFrom(j.at("outward"));
      atom.cvt = std::move(star);
    } else {
      throw Error(ErrorCode::kMalformedInput, "unknown atom kind " + kind);
    }
    atom.var_roles =
        j.value("var_roles", std::map<std::string, std::string>{});
    atom.pattern_indices = j.value("pattern_indices", std::vector<size_t>{});
    return atom;
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("malformed atom record: ") + e.what());
  }
}

std::string PairToJson(const TrainingPair &pair) {
  json j = {{"input", pair.input},
            {"target", pair.target},
            {"kind", pair.kind},
            {"atom_id", pair.atom_id}};
  return j.dump();
}

std::string MatchToJson(const DescriptionMatch &match) {
  json hits = json::object();
  for (const auto &[name, postings] : match.hits) {
    hits[name] = PostingsJson(postings);
  }
  json j = {{"atom_id", match.atom_id},
            {"unit", match.unit == MatchUnit::kSentence ? "sentence" : "paragraph"},
            {"text", match.text},
            {"document", match.location.document},
            {"paragraph", match.location.paragraph},
            {"sentence", match.location.sentence},
            {"hits", hits}};
  return j.dump();
}

std::string PromptToJson(const PromptText &prompt) {
  json annotations = json::array();
  for (const Annotation &a : prompt.annotations) {
    annotations.push_back(
        {{"variable", a.variable}, {"entity", a.entity_id}, {"offset", a.offset}});
  }
  json segments = json::array();
  for (const PromptSegment &s : prompt.segments) {
    segments.push_back({{"atom", s.atom_id}, {"description", s.description}});
  }
  json j = {{"text", prompt.text},
            {"annotations", annotations},
            {"segments", segments}};
  return j.dump();
}

}  // namespace sparql2q
