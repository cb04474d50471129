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

#ifndef SPARQL2Q_SERIALIZER_H_
#define SPARQL2Q_SERIALIZER_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sparql2q/sampler.h"

namespace sparql2q {

// Marker tokens of the auto-prompter input.
inline constexpr std::string_view kHeadMarker = "<H>";
inline constexpr std::string_view kDescriptionMarker = "<D>";
inline constexpr std::string_view kPredicateMarker = "<P>";
inline constexpr std::string_view kTailMarker = "<T>";
inline constexpr std::string_view kInwardPrefix = "R@";

enum class SerializationStrategy { kEntityName, kTypePlaceholder };

std::string_view StrategyName(SerializationStrategy strategy);
std::optional<SerializationStrategy> ParseStrategy(std::string_view name);

struct SerializerOptions {
  // Entity descriptions are cut to this many whitespace tokens.
  size_t max_description_tokens = 60;
};

struct SerializedGraph {
  std::string text;
  // Bracketed type token -> entity id. Empty in entity-name mode.
  std::map<std::string, std::string> placeholder_map;
};

// Type tokens derived from a `domain.subject_type.property` predicate.
std::string SubjectTypeToken(std::string_view predicate);
std::string ObjectTypeToken(std::string_view predicate);

struct Placeholder {
  std::string entity_id;
  std::string name;
  std::string token;
};

// One placeholder per distinct named entity of the atom, in serialization
// order. Colliding tokens of different entities get a numeric suffix
// ([film], [film_2], ...).
std::vector<Placeholder> AssignPlaceholders(const AtomicSubgraph &atom);

SerializedGraph Serialize(const AtomicSubgraph &atom,
                          SerializationStrategy strategy,
                          const SerializerOptions &options = {});

// Replaces whole-word, case-insensitive occurrences of each surface name by
// its token, longest name first.
std::string Delexicalize(
    std::string_view text,
    const std::vector<std::pair<std::string, std::string>> &entities);

// Replaces every bracketed placeholder ([a-z0-9_]+) by its mapped name.
// Throws Error(kUnmappedPlaceholder) for a placeholder without an entry.
std::string Relexicalize(std::string_view text,
                         const std::map<std::string, std::string> &names);

// Reads a serialized atom back into names, predicates and descriptions
// (entity ids are left empty). Returns nullopt when the text does not follow
// the marker grammar.
std::optional<AtomicSubgraph> ParseSerialized(std::string_view text);

}  // namespace sparql2q

#endif  // SPARQL2Q_SERIALIZER_H_
