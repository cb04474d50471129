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

#ifndef SPARQL2Q_PROMPT_H_
#define SPARQL2Q_PROMPT_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sparql2q/sampler.h"

namespace sparql2q {

struct PromptSegment {
  std::string atom_id;
  std::string description;

  bool operator==(const PromptSegment &) const = default;
};

struct Annotation {
  std::string variable;
  std::string entity_id;
  // Byte offset of the inserted " (the ?v)" text, which is also the end of
  // the annotated name.
  size_t offset = 0;

  bool operator==(const Annotation &) const = default;
};

// Natural-language rephrasing of an instantiated query graph.
struct PromptText {
  std::string text;
  std::vector<PromptSegment> segments;
  std::vector<Annotation> annotations;

  bool operator==(const PromptText &) const = default;
};

// " (the ?v)"
std::string AnnotationText(std::string_view variable);

// Joins per-atom descriptions (keyed by atom id) in decomposition order with
// single spaces. Throws Error(kMissingDescription) for an atom without one.
PromptText Assemble(const InstantiatedGraph &graph,
                    const std::map<std::string, std::string> &descriptions);

// Inserts " (the ?v)" after the first whole-word occurrence of each bound
// entity's name, variables in name order. Variables whose name is absent
// from the text are skipped and reported through `warnings`. Idempotent.
PromptText AnnotateVariables(const PromptText &prompt,
                             const InstantiatedGraph &graph,
                             std::vector<std::string> *warnings = nullptr);

// Removes every " (the ?v)" annotation.
std::string StripAnnotations(std::string_view text);

// Deterministic description of an atom used when no generator output is
// available.
std::string FallbackVerbalize(const AtomicSubgraph &atom);

// Record with fields text, annotations, segments.
std::string PromptToJson(const PromptText &prompt);

}  // namespace sparql2q

#endif  // SPARQL2Q_PROMPT_H_
