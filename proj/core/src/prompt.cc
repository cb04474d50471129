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

#include "sparql2q/prompt.h"

#include <algorithm>
#include <utility>

#include "sparql2q/error.h"
#include "sparql2q/kg.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

constexpr std::string_view kAnnotationOpen = " (the ?";

bool IsVariableChar(char c) {
  return IsWordByte(static_cast<unsigned char>(c)) && static_cast<unsigned char>(c) < 0x80;
}

// Length of the annotation starting at `at`, or 0 when there is none.
size_t AnnotationLengthAt(std::string_view text, size_t at) {
  if (text.substr(at, kAnnotationOpen.size()) != kAnnotationOpen) return 0;
  size_t j = at + kAnnotationOpen.size();
  size_t start = j;
  while (j < text.size() && IsVariableChar(text[j])) ++j;
  if (j == start || j >= text.size() || text[j] != ')') return 0;
  return j + 1 - at;
}

// Byte ranges covered by existing annotations.
std::vector<std::pair<size_t, size_t>> AnnotationSpans(std::string_view text) {
  std::vector<std::pair<size_t, size_t>> spans;
  for (size_t i = 0; i < text.size();) {
    size_t len = AnnotationLengthAt(text, i);
    if (len > 0) {
      spans.emplace_back(i, i + len);
      i += len;
    } else {
      ++i;
    }
  }
  return spans;
}

size_t FindOutsideAnnotations(std::string_view text, std::string_view name) {
  std::vector<std::pair<size_t, size_t>> spans = AnnotationSpans(text);
  for (size_t pos = FindWholeWord(text, name); pos != std::string_view::npos;
       pos = FindWholeWord(text, name, pos + 1)) {
    bool inside = false;
    for (const auto &[b, e] : spans) {
      if (pos < e && pos + name.size() > b) inside = true;
    }
    if (!inside) return pos;
  }
  return std::string_view::npos;
}

std::string PropertyWords(std::string_view predicate) {
  std::vector<std::string_view> parts = Split(predicate, '.');
  return ReplaceAll(parts.back(), "_", " ");
}

std::string NameOf(const EntityRecord &e) {
  return e.name.empty() ? e.id : e.name;
}

}  // namespace

std::string AnnotationText(std::string_view variable) {
  return std::string(kAnnotationOpen) + std::string(variable) + ")";
}

PromptText Assemble(const InstantiatedGraph &graph,
                    const std::map<std::string, std::string> &descriptions) {
  PromptText out;
  std::vector<std::string> parts;
  for (const AtomicSubgraph &atom : graph.atoms) {
    auto it = descriptions.find(atom.id);
    if (it == descriptions.end()) {
      throw Error(ErrorCode::kMissingDescription,
                  "no description for atom " + atom.id);
    }
    out.segments.push_back({atom.id, it->second});
    parts.push_back(it->second);
  }
  out.text = Join(parts, " ");
  return out;
}

PromptText AnnotateVariables(const PromptText &prompt,
                             const InstantiatedGraph &graph,
                             std::vector<std::string> *warnings) {
  PromptText out = prompt;
  auto warn = [warnings](std::string message) {
    if (warnings) warnings->push_back(std::move(message));
  };
  // std::map keeps variables in name order.
  for (const auto &[variable, id] : graph.bindings) {
    auto entity = graph.entities.find(id);
    std::string name;
    if (entity != graph.entities.end()) name = entity->second.name;
    if (name.empty()) {
      warn("?" + variable + ": bound node " + id + " has no name");
      continue;
    }
    size_t pos = FindOutsideAnnotations(out.text, name);
    if (pos == std::string::npos) {
      warn("?" + variable + ": name \"" + name + "\" not found in prompt");
      continue;
    }
    // Skip annotations already attached to this name.
    size_t insert_at = pos + name.size();
    bool present = false;
    for (size_t len; (len = AnnotationLengthAt(out.text, insert_at)) > 0;
         insert_at += len) {
      if (out.text.compare(insert_at, len, AnnotationText(variable)) == 0) {
        present = true;
      }
    }
    if (present) continue;
    std::string annotation = AnnotationText(variable);
    out.text.insert(insert_at, annotation);
    for (Annotation &a : out.annotations) {
      if (a.offset >= insert_at) a.offset += annotation.size();
    }
    out.annotations.push_back({variable, id, insert_at});
  }
  std::sort(out.annotations.begin(), out.annotations.end(),
            [](const Annotation &a, const Annotation &b) {
              return a.offset < b.offset;
            });
  return out;
}

std::string StripAnnotations(std::string_view text) {
  std::string out;
  for (size_t i = 0; i < text.size();) {
    size_t len = AnnotationLengthAt(text, i);
    if (len > 0) {
      i += len;
    } else {
      out += text[i++];
    }
  }
  return out;
}

std::string FallbackVerbalize(const AtomicSubgraph &atom) {
  if (atom.single) {
    return NameOf(atom.single->subject) + " " +
           PropertyWords(atom.single->predicate) + " " +
           NameOf(atom.single->object) + " .";
  }
  std::vector<std::string> phrases;
  if (atom.cvt) {
    for (const CvtEdge &e : atom.cvt->inward) {
      phrases.push_back(PropertyWords(e.predicate) + " of " + NameOf(e.entity));
    }
    for (const CvtEdge &e : atom.cvt->outward) {
      phrases.push_back(PropertyWords(e.predicate) + " " + NameOf(e.entity));
    }
  }
  return Join(phrases, "; ") + " .";
}

}  // namespace sparql2q
