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

#include "sparql2q/serializer.h"

#include <algorithm>
#include <set>

#include "sparql2q/error.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

std::string TruncateWords(std::string_view text, size_t max_tokens) {
  std::vector<std::string_view> words = SplitWhitespace(text);
  if (words.size() > max_tokens) words.resize(max_tokens);
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out.append(words[i]);
  }
  return out;
}

std::string DisplayName(const EntityRecord &e) {
  return e.name.empty() ? e.id : e.name;
}

bool IsPlaceholderChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

bool IsMarker(std::string_view word) {
  return word == kHeadMarker || word == kDescriptionMarker ||
         word == kPredicateMarker || word == kTailMarker;
}

}  // namespace

std::string_view StrategyName(SerializationStrategy strategy) {
  return strategy == SerializationStrategy::kEntityName ? "name" : "type";
}

std::optional<SerializationStrategy> ParseStrategy(std::string_view name) {
  if (name == "name") return SerializationStrategy::kEntityName;
  if (name == "type") return SerializationStrategy::kTypePlaceholder;
  return std::nullopt;
}

std::string SubjectTypeToken(std::string_view predicate) {
  std::vector<std::string_view> parts = Split(predicate, '.');
  std::string_view segment =
      parts.size() >= 2 ? parts[parts.size() - 2] : parts.back();
  return "[" + ToLower(segment) + "]";
}

std::string ObjectTypeToken(std::string_view predicate) {
  std::vector<std::string_view> parts = Split(predicate, '.');
  return "[" + ToLower(parts.back()) + "]";
}

std::vector<Placeholder> AssignPlaceholders(const AtomicSubgraph &atom) {
  std::vector<Placeholder> out;
  std::map<std::string, size_t> by_id;
  std::set<std::string> used;
  auto assign = [&](const EntityRecord &e, const std::string &base) {
    if (by_id.count(e.id)) return;
    std::string token = base;
    for (int n = 2; used.count(token); ++n) {
      token = base.substr(0, base.size() - 1) + "_" + std::to_string(n) + "]";
    }
    used.insert(token);
    by_id[e.id] = out.size();
    out.push_back({e.id, DisplayName(e), token});
  };
  if (atom.single) {
    assign(atom.single->subject, SubjectTypeToken(atom.single->predicate));
    assign(atom.single->object, ObjectTypeToken(atom.single->predicate));
  }
  if (atom.cvt) {
    for (const CvtEdge &e : atom.cvt->inward) {
      assign(e.entity, SubjectTypeToken(e.predicate));
    }
    for (const CvtEdge &e : atom.cvt->outward) {
      assign(e.entity, ObjectTypeToken(e.predicate));
    }
  }
  return out;
}

SerializedGraph Serialize(const AtomicSubgraph &atom,
                          SerializationStrategy strategy,
                          const SerializerOptions &options) {
  const bool typed = strategy == SerializationStrategy::kTypePlaceholder;
  std::map<std::string, std::string> token_of;
  SerializedGraph out;
  if (typed) {
    for (const Placeholder &p : AssignPlaceholders(atom)) {
      token_of[p.entity_id] = p.token;
      out.placeholder_map[p.token] = p.entity_id;
    }
  }
  // Surface form and description segment of one endpoint.
  auto render = [&](const EntityRecord &e) -> std::pair<std::string, std::string> {
    std::string name = DisplayName(e);
    std::string shown = typed ? token_of.at(e.id) : name;
    std::string description =
        TruncateWords(e.description, options.max_description_tokens);
    if (description.empty()) return {shown, shown};
    if (typed) description = Delexicalize(description, {{name, shown}});
    return {shown, description};
  };

  std::vector<std::string> words;
  if (atom.single) {
    auto [head, head_desc] = render(atom.single->subject);
    auto [tail, tail_desc] = render(atom.single->object);
    out.text = std::string(kHeadMarker) + " " + head + " " +
               std::string(kDescriptionMarker) + " " + head_desc + " " +
               std::string(kPredicateMarker) + " " + atom.single->predicate +
               " " + std::string(kTailMarker) + " " + tail + " " +
               std::string(kDescriptionMarker) + " " + tail_desc;
    return out;
  }
  if (atom.cvt) {
    auto edges = [&](std::vector<CvtEdge> list, bool inward) {
      std::stable_sort(list.begin(), list.end(),
                       [](const CvtEdge &a, const CvtEdge &b) {
                         if (a.predicate != b.predicate) {
                           return a.predicate < b.predicate;
                         }
                         return a.entity.id < b.entity.id;
                       });
      for (const CvtEdge &e : list) {
        auto [name, desc] = render(e.entity);
        words.push_back(std::string(kPredicateMarker) + " " +
                        (inward ? std::string(kInwardPrefix) : "") +
                        e.predicate + " " + std::string(kTailMarker) + " " +
                        name + " " + std::string(kDescriptionMarker) + " " +
                        desc);
      }
    };
    edges(atom.cvt->inward, true);
    edges(atom.cvt->outward, false);
    out.text = Join(words, " ");
  }
  return out;
}

std::string Delexicalize(
    std::string_view text,
    const std::vector<std::pair<std::string, std::string>> &entities) {
  std::vector<std::pair<std::string, std::string>> sorted;
  for (const auto &e : entities) {
    if (!e.first.empty()) sorted.push_back(e);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) {
    return a.first.size() > b.first.size();
  });
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    bool replaced = false;
    for (const auto &[name, token] : sorted) {
      if (MatchesWholeWordAt(text, name, i)) {
        out += token;
        i += name.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out += text[i++];
  }
  return out;
}

std::string Relexicalize(std::string_view text,
                         const std::map<std::string, std::string> &names) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '[') {
      size_t j = i + 1;
      while (j < text.size() && IsPlaceholderChar(text[j])) ++j;
      if (j < text.size() && text[j] == ']' && j > i + 1) {
        std::string token(text.substr(i, j - i + 1));
        auto it = names.find(token);
        if (it == names.end()) {
          throw Error(ErrorCode::kUnmappedPlaceholder,
                      "no entity for placeholder " + token);
        }
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out += text[i++];
  }
  return out;
}

std::optional<AtomicSubgraph> ParseSerialized(std::string_view text) {
  std::vector<std::string_view> words = SplitWhitespace(text);
  size_t i = 0;
  // Collects words up to the next marker.
  auto field = [&]() {
    std::string out;
    while (i < words.size() && !IsMarker(words[i])) {
      if (!out.empty()) out += ' ';
      out.append(words[i++]);
    }
    return out;
  };
  auto expect = [&](std::string_view marker) {
    if (i < words.size() && words[i] == marker) {
      ++i;
      return true;
    }
    return false;
  };

  AtomicSubgraph atom;
  if (expect(kHeadMarker)) {
    SingleFact fact;
    fact.subject.name = field();
    if (!expect(kDescriptionMarker)) return std::nullopt;
    fact.subject.description = field();
    if (!expect(kPredicateMarker)) return std::nullopt;
    fact.predicate = field();
    if (!expect(kTailMarker)) return std::nullopt;
    fact.object.name = field();
    if (!expect(kDescriptionMarker)) return std::nullopt;
    fact.object.description = field();
    if (i != words.size() || fact.predicate.empty()) return std::nullopt;
    atom.kind = PredicateKind::kSingle;
    atom.single = std::move(fact);
    return atom;
  }
  CvtStar star;
  while (i < words.size()) {
    if (!expect(kPredicateMarker)) return std::nullopt;
    CvtEdge edge;
    edge.predicate = field();
    if (!expect(kTailMarker)) return std::nullopt;
    edge.entity.name = field();
    if (!expect(kDescriptionMarker)) return std::nullopt;
    edge.entity.description = field();
    bool inward = edge.predicate.rfind(kInwardPrefix, 0) == 0;
    if (inward) edge.predicate.erase(0, kInwardPrefix.size());
    if (edge.predicate.empty()) return std::nullopt;
    (inward ? star.inward : star.outward).push_back(std::move(edge));
  }
  if (star.inward.empty() && star.outward.empty()) return std::nullopt;
  atom.kind = PredicateKind::kCvt;
  atom.cvt = std::move(star);
  return atom;
}

}  // namespace sparql2q
