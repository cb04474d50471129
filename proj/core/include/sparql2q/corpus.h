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

#ifndef SPARQL2Q_CORPUS_H_
#define SPARQL2Q_CORPUS_H_

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sparql2q/sampler.h"
#include "sparql2q/serializer.h"

namespace sparql2q {

struct Sentence {
  // Byte span inside the paragraph. Consecutive sentences tile the
  // paragraph, so trailing whitespace belongs to the preceding sentence.
  size_t begin = 0;
  size_t end = 0;
  std::vector<std::string> tokens;  // lowercased
};

struct Paragraph {
  std::string text;
  std::vector<Sentence> sentences;

  std::string_view SentenceText(size_t i) const;
};

struct Document {
  std::string title;
  std::vector<Paragraph> paragraphs;
};

// Sentence boundaries: '.', '!' or '?' followed by whitespace and an
// uppercase ASCII letter. Returns the start offset of every sentence.
std::vector<size_t> SentenceStarts(std::string_view paragraph);

Document MakeDocument(std::string title,
                      const std::vector<std::string> &paragraphs);

struct SentenceRef {
  uint32_t document = 0;
  uint32_t paragraph = 0;
  uint32_t sentence = 0;

  auto operator<=>(const SentenceRef &) const = default;
};

struct Posting {
  SentenceRef ref;
  uint32_t position = 0;  // token index inside the sentence

  auto operator<=>(const Posting &) const = default;
};

// Inverted index over lowercased tokens with positional postings. Built
// once, then read-only.
class CorpusIndex {
 public:
  // Documents are tokenized by up to `jobs` threads; the postings are merged
  // in document order, so the index does not depend on `jobs`.
  static CorpusIndex Build(std::vector<Document> documents, size_t jobs = 1);

  const std::vector<Document> &documents() const { return documents_; }
  size_t sentence_count() const { return sentence_count_; }

  const Paragraph &paragraph(const SentenceRef &ref) const;
  const Sentence &sentence(const SentenceRef &ref) const;
  std::string_view SentenceText(const SentenceRef &ref) const;

  // Whole-token, case-insensitive occurrences of a (multi-token) name, in
  // corpus order.
  std::vector<Posting> Lookup(std::string_view name) const;

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  size_t sentence_count_ = 0;
};

std::vector<Document> ReadCorpus(std::istream &in, std::string_view source);
CorpusIndex IndexCorpus(const std::string &path, size_t jobs = 1);

enum class MatchUnit { kSentence, kParagraph };

struct DescriptionMatch {
  std::string atom_id;
  std::string text;
  MatchUnit unit = MatchUnit::kSentence;
  SentenceRef location;  // sentence index is 0 for paragraph matches
  std::map<std::string, std::vector<Posting>> hits;  // name -> occurrences
};

// One match per sentence that contains both names.
std::vector<DescriptionMatch> MatchSingle(const CorpusIndex &index,
                                          std::string_view subject,
                                          std::string_view object);

// One match per paragraph containing every name. The matched text keeps
// only sentences mentioning at least one of the names.
std::vector<DescriptionMatch> MatchCvt(const CorpusIndex &index,
                                       const std::vector<std::string> &names);

// Distinct names an atom must co-occur with: the endpoints of a single
// triple, or the named non-literal endpoints of a CVT star.
std::vector<std::string> MatchNames(const AtomicSubgraph &atom);

struct CollectOptions {
  size_t max_matches = 3;
};

// Matches for one atom, shortest text first (ties in corpus order), capped
// at `max_matches`.
std::vector<DescriptionMatch> CollectDescriptions(
    const CorpusIndex &index, const AtomicSubgraph &atom,
    const CollectOptions &options = {});

struct TrainingPair {
  std::string input;
  std::string target;
  std::string kind;  // "single" or "cvt"
  std::string atom_id;

  bool operator==(const TrainingPair &) const = default;
};

struct PairOptions {
  SerializationStrategy strategy = SerializationStrategy::kEntityName;
  uint64_t seed = 0;
  // Single and CVT pairs are spread evenly over windows of this size.
  size_t window = 64;
  CollectOptions collect;
  SerializerOptions serializer;
};

// Auto-prompter training data: (serialized atom, best description) for every
// atom with at least one match; unmatched atoms are dropped.
std::vector<TrainingPair> BuildTrainingPairs(
    const std::vector<AtomicSubgraph> &atoms, const CorpusIndex &index,
    const PairOptions &options);

// Seeded interleaving of the two kinds: each list is shuffled, merged in
// proportion, then shuffled inside each window.
std::vector<TrainingPair> InterleaveByKind(std::vector<TrainingPair> singles,
                                           std::vector<TrainingPair> cvts,
                                           size_t window, uint64_t seed);

std::string PairToJson(const TrainingPair &pair);
std::string MatchToJson(const DescriptionMatch &match);

}  // namespace sparql2q

#endif  // SPARQL2Q_CORPUS_H_
