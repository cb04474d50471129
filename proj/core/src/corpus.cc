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

#include "sparql2q/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <thread>

#include "json.hpp"
#include "sparql2q/error.h"
#include "sparql2q/rng.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

bool IsTerminal(char c) { return c == '.' || c == '!' || c == '?'; }
bool IsUpper(char c) { return c >= 'A' && c <= 'Z'; }

void TokenizeDocument(Document &doc) {
  for (Paragraph &p : doc.paragraphs) {
    for (Sentence &s : p.sentences) {
      s.tokens = TokenizeLower(std::string_view(p.text).substr(s.begin, s.end - s.begin));
    }
  }
}

bool TokensAt(const std::vector<std::string> &tokens, size_t at,
              const std::vector<std::string> &needle) {
  if (at + needle.size() > tokens.size()) return false;
  for (size_t i = 0; i < needle.size(); ++i) {
    if (tokens[at + i] != needle[i]) return false;
  }
  return true;
}

}  // namespace

std::string_view Paragraph::SentenceText(size_t i) const {
  const Sentence &s = sentences.at(i);
  return Trim(std::string_view(text).substr(s.begin, s.end - s.begin));
}

std::vector<size_t> SentenceStarts(std::string_view paragraph) {
  std::vector<size_t> starts;
  if (Trim(paragraph).empty()) return starts;
  starts.push_back(0);
  for (size_t i = 0; i + 1 < paragraph.size(); ++i) {
    if (!IsTerminal(paragraph[i]) || !IsSpace(paragraph[i + 1])) continue;
    size_t j = i + 1;
    while (j < paragraph.size() && IsSpace(paragraph[j])) ++j;
    if (j < paragraph.size() && IsUpper(paragraph[j])) starts.push_back(j);
  }
  return starts;
}

Document MakeDocument(std::string title,
                      const std::vector<std::string> &paragraphs) {
  Document doc;
  doc.title = std::move(title);
  for (const std::string &text : paragraphs) {
    Paragraph p;
    p.text = text;
    std::vector<size_t> starts = SentenceStarts(text);
    for (size_t i = 0; i < starts.size(); ++i) {
      size_t end = i + 1 < starts.size() ? starts[i + 1] : text.size();
      p.sentences.push_back({starts[i], end, {}});
    }
    doc.paragraphs.push_back(std::move(p));
  }
  return doc;
}

CorpusIndex CorpusIndex::Build(std::vector<Document> documents, size_t jobs) {
  CorpusIndex index;
  index.documents_ = std::move(documents);
  std::vector<Document> &docs = index.documents_;
  jobs = std::max<size_t>(1, std::min(jobs, docs.size()));
  if (jobs <= 1) {
    for (Document &d : docs) TokenizeDocument(d);
  } else {
    std::vector<std::thread> workers;
    for (size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&docs, w, jobs] {
        for (size_t i = w; i < docs.size(); i += jobs) TokenizeDocument(docs[i]);
      });
    }
    for (std::thread &t : workers) t.join();
  }
  for (uint32_t d = 0; d < docs.size(); ++d) {
    const Document &doc = docs[d];
    for (uint32_t p = 0; p < doc.paragraphs.size(); ++p) {
      const Paragraph &para = doc.paragraphs[p];
      for (uint32_t s = 0; s < para.sentences.size(); ++s) {
        ++index.sentence_count_;
        const auto &tokens = para.sentences[s].tokens;
        for (uint32_t pos = 0; pos < tokens.size(); ++pos) {
          index.postings_[tokens[pos]].push_back({{d, p, s}, pos});
        }
      }
    }
  }
  return index;
}

const Paragraph &CorpusIndex::paragraph(const SentenceRef &ref) const {
  return documents_.at(ref.document).paragraphs.at(ref.paragraph);
}

const Sentence &CorpusIndex::sentence(const SentenceRef &ref) const {
  return paragraph(ref).sentences.at(ref.sentence);
}

std::string_view CorpusIndex::SentenceText(const SentenceRef &ref) const {
  return paragraph(ref).SentenceText(ref.sentence);
}

std::vector<Posting> CorpusIndex::Lookup(std::string_view name) const {
  std::vector<std::string> needle = TokenizeLower(name);
  std::vector<Posting> out;
  if (needle.empty()) return out;
  auto it = postings_.find(needle.front());
  if (it == postings_.end()) return out;
  for (const Posting &p : it->second) {
    if (TokensAt(sentence(p.ref).tokens, p.position, needle)) out.push_back(p);
  }
  return out;
}

std::vector<Document> ReadCorpus(std::istream &in, std::string_view source) {
  std::vector<Document> docs;
  std::string line;
  size_t record = 0;
  while (std::getline(in, line)) {
    ++record;
    if (Trim(line).empty()) continue;
    std::string title;
    std::vector<std::string> paragraphs;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      title = j.at("title").get<std::string>();
      paragraphs = j.at("paragraphs").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kMalformedInput,
                  std::string(source) + ": record " + std::to_string(record) +
                      ": " + e.what());
    }
    if (Trim(title).empty()) {
      throw Error(ErrorCode::kMalformedInput,
                  std::string(source) + ": record " + std::to_string(record) +
                      ": empty title");
    }
    docs.push_back(MakeDocument(std::move(title), paragraphs));
  }
  return docs;
}

CorpusIndex IndexCorpus(const std::string &path, size_t jobs) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  return CorpusIndex::Build(ReadCorpus(in, path), jobs);
}

std::vector<DescriptionMatch> MatchSingle(const CorpusIndex &index,
                                          std::string_view subject,
                                          std::string_view object) {
  std::vector<DescriptionMatch> out;
  std::vector<Posting> subject_hits = index.Lookup(subject);
  std::vector<Posting> object_hits = index.Lookup(object);
  std::map<SentenceRef, std::vector<Posting>> by_sentence_s, by_sentence_o;
  for (const Posting &p : subject_hits) by_sentence_s[p.ref].push_back(p);
  for (const Posting &p : object_hits) by_sentence_o[p.ref].push_back(p);
  for (const auto &[ref, hits] : by_sentence_s) {
    auto other = by_sentence_o.find(ref);
    if (other == by_sentence_o.end()) continue;
    DescriptionMatch m;
    m.unit = MatchUnit::kSentence;
    m.location = ref;
    m.text = std::string(index.SentenceText(ref));
    m.hits[std::string(subject)] = hits;
    m.hits[std::string(object)] = other->second;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<DescriptionMatch> MatchCvt(const CorpusIndex &index,
                                       const std::vector<std::string> &names) {
  if (names.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "CVT matching needs at least two entity names");
  }
  using ParagraphKey = std::pair<uint32_t, uint32_t>;
  std::map<ParagraphKey, std::map<std::string, std::vector<Posting>>> found;
  for (size_t n = 0; n < names.size(); ++n) {
    for (const Posting &p : index.Lookup(names[n])) {
      ParagraphKey key{p.ref.document, p.ref.paragraph};
      // Only paragraphs that already hold all previous names stay relevant.
      if (n > 0 && !found.count(key)) continue;
      found[key][names[n]].push_back(p);
    }
    for (auto it = found.begin(); it != found.end();) {
      it = it->second.count(names[n]) ? std::next(it) : found.erase(it);
    }
  }
  std::vector<DescriptionMatch> out;
  for (auto &[key, hits] : found) {
    std::set<uint32_t> kept;
    for (const auto &[name, postings] : hits) {
      for (const Posting &p : postings) kept.insert(p.ref.sentence);
    }
    DescriptionMatch m;
    m.unit = MatchUnit::kParagraph;
    m.location = {key.first, key.second, 0};
    const Paragraph &para = index.paragraph(m.location);
    std::vector<std::string> parts;
    for (uint32_t s : kept) parts.emplace_back(para.SentenceText(s));
    m.text = Join(parts, " ");
    m.hits = std::move(hits);
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<std::string> MatchNames(const AtomicSubgraph &atom) {
  std::vector<std::string> names;
  auto add = [&names](const EntityRecord &e) {
    if (e.name.empty() || IsLiteralId(e.id)) return;
    if (std::find(names.begin(), names.end(), e.name) == names.end()) {
      names.push_back(e.name);
    }
  };
  if (atom.single) {
    // Literal objects still count for single triples.
    for (const EntityRecord *e : {&atom.single->subject, &atom.single->object}) {
      if (!e->name.empty() &&
          std::find(names.begin(), names.end(), e->name) == names.end()) {
        names.push_back(e->name);
      }
    }
  }
  if (atom.cvt) {
    for (const CvtEdge &e : atom.cvt->inward) add(e.entity);
    for (const CvtEdge &e : atom.cvt->outward) add(e.entity);
  }
  return names;
}

std::vector<DescriptionMatch> CollectDescriptions(const CorpusIndex &index,
                                                  const AtomicSubgraph &atom,
                                                  const CollectOptions &options) {
  std::vector<std::string> names = MatchNames(atom);
  std::vector<DescriptionMatch> matches;
  if (atom.single) {
    if (atom.single->subject.name.empty() || atom.single->object.name.empty()) {
      return matches;
    }
    matches = MatchSingle(index, atom.single->subject.name,
                          atom.single->object.name);
  } else if (atom.cvt && names.size() >= 2) {
    matches = MatchCvt(index, names);
  }
  std::stable_sort(matches.begin(), matches.end(),
                   [](const DescriptionMatch &a, const DescriptionMatch &b) {
                     return a.text.size() < b.text.size();
                   });
  if (matches.size() > options.max_matches) matches.resize(options.max_matches);
  for (DescriptionMatch &m : matches) m.atom_id = atom.id;
  return matches;
}

std::vector<TrainingPair> InterleaveByKind(std::vector<TrainingPair> singles,
                                           std::vector<TrainingPair> cvts,
                                           size_t window, uint64_t seed) {
  Rng rng(seed);
  rng.Shuffle(singles);
  rng.Shuffle(cvts);
  const size_t ns = singles.size();
  const size_t nc = cvts.size();
  std::vector<TrainingPair> merged;
  merged.reserve(ns + nc);
  size_t taken_s = 0, taken_c = 0;
  while (taken_s < ns || taken_c < nc) {
    // Take the kind that is furthest behind its share.
    bool take_single = taken_c >= nc ||
                       (taken_s < ns && taken_s * nc <= taken_c * ns);
    if (take_single) {
      merged.push_back(std::move(singles[taken_s++]));
    } else {
      merged.push_back(std::move(cvts[taken_c++]));
    }
  }
  window = std::max<size_t>(window, 1);
  for (size_t start = 0; start < merged.size(); start += window) {
    size_t end = std::min(merged.size(), start + window);
    for (size_t i = end - start; i > 1; --i) {
      size_t j = rng.Uniform(i);
      std::swap(merged[start + i - 1], merged[start + j]);
    }
  }
  return merged;
}

std::vector<TrainingPair> BuildTrainingPairs(
    const std::vector<AtomicSubgraph> &atoms, const CorpusIndex &index,
    const PairOptions &options) {
  std::vector<TrainingPair> singles, cvts;
  for (const AtomicSubgraph &atom : atoms) {
    std::vector<DescriptionMatch> matches =
        CollectDescriptions(index, atom, options.collect);
    if (matches.empty()) continue;
    TrainingPair pair;
    pair.input = Serialize(atom, options.strategy, options.serializer).text;
    pair.target = matches.front().text;
    if (options.strategy == SerializationStrategy::kTypePlaceholder) {
      std::vector<std::pair<std::string, std::string>> entities;
      for (const Placeholder &p : AssignPlaceholders(atom)) {
        entities.emplace_back(p.name, p.token);
      }
      pair.target = Delexicalize(pair.target, entities);
    }
    pair.atom_id = atom.id;
    if (atom.kind == PredicateKind::kCvt) {
      pair.kind = "cvt";
      cvts.push_back(std::move(pair));
    } else {
      pair.kind = "single";
      singles.push_back(std::move(pair));
    }
  }
  return InterleaveByKind(std::move(singles), std::move(cvts), options.window,
                          options.seed);
}

}  // namespace sparql2q
