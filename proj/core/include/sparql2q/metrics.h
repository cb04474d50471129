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

#ifndef SPARQL2Q_METRICS_H_
#define SPARQL2Q_METRICS_H_

#include <string>
#include <string_view>
#include <vector>

namespace sparql2q {

using TokenSeq = std::vector<std::string>;

// Scoring tokenizer: lowercase, then word runs and single punctuation marks.
TokenSeq MetricTokens(std::string_view text);

// Porter (1980) suffix-stripping stemmer for lowercase ASCII words. Other
// words are returned unchanged.
std::string PorterStem(std::string_view word);

// Corpus BLEU-4 on a 0-100 scale: clipped n-gram precisions for n = 1..4,
// uniform weights, brevity penalty exp(1 - r/c) when c <= r. A zero match
// count for n >= 2 is smoothed to 1/(total + 1). Throws on an empty corpus
// or mismatched lengths.
double Bleu4(const std::vector<TokenSeq> &candidates,
             const std::vector<TokenSeq> &references);

// LCS-based F-measure of one pair, 0-1, with recall weight beta = 1.2.
double RougeLPair(const TokenSeq &candidate, const TokenSeq &reference);
// Mean of RougeLPair over the corpus, 0-100.
double RougeL(const std::vector<TokenSeq> &candidates,
              const std::vector<TokenSeq> &references);

// METEOR restricted to exact and Porter-stem alignment: Fmean =
// 10PR/(R + 9P), penalty 0.5 (chunks/matches)^3, 0-1.
double MeteorPair(const TokenSeq &candidate, const TokenSeq &reference);
// Mean of MeteorPair over the corpus, 0-100.
double MeteorLite(const std::vector<TokenSeq> &candidates,
                  const std::vector<TokenSeq> &references);

struct ItemScore {
  std::string id;
  double bleu4 = 0;  // sentence-level, same smoothing as the corpus score
  double meteor = 0;
  double rouge_l = 0;
};

struct MetricReport {
  double bleu4 = 0;
  double meteor = 0;
  double rouge_l = 0;
  size_t candidates = 0;
  size_t references = 0;
  std::vector<ItemScore> items;

  std::string ToText() const;
  std::string ToJson() const;
};

// Scores aligned candidate/reference strings. `ids` may be empty.
MetricReport ScoreCorpus(const std::vector<std::string> &ids,
                         const std::vector<std::string> &candidates,
                         const std::vector<std::string> &references);

std::string ItemScoreToJson(const ItemScore &item);

}  // namespace sparql2q

#endif  // SPARQL2Q_METRICS_H_
