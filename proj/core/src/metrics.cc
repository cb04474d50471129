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

#include "sparql2q/metrics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sparql2q/error.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

constexpr int kMaxOrder = 4;
constexpr double kRougeBeta = 1.2;
constexpr double kMeteorAlpha = 0.9;
constexpr double kMeteorBeta = 3.0;
constexpr double kMeteorGamma = 0.5;

void CheckCorpus(size_t candidates, size_t references) {
  if (candidates != references) {
    throw Error(ErrorCode::kInvalidArgument,
                std::to_string(candidates) + " candidates but " +
                    std::to_string(references) + " references");
  }
  if (candidates == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty corpus");
  }
}

using NgramCounts = std::map<std::vector<std::string>, size_t>;

NgramCounts Ngrams(const TokenSeq &tokens, int n) {
  NgramCounts counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return counts;
}

struct BleuStats {
  size_t matches[kMaxOrder] = {};
  size_t totals[kMaxOrder] = {};
  size_t candidate_length = 0;
  size_t reference_length = 0;

  void Add(const TokenSeq &candidate, const TokenSeq &reference) {
    candidate_length += candidate.size();
    reference_length += reference.size();
    for (int n = 1; n <= kMaxOrder; ++n) {
      NgramCounts cand = Ngrams(candidate, n);
      NgramCounts ref = Ngrams(reference, n);
      for (const auto &[gram, count] : cand) {
        totals[n - 1] += count;
        auto it = ref.find(gram);
        if (it != ref.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }

  double Score() const {
    if (candidate_length == 0 || matches[0] == 0) return 0.0;
    double log_sum = 0.0;
    for (int n = 0; n < kMaxOrder; ++n) {
      double m = static_cast<double>(matches[n]);
      double t = static_cast<double>(totals[n]);
      if (matches[n] == 0) {
        m += 1.0;
        t += 1.0;
      }
      log_sum += std::log(m / t);
    }
    double c = static_cast<double>(candidate_length);
    double r = static_cast<double>(reference_length);
    double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
    return 100.0 * bp * std::exp(log_sum / kMaxOrder);
  }
};

size_t LcsLength(const TokenSeq &a, const TokenSeq &b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Aligns candidate tokens to reference tokens in two stages (exact, then
// stem). Each candidate token prefers the reference position right after
// the previous alignment so that chunks stay long.
std::vector<std::pair<size_t, size_t>> MeteorAlign(const TokenSeq &candidate,
                                                   const TokenSeq &reference) {
  std::vector<long> ref_of(candidate.size(), -1);
  std::vector<bool> ref_used(reference.size(), false);
  auto stage = [&](const TokenSeq &cand, const TokenSeq &ref) {
    for (size_t i = 0; i < cand.size(); ++i) {
      if (ref_of[i] >= 0) continue;
      long chosen = -1;
      if (i > 0 && ref_of[i - 1] >= 0) {
        size_t next = static_cast<size_t>(ref_of[i - 1]) + 1;
        if (next < ref.size() && !ref_used[next] && ref[next] == cand[i]) {
          chosen = static_cast<long>(next);
        }
      }
      for (size_t j = 0; chosen < 0 && j < ref.size(); ++j) {
        if (!ref_used[j] && ref[j] == cand[i]) chosen = static_cast<long>(j);
      }
      if (chosen >= 0) {
        ref_of[i] = chosen;
        ref_used[chosen] = true;
      }
    }
  };
  stage(candidate, reference);
  TokenSeq cand_stems, ref_stems;
  for (const std::string &t : candidate) cand_stems.push_back(PorterStem(t));
  for (const std::string &t : reference) ref_stems.push_back(PorterStem(t));
  stage(cand_stems, ref_stems);
  std::vector<std::pair<size_t, size_t>> alignment;
  for (size_t i = 0; i < candidate.size(); ++i) {
    if (ref_of[i] >= 0) alignment.emplace_back(i, static_cast<size_t>(ref_of[i]));
  }
  return alignment;
}

std::string Fixed(double value, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << value;
  return out.str();
}

}  // namespace

TokenSeq MetricTokens(std::string_view text) { return TokenizeLower(text); }

double Bleu4(const std::vector<TokenSeq> &candidates,
             const std::vector<TokenSeq> &references) {
  CheckCorpus(candidates.size(), references.size());
  BleuStats stats;
  for (size_t i = 0; i < candidates.size(); ++i) {
    stats.Add(candidates[i], references[i]);
  }
  return stats.Score();
}

double RougeLPair(const TokenSeq &candidate, const TokenSeq &reference) {
  if (candidate.empty() && reference.empty()) return 1.0;
  size_t lcs = LcsLength(candidate, reference);
  if (lcs == 0) return 0.0;
  double p = static_cast<double>(lcs) / candidate.size();
  double r = static_cast<double>(lcs) / reference.size();
  double b2 = kRougeBeta * kRougeBeta;
  return (1 + b2) * p * r / (r + b2 * p);
}

double RougeL(const std::vector<TokenSeq> &candidates,
              const std::vector<TokenSeq> &references) {
  CheckCorpus(candidates.size(), references.size());
  double sum = 0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    sum += RougeLPair(candidates[i], references[i]);
  }
  return 100.0 * sum / candidates.size();
}

double MeteorPair(const TokenSeq &candidate, const TokenSeq &reference) {
  if (candidate.empty() && reference.empty()) return 1.0;
  std::vector<std::pair<size_t, size_t>> alignment =
      MeteorAlign(candidate, reference);
  const size_t matches = alignment.size();
  if (matches == 0) return 0.0;
  size_t chunks = 1;
  for (size_t k = 1; k < alignment.size(); ++k) {
    if (alignment[k].first != alignment[k - 1].first + 1 ||
        alignment[k].second != alignment[k - 1].second + 1) {
      ++chunks;
    }
  }
  double p = static_cast<double>(matches) / candidate.size();
  double r = static_cast<double>(matches) / reference.size();
  double fmean = p * r / (kMeteorAlpha * p + (1 - kMeteorAlpha) * r);
  bool perfect = chunks == 1 && matches == candidate.size() &&
                 matches == reference.size();
  double penalty =
      perfect ? 0.0
              : kMeteorGamma *
                    std::pow(static_cast<double>(chunks) / matches, kMeteorBeta);
  return fmean * (1 - penalty);
}

double MeteorLite(const std::vector<TokenSeq> &candidates,
                  const std::vector<TokenSeq> &references) {
  CheckCorpus(candidates.size(), references.size());
  double sum = 0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    sum += MeteorPair(candidates[i], references[i]);
  }
  return 100.0 * sum / candidates.size();
}

MetricReport ScoreCorpus(const std::vector<std::string> &ids,
                         const std::vector<std::string> &candidates,
                         const std::vector<std::string> &references) {
  CheckCorpus(candidates.size(), references.size());
  if (!ids.empty() && ids.size() != candidates.size()) {
    throw Error(ErrorCode::kInvalidArgument, "id count does not match corpus");
  }
  std::vector<TokenSeq> cand, ref;
  for (const std::string &s : candidates) cand.push_back(MetricTokens(s));
  for (const std::string &s : references) ref.push_back(MetricTokens(s));
  MetricReport report;
  report.candidates = candidates.size();
  report.references = references.size();
  report.bleu4 = Bleu4(cand, ref);
  report.meteor = MeteorLite(cand, ref);
  report.rouge_l = RougeL(cand, ref);
  for (size_t i = 0; i < cand.size(); ++i) {
    ItemScore item;
    item.id = ids.empty() ? std::to_string(i) : ids[i];
    item.bleu4 = Bleu4({cand[i]}, {ref[i]});
    item.meteor = 100.0 * MeteorPair(cand[i], ref[i]);
    item.rouge_l = 100.0 * RougeLPair(cand[i], ref[i]);
    report.items.push_back(std::move(item));
  }
  return report;
}

std::string MetricReport::ToText() const {
  std::ostringstream out;
  out << "candidates: " << candidates << '\n'
      << "references: " << references << '\n'
      << "bleu4: " << Fixed(bleu4, 4) << '\n'
      << "meteor_lite: " << Fixed(meteor, 4) << '\n'
      << "rouge_l: " << Fixed(rouge_l, 4) << '\n';
  return out.str();
}

std::string MetricReport::ToJson() const {
  nlohmann::json j = {{"bleu4", bleu4},
                      {"meteor", meteor},
                      {"rougeL", rouge_l},
                      {"candidates", candidates},
                      {"references", references}};
  return j.dump();
}

std::string ItemScoreToJson(const ItemScore &item) {
  nlohmann::json j = {{"id", item.id},
                      {"bleu4", item.bleu4},
                      {"meteor", item.meteor},
                      {"rougeL", item.rouge_l}};
  return j.dump();
}

}  // namespace sparql2q
