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

#ifndef SPARQL2Q_PIPELINE_H_
#define SPARQL2Q_PIPELINE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparql2q/corpus.h"
#include "sparql2q/generate.h"
#include "sparql2q/kg.h"
#include "sparql2q/prompt.h"
#include "sparql2q/sampler.h"
#include "sparql2q/serializer.h"

namespace sparql2q {

enum class DatasetSplit { kTrain, kValid, kTest };

std::string_view SplitName(DatasetSplit split);
std::optional<DatasetSplit> ParseSplit(std::string_view name);

struct DatasetItem {
  std::string id;
  std::string sparql;
  std::string question;  // empty for augmented items awaiting generation
  DatasetSplit split = DatasetSplit::kTrain;

  bool operator==(const DatasetItem &) const = default;
};

// Record stream with fields id, sparql, question, split.
std::vector<DatasetItem> ReadDataset(std::istream &in, std::string_view source);
std::vector<DatasetItem> LoadDataset(const std::string &path);
std::string ItemToJson(const DatasetItem &item);

struct Provenance {
  std::string item_id;
  uint64_t seed = 0;
  SerializationStrategy strategy = SerializationStrategy::kEntityName;
  std::string separator = " ";

  bool operator==(const Provenance &) const = default;
};

// Question-generation sample: lowercased "SPARQL prompt" input and the
// lowercased question as target.
struct TrainingSample {
  std::string input;
  std::string target;
  Provenance provenance;

  bool operator==(const TrainingSample &) const = default;
};

std::string SampleToJson(const TrainingSample &sample);

struct PromptOptions {
  SerializationStrategy strategy = SerializationStrategy::kEntityName;
  SerializerOptions serializer;
  SamplerOptions sampler;
  GenerationConfig prompter = GenerationConfig::ForRole(GenerationRole::kPrompter);
};

struct BuiltPrompt {
  PromptText prompt;
  InstantiatedGraph graph;
  size_t fallbacks = 0;  // atoms described by FallbackVerbalize
  std::vector<std::string> warnings;
};

// Instantiate, decompose, serialize, generate one description per atom
// (relexicalized in type-placeholder mode), assemble and annotate. Atoms
// whose generation fails are verbalized by the fallback template.
// NotInstantiable and TransportError propagate.
BuiltPrompt BuildPrompt(const DatasetItem &item, const KnowledgeGraph &kg,
                        const Generator &prompter, const PromptOptions &options,
                        uint64_t seed);

// Name-substituted SPARQL without prefixes, a single space, then the prompt,
// all lowercased.
std::string QgInput(const SparqlQuery &query, const KnowledgeGraph &kg,
                    const PromptText &prompt);

struct StageReport {
  size_t items = 0;
  size_t produced = 0;
  size_t skipped = 0;
  size_t fallbacks = 0;
  std::map<std::string, size_t> skip_reasons;  // error class -> count

  std::string ToText(std::string_view stage, std::string_view unit) const;
};

struct PromptRecord {
  std::string id;
  PromptText prompt;
};

// Prompts for every item; per-item seeds derive from (seed, item id), so the
// output is independent of `jobs`.
std::vector<PromptRecord> BuildPrompts(const std::vector<DatasetItem> &items,
                                       const KnowledgeGraph &kg,
                                       const Generator &prompter,
                                       const PromptOptions &options,
                                       uint64_t seed, size_t jobs,
                                       StageReport *report = nullptr);
std::string PromptRecordToJson(const PromptRecord &record);

// One sample per item, in input order. Items that fail to parse or
// instantiate, or that have no question, are skipped and counted.
std::vector<TrainingSample> BuildQgSamples(const std::vector<DatasetItem> &items,
                                           const KnowledgeGraph &kg,
                                           const Generator &prompter,
                                           const PromptOptions &options,
                                           uint64_t seed, size_t jobs,
                                           StageReport *report = nullptr);

// ceil(n * proportion) for 0 < proportion <= 1, at least 1 when n > 0.
size_t SubsampleCount(size_t n, double proportion);

// Seeded sample without replacement, returned in original order.
std::vector<DatasetItem> Subsample(const std::vector<DatasetItem> &items,
                                   double proportion, uint64_t seed);

struct AugmentOptions {
  size_t k = 10;
  PromptOptions prompt;
  GenerationConfig qg = GenerationConfig::ForRole(GenerationRole::kQuestion);
};

// Up to k copies of `item` whose topic entities are replaced by another
// tuple from the abstracted query's answers; each copy evaluates non-empty
// and gets a question from the QG backend over its own prompt. Ids are
// "<id>#aug<i>". Throws Error(kNothingToAbstract) without topic entities.
std::vector<DatasetItem> Augment(const DatasetItem &item,
                                 const KnowledgeGraph &kg,
                                 const Generator &prompter,
                                 const Generator &qg,
                                 const AugmentOptions &options, uint64_t seed);

std::vector<DatasetItem> AugmentAll(const std::vector<DatasetItem> &items,
                                    const KnowledgeGraph &kg,
                                    const Generator &prompter,
                                    const Generator &qg,
                                    const AugmentOptions &options,
                                    uint64_t seed, size_t jobs,
                                    StageReport *report = nullptr);

// Training-stage sampling over every catalogued predicate, in catalog
// order, with per-predicate seeds.
std::vector<AtomicSubgraph> SampleAllPredicates(const KnowledgeGraph &kg,
                                                size_t limit, uint64_t seed);

}  // namespace sparql2q

#endif  // SPARQL2Q_PIPELINE_H_
