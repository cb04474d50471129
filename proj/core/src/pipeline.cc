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

#include "sparql2q/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sparql2q/error.h"
#include "sparql2q/log.h"
#include "sparql2q/rng.h"
#include "sparql2q/sparql.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

using nlohmann::json;

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// in index order is rethrown after all workers finish.
template <typename Fn>
void ParallelFor(size_t n, size_t jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
        next.store(n);
      }
    }
  };
  jobs = std::max<size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread &t : pool) t.join();
  }
  for (const std::exception_ptr &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Failures that abort a whole stage rather than skipping one item.
bool IsFatal(const Error &e) {
  return e.code() == ErrorCode::kTransportError ||
         e.code() == ErrorCode::kInvariantViolation;
}

std::map<std::string, std::string> TokenNames(const AtomicSubgraph &atom) {
  std::map<std::string, std::string> names;
  for (const Placeholder &p : AssignPlaceholders(atom)) names[p.token] = p.name;
  return names;
}

// Answer tuples usable as replacement topic entities: every value is a
// named entity.
bool Substitutable(const std::vector<std::string> &row, const KnowledgeGraph &kg) {
  for (const std::string &id : row) {
    if (IsLiteralId(id)) return false;
    const EntityRecord *e = kg.FindEntity(id);
    if (!e || e->name.empty()) return false;
  }
  return true;
}

struct ItemOutcome {
  bool ok = false;
  std::string reason;
  size_t fallbacks = 0;
};

void Tally(const std::vector<ItemOutcome> &outcomes, StageReport *report) {
  if (!report) return;
  report->items += outcomes.size();
  for (const ItemOutcome &o : outcomes) {
    if (o.ok) {
      ++report->produced;
    } else {
      ++report->skipped;
      ++report->skip_reasons[o.reason];
    }
    report->fallbacks += o.fallbacks;
  }
}

}  // namespace

std::string_view SplitName(DatasetSplit split) {
  switch (split) {
    case DatasetSplit::kTrain: return "train";
    case DatasetSplit::kValid: return "valid";
    case DatasetSplit::kTest: return "test";
  }
  return "train";
}

std::optional<DatasetSplit> ParseSplit(std::string_view name) {
  if (name == "train") return DatasetSplit::kTrain;
  if (name == "valid" || name == "dev") return DatasetSplit::kValid;
  if (name == "test") return DatasetSplit::kTest;
  return std::nullopt;
}

std::vector<DatasetItem> ReadDataset(std::istream &in, std::string_view source) {
  std::vector<DatasetItem> items;
  std::set<std::string> ids;
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string &message) {
    throw Error(ErrorCode::kMalformedInput, std::string(source) + ":" +
                                                std::to_string(line_no) + ": " +
                                                message);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    DatasetItem item;
    std::string split = "train";
    try {
      json j = json::parse(line);
      item.id = j.at("id").get<std::string>();
      item.sparql = j.at("sparql").get<std::string>();
      item.question = j.value("question", "");
      split = j.value("split", "train");
    } catch (const json::exception &e) {
      fail(e.what());
    }
    std::optional<DatasetSplit> parsed = ParseSplit(split);
    if (!parsed) fail("unknown split '" + split + "'");
    if (item.id.empty()) fail("empty id");
    if (!ids.insert(item.id).second) fail("duplicate id " + item.id);
    item.split = *parsed;
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<DatasetItem> LoadDataset(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  return ReadDataset(in, path);
}

std::string ItemToJson(const DatasetItem &item) {
  json j = {{"id", item.id},
            {"sparql", item.sparql},
            {"question", item.question},
            {"split", std::string(SplitName(item.split))}};
  return j.dump();
}

std::string SampleToJson(const TrainingSample &sample) {
  json provenance = {{"item_id", sample.provenance.item_id},
                     {"seed", sample.provenance.seed},
                     {"strategy", std::string(StrategyName(sample.provenance.strategy))},
                     {"separator", sample.provenance.separator}};
  json j = {{"input", sample.input},
            {"target", sample.target},
            {"provenance", provenance}};
  return j.dump();
}

BuiltPrompt BuildPrompt(const DatasetItem &item, const KnowledgeGraph &kg,
                        const Generator &prompter, const PromptOptions &options,
                        uint64_t seed) {
  SparqlQuery query = ParseQuery(item.sparql);
  BuiltPrompt out;
  out.graph = Instantiate(query, kg, seed, options.sampler);
  std::vector<AtomicSubgraph> atoms = Decompose(out.graph);

  GenerationRequest request;
  request.config = options.prompter;
  for (const AtomicSubgraph &atom : atoms) {
    request.inputs.push_back(Serialize(atom, options.strategy, options.serializer).text);
  }
  std::vector<std::string> generated;
  try {
    generated = prompter.Generate(request).outputs;
  } catch (const Error &e) {
    if (IsFatal(e)) throw;
    out.warnings.push_back(item.id + ": prompter failed (" + e.what() +
                           "), using fallback descriptions");
  }

  std::map<std::string, std::string> descriptions;
  for (size_t i = 0; i < atoms.size(); ++i) {
    const AtomicSubgraph &atom = atoms[i];
    std::optional<std::string> text;
    if (i < generated.size()) {
      text = generated[i];
      if (options.strategy == SerializationStrategy::kTypePlaceholder) {
        try {
          text = Relexicalize(*text, TokenNames(atom));
        } catch (const Error &e) {
          out.warnings.push_back(item.id + ": atom " + atom.id + ": " + e.what());
          text.reset();
        }
      }
    }
    if (!text) {
      text = FallbackVerbalize(atom);
      ++out.fallbacks;
    }
    descriptions[atom.id] = *text;
  }
  out.prompt = Assemble(out.graph, descriptions);
  out.prompt = AnnotateVariables(out.prompt, out.graph, &out.warnings);
  for (const std::string &w : out.warnings) LogWarning(w);
  return out;
}

std::string QgInput(const SparqlQuery &query, const KnowledgeGraph &kg,
                    const PromptText &prompt) {
  SparqlQuery named = SubstituteNames(query, kg);
  named.prefixes.clear();
  return ToLower(PrintQuery(named) + " " + prompt.text);
}

std::string StageReport::ToText(std::string_view stage,
                                std::string_view unit) const {
  std::ostringstream out;
  out << "stage: " << stage << '\n'
      << "items: " << items << '\n'
      << produced << ' ' << unit << '\n'
      << "skipped: " << skipped << '\n';
  for (const auto &[reason, count] : skip_reasons) {
    out << "skipped." << reason << ": " << count << '\n';
  }
  out << "fallback descriptions: " << fallbacks << '\n';
  return out.str();
}

std::vector<PromptRecord> BuildPrompts(const std::vector<DatasetItem> &items,
                                       const KnowledgeGraph &kg,
                                       const Generator &prompter,
                                       const PromptOptions &options,
                                       uint64_t seed, size_t jobs,
                                       StageReport *report) {
  std::vector<std::optional<PromptRecord>> results(items.size());
  std::vector<ItemOutcome> outcomes(items.size());
  ParallelFor(items.size(), jobs, [&](size_t i) {
    try {
      BuiltPrompt built = BuildPrompt(items[i], kg, prompter, options,
                                      DeriveSeed(seed, items[i].id));
      results[i] = PromptRecord{items[i].id, std::move(built.prompt)};
      outcomes[i] = {true, "", built.fallbacks};
    } catch (const Error &e) {
      if (IsFatal(e)) throw;
      LogWarning(items[i].id + ": skipped: " + e.what());
      outcomes[i] = {false, std::string(ErrorCodeName(e.code())), 0};
    }
  });
  Tally(outcomes, report);
  std::vector<PromptRecord> out;
  for (auto &r : results) {
    if (r) out.push_back(std::move(*r));
  }
  return out;
}

std::string PromptRecordToJson(const PromptRecord &record) {
  json j = json::parse(PromptToJson(record.prompt));
  json out = {{"id", record.id}};
  out.update(j);
  return out.dump();
}

std::vector<TrainingSample> BuildQgSamples(const std::vector<DatasetItem> &items,
                                           const KnowledgeGraph &kg,
                                           const Generator &prompter,
                                           const PromptOptions &options,
                                           uint64_t seed, size_t jobs,
                                           StageReport *report) {
  std::vector<std::optional<TrainingSample>> results(items.size());
  std::vector<ItemOutcome> outcomes(items.size());
  ParallelFor(items.size(), jobs, [&](size_t i) {
    const DatasetItem &item = items[i];
    if (Trim(item.question).empty()) {
      outcomes[i] = {false, "EmptyQuestion", 0};
      return;
    }
    try {
      uint64_t item_seed = DeriveSeed(seed, item.id);
      BuiltPrompt built = BuildPrompt(item, kg, prompter, options, item_seed);
      TrainingSample sample;
      sample.input = QgInput(built.graph.source, kg, built.prompt);
      sample.target = ToLower(Trim(item.question));
      sample.provenance = {item.id, item_seed, options.strategy, " "};
      results[i] = std::move(sample);
      outcomes[i] = {true, "", built.fallbacks};
    } catch (const Error &e) {
      if (IsFatal(e)) throw;
      LogWarning(item.id + ": skipped: " + e.what());
      outcomes[i] = {false, std::string(ErrorCodeName(e.code())), 0};
    }
  });
  Tally(outcomes, report);
  std::vector<TrainingSample> out;
  for (auto &r : results) {
    if (r) out.push_back(std::move(*r));
  }
  return out;
}

size_t SubsampleCount(size_t n, double proportion) {
  if (!(proportion > 0.0 && proportion <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "proportion must be in (0, 1], got " + std::to_string(proportion));
  }
  if (n == 0) return 0;
  // The epsilon keeps exact products such as 1000 * 0.01 from rounding up.
  double want = std::ceil(static_cast<double>(n) * proportion - 1e-9);
  return std::clamp<size_t>(static_cast<size_t>(std::max(want, 1.0)), 1, n);
}

std::vector<DatasetItem> Subsample(const std::vector<DatasetItem> &items,
                                   double proportion, uint64_t seed) {
  size_t count = SubsampleCount(items.size(), proportion);
  Rng rng(seed);
  std::vector<DatasetItem> out;
  for (size_t i : SampleIndices(items.size(), count, rng)) out.push_back(items[i]);
  return out;
}

std::vector<DatasetItem> Augment(const DatasetItem &item,
                                 const KnowledgeGraph &kg,
                                 const Generator &prompter,
                                 const Generator &qg,
                                 const AugmentOptions &options, uint64_t seed) {
  SparqlQuery query = ParseQuery(item.sparql);
  AbstractedQuery abstracted = AbstractTopicEntities(query);

  SparqlQuery tuples = abstracted.query;
  tuples.projection.clear();
  for (const auto &[entity, var] : abstracted.mapping) tuples.projection.push_back(var);
  tuples.distinct = true;
  tuples.count.reset();
  tuples.order_by.reset();
  tuples.limit.reset();
  ResultSet answers = Evaluate(tuples, kg);

  std::vector<std::string> original;
  for (const auto &[entity, var] : abstracted.mapping) original.push_back(entity);
  std::vector<std::vector<std::string>> candidates;
  for (const auto &row : answers.rows) {
    if (row != original && Substitutable(row, kg)) candidates.push_back(row);
  }

  Rng rng(seed);
  std::vector<size_t> order(candidates.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);

  std::vector<DatasetItem> out;
  for (size_t c : order) {
    if (out.size() >= options.k) break;
    std::map<std::string, Term> values;
    for (size_t v = 0; v < abstracted.mapping.size(); ++v) {
      values[abstracted.mapping[v].second] = Term::Iri(candidates[c][v]);
    }
    SparqlQuery replaced = BindVariables(abstracted.query, values);
    if (Evaluate(ExpandProjection(replaced), kg).rows.empty()) continue;

    DatasetItem next;
    next.id = item.id + "#aug" + std::to_string(out.size());
    next.sparql = PrintQuery(replaced);
    next.split = item.split;
    BuiltPrompt built = BuildPrompt(next, kg, prompter, options.prompt,
                                    DeriveSeed(seed, next.id));
    GenerationRequest request;
    request.inputs.push_back(QgInput(replaced, kg, built.prompt));
    request.config = options.qg;
    next.question = ToLower(qg.Generate(request).outputs.front());
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<DatasetItem> AugmentAll(const std::vector<DatasetItem> &items,
                                    const KnowledgeGraph &kg,
                                    const Generator &prompter,
                                    const Generator &qg,
                                    const AugmentOptions &options,
                                    uint64_t seed, size_t jobs,
                                    StageReport *report) {
  std::vector<std::vector<DatasetItem>> results(items.size());
  std::vector<ItemOutcome> outcomes(items.size());
  ParallelFor(items.size(), jobs, [&](size_t i) {
    try {
      results[i] = Augment(items[i], kg, prompter, qg, options,
                           DeriveSeed(seed, items[i].id));
      if (results[i].empty()) {
        outcomes[i] = {false, "NoAlternatives", 0};
      } else {
        outcomes[i] = {true, "", 0};
      }
    } catch (const Error &e) {
      if (IsFatal(e)) throw;
      LogWarning(items[i].id + ": not augmented: " + e.what());
      outcomes[i] = {false, std::string(ErrorCodeName(e.code())), 0};
    }
  });
  Tally(outcomes, report);
  std::vector<DatasetItem> out;
  for (auto &r : results) {
    for (DatasetItem &item : r) out.push_back(std::move(item));
  }
  return out;
}

std::vector<AtomicSubgraph> SampleAllPredicates(const KnowledgeGraph &kg,
                                                size_t limit, uint64_t seed) {
  std::vector<AtomicSubgraph> out;
  std::set<std::string> seen;
  for (const auto &[predicate, kind] : kg.catalog()) {
    for (AtomicSubgraph &atom :
         SampleForPredicate(kg, predicate, limit, DeriveSeed(seed, predicate))) {
      // A CVT star reached through several predicates is kept once.
      if (seen.insert(atom.id).second) out.push_back(std::move(atom));
    }
  }
  return out;
}

}  // namespace sparql2q
