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

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sparql2q/corpus.h"
#include "sparql2q/error.h"
#include "sparql2q/generate.h"
#include "sparql2q/kg.h"
#include "sparql2q/log.h"
#include "sparql2q/metrics.h"
#include "sparql2q/pipeline.h"
#include "sparql2q/rng.h"
#include "sparql2q/sampler.h"
#include "sparql2q/serializer.h"
#include "sparql2q/text.h"

namespace sparql2q::cli {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
  std::string kg;
  std::string entities;
  std::string catalog;
  std::string corpus;
  std::string dataset;
  std::string atoms;
  std::string predictions;
  std::string references;
  std::string out = "out";
  std::string strategy = "name";
  uint64_t seed = 0;
  std::string backend = "template";
  std::string endpoint;
  std::string qg_endpoint;
  int beam_size = 10;
  double length_penalty = 1.0;
  size_t max_input_length = 512;
  size_t prompter_max_length = 512;
  size_t qg_max_length = 128;
  double timeout = 30.0;
  int retries = 3;
  size_t batch_size = 16;
  size_t concurrency = 4;
  double proportion = 1.0;
  size_t k = 10;
  size_t limit = 100;
  size_t max_matches = 3;
  size_t window = 64;
  size_t context_cap = 8;
  size_t jobs = 1;
};

// Options registered on one subcommand, so the stage can check which ones
// were given.
struct Stage {
  CLI::App *app = nullptr;
  CLI::Option *seed = nullptr;
};

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingInput:
    case ErrorCode::kConfigConflict:
      return kExitUsage;
    case ErrorCode::kTransportError:
      return kExitTransport;
    case ErrorCode::kInvariantViolation:
      return kExitInvariant;
    default:
      return kExitFailure;
  }
}

void RequirePath(const std::string &value, std::string_view flag) {
  if (value.empty()) {
    throw Error(ErrorCode::kMissingInput, std::string(flag) + " is required");
  }
  if (!fs::exists(value)) {
    throw Error(ErrorCode::kMissingInput,
                std::string(flag) + ": no such file " + value);
  }
}

void RequireSeed(const Stage &stage) {
  if (stage.seed->count() == 0) {
    throw Error(ErrorCode::kMissingInput,
                "--seed is required for " + stage.app->get_name());
  }
}

uint64_t StageSeed(const RunConfig &c, std::string_view stage) {
  return DeriveSeed(c.seed, stage);
}

KnowledgeGraph LoadKg(const RunConfig &c, LoadReport *report = nullptr) {
  RequirePath(c.kg, "--kg");
  RequirePath(c.entities, "--entities");
  RequirePath(c.catalog, "--catalog");
  return LoadKnowledgeGraph(c.kg, c.entities, c.catalog, report);
}

SerializationStrategy StrategyOf(const RunConfig &c) {
  std::optional<SerializationStrategy> s = ParseStrategy(c.strategy);
  if (!s) throw Error(ErrorCode::kConfigConflict, "unknown strategy " + c.strategy);
  return *s;
}

std::shared_ptr<Generator> MakeBackend(const RunConfig &c, GenerationRole role) {
  if (c.backend == "template") {
    if (!c.endpoint.empty() || !c.qg_endpoint.empty()) {
      throw Error(ErrorCode::kConfigConflict,
                  "--endpoint given but --backend is template");
    }
    return MakeTemplateBackend(role);
  }
  if (c.backend != "remote") {
    throw Error(ErrorCode::kConfigConflict, "unknown backend " + c.backend);
  }
  RemoteOptions options;
  options.endpoint = role == GenerationRole::kQuestion && !c.qg_endpoint.empty()
                         ? c.qg_endpoint
                         : c.endpoint;
  if (options.endpoint.empty()) {
    throw Error(ErrorCode::kConfigConflict, "--backend remote needs --endpoint");
  }
  options.timeout_seconds = c.timeout;
  options.retries = c.retries;
  options.batch_size = c.batch_size;
  options.concurrency = c.concurrency;
  return MakeRemoteBackend(options);
}

GenerationConfig ConfigFor(const RunConfig &c, GenerationRole role) {
  GenerationConfig g = GenerationConfig::ForRole(role);
  g.beam_size = c.beam_size;
  g.length_penalty = c.length_penalty;
  g.max_input_length = c.max_input_length;
  g.max_output_length =
      role == GenerationRole::kPrompter ? c.prompter_max_length : c.qg_max_length;
  g.Validate();
  return g;
}

PromptOptions PromptOptionsOf(const RunConfig &c) {
  PromptOptions options;
  options.strategy = StrategyOf(c);
  options.sampler.context_cap = c.context_cap;
  options.prompter = ConfigFor(c, GenerationRole::kPrompter);
  return options;
}

// Writes output files and the stage report below the output directory.
class Output {
 public:
  explicit Output(const RunConfig &c) : dir_(c.out) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) {
      throw Error(ErrorCode::kMissingInput,
                  "cannot create output directory " + dir_.string());
    }
  }

  void WriteLines(const std::string &name, const std::vector<std::string> &lines) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::kMissingInput, "cannot write " + (dir_ / name).string());
    for (const std::string &line : lines) f << line << '\n';
  }

  void WriteText(const std::string &name, const std::string &text) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error(ErrorCode::kMissingInput, "cannot write " + (dir_ / name).string());
    f << text;
  }

  void Report(const std::string &stage, const std::string &text, std::ostream &out) {
    WriteText(stage + ".report.txt", text);
    out << text;
  }

  std::string Path(const std::string &name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::vector<AtomicSubgraph> ReadAtoms(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<AtomicSubgraph> atoms;
  std::string line;
  while (std::getline(in, line)) {
    if (!Trim(line).empty()) atoms.push_back(AtomFromJson(line));
  }
  return atoms;
}

std::vector<AtomicSubgraph> AtomsFor(const RunConfig &c, const Stage &stage,
                                     const KnowledgeGraph &kg) {
  if (!c.atoms.empty()) {
    RequirePath(c.atoms, "--atoms");
    return ReadAtoms(c.atoms);
  }
  RequireSeed(stage);
  return SampleAllPredicates(kg, c.limit, DeriveSeed(c.seed, "sample-predicates"));
}

// id -> text from a record stream; the text field is the first present of
// "question", "prediction", "text", "target".
std::vector<std::pair<std::string, std::string>> ReadKeyed(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      std::string id = j.at("id").get<std::string>();
      std::optional<std::string> text;
      for (const char *field : {"question", "prediction", "text", "target"}) {
        if (j.contains(field)) {
          text = j.at(field).get<std::string>();
          break;
        }
      }
      if (!text) throw Error(ErrorCode::kMalformedInput, "record has no text field");
      out.emplace_back(std::move(id), std::move(*text));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kMalformedInput,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error &e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---- stages ---------------------------------------------------------------

void LoadCheck(const RunConfig &c, std::ostream &out) {
  LoadReport report;
  KnowledgeGraph kg = LoadKg(c, &report);
  if (!kg.CheckIndexes()) {
    throw Error(ErrorCode::kInvariantViolation, "index rebuild differs from live indexes");
  }
  Output(c).Report("load-check", report.ToText() + "indexes: consistent\n", out);
}

void SamplePredicates(const RunConfig &c, const Stage &stage, std::ostream &out) {
  RequireSeed(stage);
  KnowledgeGraph kg = LoadKg(c);
  std::vector<AtomicSubgraph> atoms =
      SampleAllPredicates(kg, c.limit, StageSeed(c, "sample-predicates"));
  std::vector<std::string> lines;
  size_t single = 0;
  for (const AtomicSubgraph &a : atoms) {
    lines.push_back(AtomToJson(a));
    if (a.kind == PredicateKind::kSingle) ++single;
  }
  Output o(c);
  o.WriteLines("atoms.jsonl", lines);
  std::ostringstream report;
  report << "stage: sample-predicates\n"
         << "catalogued predicates: " << kg.catalog().size() << '\n'
         << "limit per predicate: " << c.limit << '\n'
         << "atoms: " << atoms.size() << '\n'
         << "single atoms: " << single << '\n'
         << "cvt atoms: " << atoms.size() - single << '\n';
  o.Report("sample-predicates", report.str(), out);
}

void CollectDescriptionsStage(const RunConfig &c, const Stage &stage,
                              std::ostream &out) {
  KnowledgeGraph kg = LoadKg(c);
  RequirePath(c.corpus, "--corpus");
  std::vector<AtomicSubgraph> atoms = AtomsFor(c, stage, kg);
  CorpusIndex index = IndexCorpus(c.corpus, c.jobs);
  CollectOptions options;
  options.max_matches = c.max_matches;
  std::vector<std::string> lines;
  size_t matched = 0;
  for (const AtomicSubgraph &atom : atoms) {
    std::vector<DescriptionMatch> matches = CollectDescriptions(index, atom, options);
    if (!matches.empty()) ++matched;
    for (const DescriptionMatch &m : matches) lines.push_back(MatchToJson(m));
  }
  Output o(c);
  o.WriteLines("descriptions.jsonl", lines);
  std::ostringstream report;
  report << "stage: collect-descriptions\n"
         << "documents: " << index.documents().size() << '\n'
         << "sentences: " << index.sentence_count() << '\n'
         << "atoms: " << atoms.size() << '\n'
         << "matched atoms: " << matched << '\n'
         << "dropped atoms: " << atoms.size() - matched << '\n'
         << "matches: " << lines.size() << '\n';
  o.Report("collect-descriptions", report.str(), out);
}

void BuildPrompterData(const RunConfig &c, const Stage &stage, std::ostream &out) {
  RequireSeed(stage);
  KnowledgeGraph kg = LoadKg(c);
  RequirePath(c.corpus, "--corpus");
  std::vector<AtomicSubgraph> atoms = AtomsFor(c, stage, kg);
  CorpusIndex index = IndexCorpus(c.corpus, c.jobs);
  PairOptions options;
  options.strategy = StrategyOf(c);
  options.seed = StageSeed(c, "build-prompter-data");
  options.window = c.window;
  options.collect.max_matches = c.max_matches;
  std::vector<TrainingPair> pairs = BuildTrainingPairs(atoms, index, options);
  std::vector<std::string> lines;
  size_t single = 0;
  for (const TrainingPair &p : pairs) {
    lines.push_back(PairToJson(p));
    if (p.kind == "single") ++single;
  }
  Output o(c);
  o.WriteLines("prompter_pairs.jsonl", lines);
  std::ostringstream report;
  report << "stage: build-prompter-data\n"
         << "strategy: " << c.strategy << '\n'
         << "atoms: " << atoms.size() << '\n'
         << "pairs: " << pairs.size() << '\n'
         << "single pairs: " << single << '\n'
         << "cvt pairs: " << pairs.size() - single << '\n'
         << "dropped atoms: " << atoms.size() - pairs.size() << '\n';
  o.Report("build-prompter-data", report.str(), out);
}

void BuildPromptsStage(const RunConfig &c, const Stage &stage, std::ostream &out) {
  RequireSeed(stage);
  KnowledgeGraph kg = LoadKg(c);
  RequirePath(c.dataset, "--dataset");
  std::vector<DatasetItem> items = LoadDataset(c.dataset);
  PromptOptions options = PromptOptionsOf(c);
  std::shared_ptr<Generator> prompter = MakeBackend(c, GenerationRole::kPrompter);
  StageReport report;
  std::vector<PromptRecord> prompts =
      BuildPrompts(items, kg, *prompter, options, StageSeed(c, "build-prompts"),
                   c.jobs, &report);
  std::vector<std::string> lines;
  for (const PromptRecord &p : prompts) lines.push_back(PromptRecordToJson(p));
  Output o(c);
  o.WriteLines("prompts.jsonl", lines);
  o.Report("build-prompts", report.ToText("build-prompts", "prompts"), out);
}

void BuildQgData(const RunConfig &c, const Stage &stage, std::ostream &out) {
  RequireSeed(stage);
  KnowledgeGraph kg = LoadKg(c);
  RequirePath(c.dataset, "--dataset");
  std::vector<DatasetItem> items = LoadDataset(c.dataset);
  PromptOptions options = PromptOptionsOf(c);
  std::shared_ptr<Generator> prompter = MakeBackend(c, GenerationRole::kPrompter);
  StageReport report;
  std::vector<TrainingSample> samples =
      BuildQgSamples(items, kg, *prompter, options, StageSeed(c, "build-qg-data"),
                     c.jobs, &report);
  std::vector<std::string> lines;
  for (const TrainingSample &s : samples) lines.push_back(SampleToJson(s));
  Output o(c);
  o.WriteLines("qg_samples.jsonl", lines);
  o.Report("build-qg-data", report.ToText("build-qg-data", "samples"), out);
}

void SubsampleStage(const RunConfig &c, const Stage &stage, std::ostream &out) {
  RequireSeed(stage);
  RequirePath(c.dataset, "--dataset");
  std::vector<DatasetItem> items = LoadDataset(c.dataset);
  std::vector<DatasetItem> kept =
      Subsample(items, c.proportion, StageSeed(c, "subsample"));
  std::vector<std::string> lines;
  for (const DatasetItem &item : kept) lines.push_back(ItemToJson(item));
  Output o(c);
  o.WriteLines("subsample.jsonl", lines);
  std::ostringstream report;
  report << "stage: subsample\n"
         << "items: " << items.size() << '\n'
         << "proportion: " << c.proportion << '\n'
         << "kept: " << kept.size() << '\n';
  o.Report("subsample", report.str(), out);
}

void AugmentStage(const RunConfig &c, const Stage &stage, std::ostream &out) {
  RequireSeed(stage);
  KnowledgeGraph kg = LoadKg(c);
  RequirePath(c.dataset, "--dataset");
  std::vector<DatasetItem> items = LoadDataset(c.dataset);
  AugmentOptions options;
  options.k = c.k;
  options.prompt = PromptOptionsOf(c);
  options.qg = ConfigFor(c, GenerationRole::kQuestion);
  std::shared_ptr<Generator> prompter = MakeBackend(c, GenerationRole::kPrompter);
  std::shared_ptr<Generator> qg = MakeBackend(c, GenerationRole::kQuestion);
  StageReport report;
  std::vector<DatasetItem> augmented = AugmentAll(
      items, kg, *prompter, *qg, options, StageSeed(c, "augment"), c.jobs, &report);
  std::vector<std::string> lines;
  for (const DatasetItem &item : augmented) lines.push_back(ItemToJson(item));
  Output o(c);
  o.WriteLines("augmented.jsonl", lines);
  std::string text = report.ToText("augment", "augmented sources");
  text += "k: " + std::to_string(c.k) + "\naugmented items: " +
          std::to_string(augmented.size()) + "\n";
  o.Report("augment", text, out);
}

void EvaluateStage(const RunConfig &c, std::ostream &out) {
  RequirePath(c.predictions, "--predictions");
  RequirePath(c.references, "--references");
  auto predictions = ReadKeyed(c.predictions);
  auto references = ReadKeyed(c.references);
  std::map<std::string, std::string> by_id;
  for (auto &[id, text] : predictions) {
    if (!by_id.emplace(id, text).second) {
      throw Error(ErrorCode::kMalformedInput, "duplicate prediction id " + id);
    }
  }
  std::vector<std::string> ids, cands, refs;
  for (const auto &[id, text] : references) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMissingInput, "no prediction for id " + id);
    }
    ids.push_back(id);
    cands.push_back(it->second);
    refs.push_back(text);
  }
  if (by_id.size() != references.size()) {
    throw Error(ErrorCode::kMalformedInput,
                "predictions contain ids without a reference");
  }
  MetricReport report = ScoreCorpus(ids, cands, refs);
  Output o(c);
  o.WriteText("metrics.json", report.ToJson() + "\n");
  std::vector<std::string> lines;
  for (const ItemScore &item : report.items) lines.push_back(ItemScoreToJson(item));
  o.WriteLines("metrics.items.jsonl", lines);
  o.Report("evaluate", "stage: evaluate\n" + report.ToText(), out);
}

// ---- option wiring --------------------------------------------------------

void AddKg(CLI::App *app, RunConfig &c) {
  app->add_option("--kg", c.kg, "Triples file (TSV: subject, predicate, object)");
  app->add_option("--entities", c.entities, "Entity metadata (JSON Lines)");
  app->add_option("--catalog", c.catalog, "Predicate catalog (TSV: predicate, single|cvt)");
}

void AddOut(CLI::App *app, RunConfig &c) {
  app->add_option("--out", c.out, "Output directory");
}

CLI::Option *AddSeed(CLI::App *app, RunConfig &c) {
  return app->add_option("--seed", c.seed, "Random seed (required)");
}

void AddJobs(CLI::App *app, RunConfig &c) {
  app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void AddSampling(CLI::App *app, RunConfig &c) {
  app->add_option("--atoms", c.atoms, "Atoms file from sample-predicates (sampled when omitted)");
  app->add_option("--limit", c.limit, "Atoms sampled per predicate")->check(CLI::PositiveNumber);
  app->add_option("--corpus", c.corpus, "Document corpus (JSON Lines: title, paragraphs)");
  app->add_option("--max-matches", c.max_matches, "Descriptions kept per atom")
      ->check(CLI::PositiveNumber);
}

void AddGeneration(CLI::App *app, RunConfig &c) {
  app->add_option("--strategy", c.strategy, "Serialization strategy")
      ->check(CLI::IsMember({"name", "type"}));
  app->add_option("--backend", c.backend, "Generator backend")
      ->check(CLI::IsMember({"template", "remote"}));
  app->add_option("--endpoint", c.endpoint, "Generation service URL (remote backend)");
  app->add_option("--qg-endpoint", c.qg_endpoint,
                  "Question generator URL when it differs from --endpoint");
  app->add_option("--beam-size", c.beam_size, "Beam size")->check(CLI::PositiveNumber);
  app->add_option("--length-penalty", c.length_penalty, "Length penalty");
  app->add_option("--max-input-length", c.max_input_length, "Input budget in tokens")
      ->check(CLI::PositiveNumber);
  app->add_option("--prompter-max-length", c.prompter_max_length,
                  "Prompter output budget in tokens")
      ->check(CLI::PositiveNumber);
  app->add_option("--qg-max-length", c.qg_max_length, "Question output budget in tokens")
      ->check(CLI::PositiveNumber);
  app->add_option("--timeout", c.timeout, "Remote request timeout in seconds");
  app->add_option("--retries", c.retries, "Remote attempts per request")
      ->check(CLI::PositiveNumber);
  app->add_option("--batch-size", c.batch_size, "Inputs per remote request")
      ->check(CLI::PositiveNumber);
  app->add_option("--concurrency", c.concurrency, "Remote requests in flight")
      ->check(CLI::PositiveNumber);
  app->add_option("--context-cap", c.context_cap, "Context edges added to a CVT atom");
}

// Position of the subcommand in `args`, skipping values of global options.
size_t FindSubcommand(const std::vector<std::string> &args, const CLI::App &app) {
  for (size_t i = 1; i < args.size(); ++i) {
    for (const CLI::App *sub : app.get_subcommands({})) {
      if (sub->get_name() == args[i]) return i;
    }
    if ((args[i] == "--config" || args[i] == "--log-level") && i + 1 < args.size()) ++i;
  }
  return args.size();
}

std::string ConfigPath(const std::vector<std::string> &args) {
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  const char *env = std::getenv("SPARQL2Q_CONFIG");
  return env ? std::string(env) : std::string();
}

// Flags generated from the config file for subcommand `sub`: global keys,
// overridden by "<sub>.key" keys. Keys that name no flag of any subcommand
// are rejected.
std::vector<std::string> ConfigArgs(const ConfigFile &config, const CLI::App &app,
                                    const CLI::App &sub) {
  std::map<std::string, std::string> chosen;
  for (const auto &[key, value] : config) {
    std::string stage, name = key;
    size_t dot = key.find('.');
    if (dot != std::string::npos) {
      stage = key.substr(0, dot);
      name = key.substr(dot + 1);
    }
    bool known = false;
    for (const CLI::App *s : app.get_subcommands({})) {
      if (s->get_option_no_throw("--" + name)) known = true;
    }
    if (!known) {
      throw Error(ErrorCode::kConfigConflict, "unknown config key '" + key + "'");
    }
    if (!stage.empty() && !app.get_subcommand_no_throw(stage)) {
      throw Error(ErrorCode::kConfigConflict, "unknown stage in config key '" + key + "'");
    }
    if (!sub.get_option_no_throw("--" + name)) continue;
    if (stage.empty()) {
      chosen.emplace(name, value);
    } else if (stage == sub.get_name()) {
      chosen[name] = value;
    }
  }
  std::vector<std::string> args;
  for (const auto &[name, value] : chosen) {
    args.push_back("--" + name);
    args.push_back(value);
  }
  return args;
}

}  // namespace

ConfigFile ParseConfig(std::string_view text, std::string_view source) {
  ConfigFile config;
  size_t line_no = 0;
  for (std::string_view line : Split(text, '\n')) {
    ++line_no;
    std::string_view t = Trim(line);
    if (t.empty() || t.front() == '#') continue;
    size_t eq = t.find('=');
    std::string key = eq == std::string_view::npos ? "" : std::string(Trim(t.substr(0, eq)));
    if (key.empty()) {
      throw Error(ErrorCode::kConfigConflict, std::string(source) + ":" +
                                                  std::to_string(line_no) +
                                                  ": expected key = value");
    }
    std::string value(Trim(t.substr(eq + 1)));
    if (!config.emplace(key, value).second) {
      throw Error(ErrorCode::kConfigConflict, std::string(source) + ":" +
                                                  std::to_string(line_no) +
                                                  ": duplicate key " + key);
    }
  }
  return config;
}

ConfigFile LoadConfig(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingInput, "cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfig(buffer.str(), path);
}

int Run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  RunConfig c;
  std::string config_path;
  std::string log_level = "warning";

  CLI::App app{"sparql2q: SPARQL queries to prompt text and question-generation data"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(
      CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", config_path,
                 "Config file (key = value; stage.key overrides); default $SPARQL2Q_CONFIG");
  app.add_option("--log-level", log_level, "Log threshold")
      ->check(CLI::IsMember({"debug", "info", "warning", "error", "off"}));

  std::map<std::string, Stage> stages;
  auto add = [&](const std::string &name, const std::string &help) {
    CLI::App *sub = app.add_subcommand(name, help);
    stages[name].app = sub;
    return sub;
  };

  CLI::App *load_check = add("load-check", "Load the knowledge graph and report integrity");
  AddKg(load_check, c);
  AddOut(load_check, c);

  CLI::App *sample = add("sample-predicates", "Sample atomic subgraphs per catalogued predicate");
  AddKg(sample, c);
  AddOut(sample, c);
  stages["sample-predicates"].seed = AddSeed(sample, c);
  sample->add_option("--limit", c.limit, "Atoms sampled per predicate")
      ->check(CLI::PositiveNumber);

  CLI::App *collect = add("collect-descriptions", "Match atoms against the corpus");
  AddKg(collect, c);
  AddOut(collect, c);
  AddSampling(collect, c);
  AddJobs(collect, c);
  stages["collect-descriptions"].seed = AddSeed(collect, c);

  CLI::App *prompter_data =
      add("build-prompter-data", "Build auto-prompter training pairs");
  AddKg(prompter_data, c);
  AddOut(prompter_data, c);
  AddSampling(prompter_data, c);
  AddJobs(prompter_data, c);
  stages["build-prompter-data"].seed = AddSeed(prompter_data, c);
  prompter_data->add_option("--strategy", c.strategy, "Serialization strategy")
      ->check(CLI::IsMember({"name", "type"}));
  prompter_data->add_option("--window", c.window, "Interleaving window for pair kinds")
      ->check(CLI::PositiveNumber);

  for (const char *name : {"build-prompts", "build-qg-data", "augment"}) {
    CLI::App *sub = add(name, std::string(name) == "build-prompts"
                                  ? "Generate annotated prompt text per dataset item"
                              : std::string(name) == "build-qg-data"
                                  ? "Build question-generation samples"
                                  : "Augment items by replacing topic entities");
    AddKg(sub, c);
    AddOut(sub, c);
    AddJobs(sub, c);
    AddGeneration(sub, c);
    stages[name].seed = AddSeed(sub, c);
    sub->add_option("--dataset", c.dataset, "Dataset (JSON Lines: id, sparql, question, split)");
  }
  stages["augment"].app->add_option("--k", c.k, "Augmented items per source")
      ->check(CLI::PositiveNumber);

  CLI::App *subsample = add("subsample", "Keep a seeded proportion of a dataset");
  AddOut(subsample, c);
  stages["subsample"].seed = AddSeed(subsample, c);
  subsample->add_option("--dataset", c.dataset, "Dataset (JSON Lines)");
  subsample->add_option("--proportion", c.proportion, "Fraction to keep, in (0, 1]")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App *evaluate = add("evaluate", "Score predictions with BLEU-4, METEOR-lite and ROUGE-L");
  AddOut(evaluate, c);
  evaluate->add_option("--predictions", c.predictions, "Predictions (JSON Lines: id, question)");
  evaluate->add_option("--references", c.references, "References (JSON Lines: id, question)");

  try {
    std::vector<std::string> argv_strings = args;
    std::string path = ConfigPath(args);
    size_t sub_at = FindSubcommand(args, app);
    if (!path.empty() && sub_at < args.size()) {
      ConfigFile config = LoadConfig(path);
      std::vector<std::string> extra =
          ConfigArgs(config, app, *app.get_subcommand(args[sub_at]));
      argv_strings.insert(argv_strings.begin() + sub_at + 1, extra.begin(), extra.end());
    }
    std::vector<char *> argv;
    for (std::string &s : argv_strings) argv.push_back(s.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp &e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError &e) {
      err << "error: UsageError: " << e.what() << '\n';
      return kExitUsage;
    }

    static const std::map<std::string, LogLevel> kLevels = {
        {"debug", LogLevel::kDebug}, {"info", LogLevel::kInfo},
        {"warning", LogLevel::kWarning}, {"error", LogLevel::kError},
        {"off", LogLevel::kOff}};
    SetLogLevel(kLevels.at(log_level));

    const std::string name = app.get_subcommands().front()->get_name();
    const Stage &stage = stages.at(name);
    if (name == "load-check") LoadCheck(c, out);
    else if (name == "sample-predicates") SamplePredicates(c, stage, out);
    else if (name == "collect-descriptions") CollectDescriptionsStage(c, stage, out);
    else if (name == "build-prompter-data") BuildPrompterData(c, stage, out);
    else if (name == "build-prompts") BuildPromptsStage(c, stage, out);
    else if (name == "build-qg-data") BuildQgData(c, stage, out);
    else if (name == "subsample") SubsampleStage(c, stage, out);
    else if (name == "augment") AugmentStage(c, stage, out);
    else if (name == "evaluate") EvaluateStage(c, out);
    return kExitOk;
  } catch (const Error &e) {
    err << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception &e) {
    err << "error: InternalError: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace sparql2q::cli
