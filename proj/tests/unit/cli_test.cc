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

#include <gtest/gtest.h>

#include <sstream>

#include "json.hpp"
#include "sparql2q/error.h"
#include "support/fixtures.h"

namespace sparql2q {
namespace {

using testing::DataPath;
using testing::ReadFile;
using testing::ReadLines;
using testing::TempDir;
using testing::WriteFile;

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "sparql2q");
  std::ostringstream out, err;
  RunResult r;
  r.code = cli::Run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> FigureKgArgs() {
  testing::GraphFiles f = testing::FigureFiles();
  return {"--kg", f.triples, "--entities", f.entities, "--catalog", f.catalog};
}

std::vector<std::string> Concat(std::vector<std::string> a, const std::vector<std::string> &b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST(ConfigFileTest, Parse) {
  cli::ConfigFile c = cli::ParseConfig("# comment\n\nseed = 7\naugment.k=3\n", "c.conf");
  EXPECT_EQ(c.at("seed"), "7");
  EXPECT_EQ(c.at("augment.k"), "3");
  EXPECT_THROW(cli::ParseConfig("novalue\n", "c.conf"), Error);
  EXPECT_THROW(cli::ParseConfig("a = 1\na = 2\n", "c.conf"), Error);
  EXPECT_THROW(cli::LoadConfig("/nonexistent.conf"), Error);
}

TEST(CliTest, Help) {
  RunResult r = RunCli({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("build-qg-data"), std::string::npos);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(RunCli({}).code, cli::kExitUsage);
  RunResult r = RunCli({"no-such-stage"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_EQ(r.err.rfind("error: UsageError:", 0), 0u);
  EXPECT_EQ(RunCli({"subsample", "--proportion", "2"}).code, cli::kExitUsage);
}

TEST(CliTest, LoadCheck) {
  TempDir dir;
  RunResult r = RunCli(Concat({"load-check", "--out", dir.path().string()}, FigureKgArgs()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("indexes: consistent"), std::string::npos);
  EXPECT_EQ(ReadFile(dir.File("load-check.report.txt")), r.out);
}

TEST(CliTest, MissingInputs) {
  TempDir dir;
  RunResult r = RunCli({"load-check", "--out", dir.path().string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("error: MissingInput: --kg is required"), std::string::npos);
  r = RunCli(Concat({"build-qg-data", "--out", dir.path().string(), "--dataset",
                     DataPath("figure/dataset.jsonl")},
                    FigureKgArgs()));
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--seed is required"), std::string::npos);
}

TEST(CliTest, TemplateWithEndpointConflicts) {
  TempDir dir;
  RunResult r = RunCli(Concat({"build-prompts", "--seed", "1", "--out", dir.path().string(),
                               "--dataset", DataPath("figure/dataset.jsonl"), "--endpoint",
                               "http://127.0.0.1:1"},
                              FigureKgArgs()));
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("ConfigConflict"), std::string::npos);
}

TEST(CliTest, UnreachableServiceIsTransportFailure) {
  TempDir dir;
  RunResult r = RunCli(Concat(
      {"build-prompts", "--seed", "1", "--out", dir.path().string(), "--dataset",
       DataPath("figure/dataset.jsonl"), "--backend", "remote", "--endpoint",
       "http://127.0.0.1:" + std::to_string(testing::UnusedPort()), "--retries", "1", "--timeout", "2"},
      FigureKgArgs()));
  EXPECT_EQ(r.code, cli::kExitTransport) << r.err;
  EXPECT_NE(r.err.find("error: TransportError:"), std::string::npos);
}

TEST(CliTest, SamplePredicatesAndPrompterData) {
  TempDir dir;
  std::string out = dir.path().string();
  RunResult r = RunCli(Concat({"sample-predicates", "--seed", "4", "--out", out}, FigureKgArgs()));
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> atoms = ReadLines(dir.File("atoms.jsonl"));
  EXPECT_FALSE(atoms.empty());
  EXPECT_NE(r.out.find("atoms: " + std::to_string(atoms.size())), std::string::npos);

  r = RunCli(Concat({"collect-descriptions", "--out", out, "--atoms", dir.File("atoms.jsonl"),
                     "--corpus", DataPath("figure/corpus.jsonl")},
                    FigureKgArgs()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("sentences: 13"), std::string::npos);

  r = RunCli(Concat({"build-prompter-data", "--seed", "4", "--out", out, "--atoms",
                     dir.File("atoms.jsonl"), "--corpus", DataPath("figure/corpus.jsonl"),
                     "--strategy", "type"},
                    FigureKgArgs()));
  ASSERT_EQ(r.code, 0) << r.err;
  for (const std::string &line : ReadLines(dir.File("prompter_pairs.jsonl"))) {
    nlohmann::json j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("input"));
    EXPECT_TRUE(j.contains("target"));
  }
  EXPECT_TRUE(std::filesystem::exists(dir.File("build-prompter-data.report.txt")));
}

TEST(CliTest, BuildPromptsAndQgData) {
  TempDir dir;
  std::string out = dir.path().string();
  std::vector<std::string> base = Concat(
      {"--seed", "5", "--out", out, "--dataset", DataPath("figure/dataset.jsonl")},
      FigureKgArgs());
  RunResult r = RunCli(Concat({"build-prompts"}, base));
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> prompts = ReadLines(dir.File("prompts.jsonl"));
  ASSERT_EQ(prompts.size(), 3u);
  EXPECT_EQ(nlohmann::json::parse(prompts[0]).at("text"),
            "Julius Caesar place of death The Theatre of Pompey (the ?x) .");

  r = RunCli(Concat({"build-qg-data"}, base));
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> samples = ReadLines(dir.File("qg_samples.jsonl"));
  ASSERT_EQ(samples.size(), 3u);
  nlohmann::json first = nlohmann::json::parse(samples[0]);
  EXPECT_EQ(first.at("target"), "where did julius caesar die?");
  EXPECT_EQ(first.at("provenance").at("item_id"), "caesar");
  EXPECT_NE(r.out.find("skipped: 1"), std::string::npos);
}

TEST(CliTest, SubsampleAndAugment) {
  TempDir dir;
  std::string out = dir.path().string();
  std::vector<DatasetItem> items = testing::FilmDataset(testing::FilmWorld{}, 9793);
  std::string dataset = testing::WriteDataset(dir.File("data.jsonl"), items);
  RunResult r = RunCli({"subsample", "--seed", "1", "--out", out, "--dataset", dataset,
                        "--proportion", "0.001"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadLines(dir.File("subsample.jsonl")).size(), 10u);
  EXPECT_NE(r.out.find("kept: 10"), std::string::npos);

  testing::GraphFiles g = testing::WriteFilmWorld(dir.path() / "kg", testing::FilmWorld{});
  r = RunCli({"augment", "--seed", "1", "--out", out, "--dataset", dir.File("subsample.jsonl"),
              "--kg", g.triples, "--entities", g.entities, "--catalog", g.catalog, "--k", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadLines(dir.File("augmented.jsonl")).size(), 20u);
  EXPECT_NE(r.out.find("augmented items: 20"), std::string::npos);
}

TEST(CliTest, ConfigFilePrecedence) {
  TempDir dir;
  std::string out = dir.path().string();
  std::vector<DatasetItem> items = testing::FilmDataset(testing::FilmWorld{}, 200);
  std::string dataset = testing::WriteDataset(dir.File("data.jsonl"), items);
  WriteFile(dir.File("run.conf"), "seed = 1\nproportion = 0.5\nsubsample.proportion = 0.1\n");
  RunResult r = RunCli({"--config", dir.File("run.conf"), "subsample", "--out", out,
                        "--dataset", dataset});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadLines(dir.File("subsample.jsonl")).size(), 20u);
  r = RunCli({"--config", dir.File("run.conf"), "subsample", "--out", out, "--dataset", dataset,
              "--proportion", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadLines(dir.File("subsample.jsonl")).size(), 10u);

  WriteFile(dir.File("bad.conf"), "bogus = 1\n");
  r = RunCli({"--config", dir.File("bad.conf"), "subsample", "--out", out, "--dataset", dataset});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("unknown config key"), std::string::npos);
}

TEST(CliTest, Evaluate) {
  TempDir dir;
  WriteFile(dir.File("pred.jsonl"),
            "{\"id\": \"b\", \"question\": \"who is it\"}\n"
            "{\"id\": \"a\", \"prediction\": \"what is this\"}\n");
  WriteFile(dir.File("ref.jsonl"),
            "{\"id\": \"a\", \"question\": \"what is this\"}\n"
            "{\"id\": \"b\", \"question\": \"who is it\"}\n");
  RunResult r = RunCli({"evaluate", "--out", dir.path().string(), "--predictions",
                        dir.File("pred.jsonl"), "--references", dir.File("ref.jsonl")});
  ASSERT_EQ(r.code, 0) << r.err;
  nlohmann::json m = nlohmann::json::parse(ReadFile(dir.File("metrics.json")));
  EXPECT_NEAR(m.at("bleu4").get<double>(), 100.0, 1e-9);
  EXPECT_NEAR(m.at("meteor").get<double>(), 100.0, 1e-9);
  EXPECT_NEAR(m.at("rougeL").get<double>(), 100.0, 1e-9);
  EXPECT_EQ(ReadLines(dir.File("metrics.items.jsonl")).size(), 2u);

  WriteFile(dir.File("short.jsonl"), "{\"id\": \"a\", \"question\": \"what is this\"}\n");
  r = RunCli({"evaluate", "--out", dir.path().string(), "--predictions",
              dir.File("short.jsonl"), "--references", dir.File("ref.jsonl")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("no prediction for id b"), std::string::npos);
}

}  // namespace
}  // namespace sparql2q
