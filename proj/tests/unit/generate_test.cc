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

#include "sparql2q/generate.h"

#include <gtest/gtest.h>

#include <atomic>
#include <mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sparql2q/error.h"
#include "sparql2q/serializer.h"
#include "support/fixtures.h"

namespace sparql2q {
namespace {

// In-process /generate server for wire-protocol tests.
class StubServer {
 public:
  enum class Mode { kEcho, kError, kWrongCount, kEmptyOutput, kMalformed };

  explicit StubServer(Mode mode) : mode_(mode) {
    server_.Post("/generate", [this](const httplib::Request &req, httplib::Response &res) {
      nlohmann::json body = nlohmann::json::parse(req.body);
      {
        std::lock_guard<std::mutex> lock(mutex_);
        requests_.push_back(body);
      }
      std::vector<std::string> inputs = body.at("inputs").get<std::vector<std::string>>();
      std::vector<std::string> outputs;
      for (const std::string &in : inputs) outputs.push_back("gen: " + in);
      switch (mode_) {
        case Mode::kEcho:
          break;
        case Mode::kError:
          res.status = 500;
          res.set_content("model exploded", "text/plain");
          return;
        case Mode::kWrongCount:
          outputs.pop_back();
          break;
        case Mode::kEmptyOutput:
          outputs.back() = "";
          break;
        case Mode::kMalformed:
          res.set_content("{\"nope\": 1}", "application/json");
          return;
      }
      res.set_content(nlohmann::json{{"outputs", outputs}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::vector<nlohmann::json> requests() {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
  }

 private:
  Mode mode_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mutex_;
  std::vector<nlohmann::json> requests_;
};

// A port that was just free; nothing listens on it.
GenerationRequest Request(std::vector<std::string> inputs,
                          GenerationRole role = GenerationRole::kPrompter) {
  return {std::move(inputs), GenerationConfig::ForRole(role)};
}

TEST(GenerationConfigTest, RoleDefaultsAndValidation) {
  GenerationConfig prompter = GenerationConfig::ForRole(GenerationRole::kPrompter);
  GenerationConfig qg = GenerationConfig::ForRole(GenerationRole::kQuestion);
  EXPECT_EQ(prompter.beam_size, 10);
  EXPECT_EQ(prompter.max_output_length, 512u);
  EXPECT_EQ(qg.max_output_length, 128u);
  EXPECT_TRUE(qg.lowercase_inputs);
  EXPECT_FALSE(prompter.lowercase_inputs);
  GenerationConfig bad = prompter;
  bad.beam_size = 0;
  EXPECT_THROW(bad.Validate(), Error);
  bad = prompter;
  bad.max_output_length = 0;
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(GenerateTest, TruncateTokens) {
  bool truncated = false;
  EXPECT_EQ(TruncateTokens("a  b c d", 2, &truncated), "a b");
  EXPECT_TRUE(truncated);
  EXPECT_EQ(TruncateTokens("a  b", 5, &truncated), "a  b");
  EXPECT_FALSE(truncated);
}

TEST(GenerateTest, TemplateBackends) {
  KnowledgeGraph kg = testing::LoadFigureGraph();
  std::string serialized = Serialize(
      SingleAtom(kg, {"m.julius", "people.deceased_person.place_of_death", "m.pompey_theatre"}),
      SerializationStrategy::kEntityName).text;
  std::shared_ptr<Generator> prompter = MakeTemplateBackend(GenerationRole::kPrompter);
  GenerationResult r = prompter->Generate(Request({serialized, "  free text  "}));
  ASSERT_EQ(r.outputs.size(), 2u);
  EXPECT_EQ(r.outputs[0], "Julius Caesar place of death The Theatre of Pompey .");
  EXPECT_EQ(r.outputs[1], "free text");
  EXPECT_EQ(r.scores.size(), 2u);

  std::shared_ptr<Generator> qg = MakeTemplateBackend(GenerationRole::kQuestion);
  GenerationResult q = qg->Generate(Request(
      {"SELECT ?x WHERE { \"Julius Caesar\" people.deceased_person.place_of_death ?x . } "
       "Julius Caesar place of death The Theatre of Pompey (the ?x) ."},
      GenerationRole::kQuestion));
  EXPECT_EQ(q.outputs[0],
            "what is ?x such that: julius caesar place of death the theatre of pompey (the ?x) .");
  EXPECT_EQ(TemplateQuestion("no query here"), "what is ?x such that: no query here");
  EXPECT_TRUE(prompter->Generate(Request({})).outputs.empty());
}

TEST(GenerateTest, TemplateOutputsRespectMaxLength) {
  std::shared_ptr<Generator> qg = MakeTemplateBackend(GenerationRole::kQuestion);
  GenerationRequest request = Request({"one two three four five six"}, GenerationRole::kQuestion);
  request.config.max_output_length = 6;
  EXPECT_EQ(qg->Generate(request).outputs[0], "what is ?x such that: one");
  request.config.max_input_length = 2;
  request.config.max_output_length = 100;
  EXPECT_EQ(qg->Generate(request).outputs[0], "what is ?x such that: one two");
}

TEST(RemoteBackendTest, BatchesAndPreservesOrder) {
  StubServer server(StubServer::Mode::kEcho);
  RemoteOptions options;
  options.endpoint = server.endpoint();
  options.batch_size = 3;
  options.concurrency = 2;
  std::shared_ptr<Generator> remote = MakeRemoteBackend(options);
  std::vector<std::string> inputs;
  for (int i = 0; i < 10; ++i) inputs.push_back("Input " + std::to_string(i));
  GenerationRequest request = Request(inputs, GenerationRole::kQuestion);
  request.config.beam_size = 4;
  request.config.length_penalty = 0.5;
  GenerationResult r = remote->Generate(request);
  ASSERT_EQ(r.outputs.size(), 10u);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(r.outputs[i], "gen: input " + std::to_string(i));
  std::vector<nlohmann::json> requests = server.requests();
  ASSERT_EQ(requests.size(), 4u);
  size_t total = 0;
  for (const nlohmann::json &body : requests) {
    EXPECT_EQ(body.at("beam_size"), 4);
    EXPECT_DOUBLE_EQ(body.at("length_penalty").get<double>(), 0.5);
    EXPECT_EQ(body.at("max_length"), 128);
    size_t n = body.at("inputs").size();
    EXPECT_LE(n, 3u);
    total += n;
  }
  EXPECT_EQ(total, 10u);
}

TEST(RemoteBackendTest, ErrorStatusIsProtocolError) {
  StubServer server(StubServer::Mode::kError);
  std::shared_ptr<Generator> remote = MakeRemoteBackend({server.endpoint()});
  try {
    remote->Generate(Request({"x"}));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocolError);
    EXPECT_NE(std::string(e.what()).find("model exploded"), std::string::npos);
  }
}

TEST(RemoteBackendTest, ShapeViolationsAreProtocolErrors) {
  for (StubServer::Mode mode : {StubServer::Mode::kWrongCount, StubServer::Mode::kEmptyOutput,
                                StubServer::Mode::kMalformed}) {
    StubServer server(mode);
    std::shared_ptr<Generator> remote = MakeRemoteBackend({server.endpoint()});
    try {
      remote->Generate(Request({"a", "b"}));
      ADD_FAILURE() << "no error";
    } catch (const Error &e) {
      EXPECT_EQ(e.code(), ErrorCode::kProtocolError);
    }
  }
}

TEST(RemoteBackendTest, UnreachableServerRetriesThenFails) {
  RemoteOptions options;
  options.endpoint = "http://127.0.0.1:" + std::to_string(testing::UnusedPort());
  options.retries = 2;
  options.timeout_seconds = 2;
  std::shared_ptr<Generator> remote = MakeRemoteBackend(options);
  try {
    remote->Generate(Request({"x"}));
    FAIL();
  } catch (const TransportError &e) {
    EXPECT_EQ(e.attempts(), 2);
    EXPECT_EQ(e.code(), ErrorCode::kTransportError);
  }
}

TEST(RemoteBackendTest, EmptyEndpointIsConfigConflict) {
  try {
    MakeRemoteBackend({});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigConflict);
  }
}

}  // namespace
}  // namespace sparql2q
