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

#ifndef SPARQL2Q_GENERATE_H_
#define SPARQL2Q_GENERATE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sparql2q {

// Which model a backend stands in for: the auto-prompter (serialized atom to
// description) or the question generator (SPARQL plus prompt to question).
enum class GenerationRole { kPrompter, kQuestion };

std::string_view RoleName(GenerationRole role);

struct GenerationConfig {
  int beam_size = 10;
  double length_penalty = 1.0;
  size_t max_input_length = 512;   // whitespace tokens
  size_t max_output_length = 128;  // whitespace tokens
  bool lowercase_inputs = false;

  // Decoding defaults per role: 128 output tokens for questions, 512 for
  // prompter descriptions.
  static GenerationConfig ForRole(GenerationRole role);
  // Throws Error(kInvalidArgument) when beam size or a length is below 1.
  void Validate() const;
};

struct GenerationRequest {
  std::vector<std::string> inputs;
  GenerationConfig config;
};

struct GenerationResult {
  std::vector<std::string> outputs;  // top-1 hypothesis per input
  std::vector<std::optional<double>> scores;
};

// Keeps the first `max_tokens` whitespace tokens, joined by single spaces.
// Markers are whole tokens, so they are never split.
std::string TruncateTokens(std::string_view text, size_t max_tokens,
                           bool *truncated = nullptr);

// Shareable generator handle; Generate may be called concurrently.
class Generator {
 public:
  virtual ~Generator() = default;

  // Validates the config, truncates over-long inputs, runs the backend and
  // checks the result shape. Throws Error(kProtocolError) when the backend
  // returns a wrong count or an empty string.
  GenerationResult Generate(const GenerationRequest &request) const;

  virtual std::string_view name() const = 0;

 protected:
  virtual std::vector<std::string> Run(const std::vector<std::string> &inputs,
                                       const GenerationConfig &config) const = 0;
};

// Deterministic local backend. Prompter role: the fallback verbalization of
// the parsed atom. Question role: "what is ?x such that: " + prompt text,
// lowercased.
std::shared_ptr<Generator> MakeTemplateBackend(GenerationRole role);

// Question-role template applied to one "SPARQL prompt" input.
std::string TemplateQuestion(std::string_view input);
// Prompter-role template applied to one serialized atom.
std::string TemplateDescription(std::string_view serialized);

struct RemoteOptions {
  std::string endpoint;  // http://host:port
  double timeout_seconds = 30.0;
  int retries = 3;          // total attempts per batch
  size_t batch_size = 16;   // inputs per request
  size_t concurrency = 4;   // requests in flight
};

// Client for the /generate wire protocol. Transport failures are retried up
// to `retries` attempts and then raise TransportError; a non-success status
// raises Error(kProtocolError) carrying the response body.
std::shared_ptr<Generator> MakeRemoteBackend(const RemoteOptions &options);

}  // namespace sparql2q

#endif  // SPARQL2Q_GENERATE_H_
