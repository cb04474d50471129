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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sparql2q/error.h"
#include "sparql2q/log.h"
#include "sparql2q/prompt.h"
#include "sparql2q/serializer.h"
#include "sparql2q/sparql.h"
#include "sparql2q/text.h"

namespace sparql2q {
namespace {

class TemplateBackend : public Generator {
 public:
  explicit TemplateBackend(GenerationRole role) : role_(role) {}

  std::string_view name() const override {
    return role_ == GenerationRole::kPrompter ? "template-prompter"
                                              : "template-qg";
  }

 protected:
  std::vector<std::string> Run(const std::vector<std::string> &inputs,
                               const GenerationConfig &config) const override {
    std::vector<std::string> out;
    out.reserve(inputs.size());
    for (const std::string &input : inputs) {
      std::string text = role_ == GenerationRole::kPrompter
                             ? TemplateDescription(input)
                             : TemplateQuestion(input);
      out.push_back(TruncateTokens(text, config.max_output_length));
    }
    return out;
  }

 private:
  GenerationRole role_;
};

class RemoteBackend : public Generator {
 public:
  explicit RemoteBackend(RemoteOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) {
      throw Error(ErrorCode::kConfigConflict, "remote backend needs an endpoint");
    }
    options_.retries = std::max(options_.retries, 1);
    options_.batch_size = std::max<size_t>(options_.batch_size, 1);
    options_.concurrency = std::max<size_t>(options_.concurrency, 1);
  }

  std::string_view name() const override { return "remote"; }

 protected:
  std::vector<std::string> Run(const std::vector<std::string> &inputs,
                               const GenerationConfig &config) const override {
    const size_t batches =
        (inputs.size() + options_.batch_size - 1) / options_.batch_size;
    std::vector<std::vector<std::string>> results(batches);
    std::vector<std::exception_ptr> errors(batches);
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t b; (b = next.fetch_add(1)) < batches;) {
        size_t begin = b * options_.batch_size;
        size_t end = std::min(inputs.size(), begin + options_.batch_size);
        std::vector<std::string> batch(inputs.begin() + begin,
                                       inputs.begin() + end);
        try {
          results[b] = Post(batch, config);
        } catch (...) {
          errors[b] = std::current_exception();
        }
      }
    };
    size_t threads = std::min(options_.concurrency, batches);
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
      for (std::thread &t : pool) t.join();
    }
    for (const std::exception_ptr &e : errors) {
      if (e) std::rethrow_exception(e);
    }
    std::vector<std::string> out;
    out.reserve(inputs.size());
    for (std::vector<std::string> &r : results) {
      for (std::string &s : r) out.push_back(std::move(s));
    }
    return out;
  }

 private:
  std::vector<std::string> Post(const std::vector<std::string> &batch,
                                const GenerationConfig &config) const {
    nlohmann::json body = {{"inputs", batch},
                           {"beam_size", config.beam_size},
                           {"length_penalty", config.length_penalty},
                           {"max_length", config.max_output_length}};
    const std::string payload = body.dump();
    httplib::Client client(options_.endpoint);
    auto seconds = std::chrono::duration<double>(options_.timeout_seconds);
    auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(seconds);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    std::string last_error;
    for (int attempt = 1; attempt <= options_.retries; ++attempt) {
      httplib::Result res = client.Post("/generate", payload, "application/json");
      if (!res) {
        last_error = httplib::to_string(res.error());
        LogWarning("generate request to " + options_.endpoint + " failed (" +
                   last_error + "), attempt " + std::to_string(attempt) +
                   " of " + std::to_string(options_.retries));
        if (attempt < options_.retries) {
          std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
        }
        continue;
      }
      if (res->status != 200) {
        throw Error(ErrorCode::kProtocolError,
                    "status " + std::to_string(res->status) + ": " + res->body);
      }
      std::vector<std::string> outputs;
      try {
        nlohmann::json reply = nlohmann::json::parse(res->body);
        outputs = reply.at("outputs").get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception &e) {
        throw Error(ErrorCode::kProtocolError,
                    std::string("malformed response: ") + e.what());
      }
      if (outputs.size() != batch.size()) {
        throw Error(ErrorCode::kProtocolError,
                    "expected " + std::to_string(batch.size()) +
                        " outputs, got " + std::to_string(outputs.size()));
      }
      return outputs;
    }
    throw TransportError(options_.retries,
                         options_.endpoint + " unreachable: " + last_error);
  }

  RemoteOptions options_;
};

}  // namespace

std::string_view RoleName(GenerationRole role) {
  return role == GenerationRole::kPrompter ? "prompter" : "qg";
}

GenerationConfig GenerationConfig::ForRole(GenerationRole role) {
  GenerationConfig config;
  config.max_output_length = role == GenerationRole::kPrompter ? 512 : 128;
  config.lowercase_inputs = role == GenerationRole::kQuestion;
  return config;
}

void GenerationConfig::Validate() const {
  if (beam_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "beam size must be at least 1");
  }
  if (max_input_length < 1 || max_output_length < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "maximum lengths must be at least 1");
  }
}

std::string TruncateTokens(std::string_view text, size_t max_tokens,
                           bool *truncated) {
  std::vector<std::string_view> words = SplitWhitespace(text);
  if (truncated) *truncated = words.size() > max_tokens;
  if (words.size() <= max_tokens) return std::string(text);
  words.resize(max_tokens);
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out.append(words[i]);
  }
  return out;
}

GenerationResult Generator::Generate(const GenerationRequest &request) const {
  request.config.Validate();
  GenerationResult result;
  if (request.inputs.empty()) return result;
  std::vector<std::string> inputs;
  inputs.reserve(request.inputs.size());
  for (size_t i = 0; i < request.inputs.size(); ++i) {
    bool truncated = false;
    std::string input = TruncateTokens(request.inputs[i],
                                       request.config.max_input_length, &truncated);
    if (truncated) {
      LogWarning("input " + std::to_string(i) + " truncated to " +
                 std::to_string(request.config.max_input_length) + " tokens");
    }
    if (request.config.lowercase_inputs) input = ToLower(input);
    inputs.push_back(std::move(input));
  }
  result.outputs = Run(inputs, request.config);
  if (result.outputs.size() != inputs.size()) {
    throw Error(ErrorCode::kProtocolError,
                std::string(name()) + " returned " +
                    std::to_string(result.outputs.size()) + " outputs for " +
                    std::to_string(inputs.size()) + " inputs");
  }
  for (size_t i = 0; i < result.outputs.size(); ++i) {
    if (Trim(result.outputs[i]).empty()) {
      throw Error(ErrorCode::kProtocolError,
                  std::string(name()) + " returned an empty output for input " +
                      std::to_string(i));
    }
  }
  result.scores.resize(result.outputs.size());
  return result;
}

std::string TemplateDescription(std::string_view serialized) {
  std::optional<AtomicSubgraph> atom = ParseSerialized(serialized);
  if (!atom) return std::string(Trim(serialized));
  return FallbackVerbalize(*atom);
}

std::string TemplateQuestion(std::string_view input) {
  std::string_view prompt = input;
  try {
    PrefixParse parsed = ParseQueryPrefix(input);
    prompt = input.substr(parsed.consumed);
  } catch (const Error &) {
    // Not a SPARQL-prefixed input: treat all of it as prompt text.
  }
  return ToLower("what is ?x such that: " + std::string(Trim(prompt)));
}

std::shared_ptr<Generator> MakeTemplateBackend(GenerationRole role) {
  return std::make_shared<TemplateBackend>(role);
}

std::shared_ptr<Generator> MakeRemoteBackend(const RemoteOptions &options) {
  return std::make_shared<RemoteBackend>(options);
}

}  // namespace sparql2q
