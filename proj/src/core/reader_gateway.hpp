// Copyright 2026 The kbqa Authors.
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

#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "answer_set.hpp"
#include "http_client.hpp"
#include "passage_io.hpp"
#include "sparse_index.hpp"

namespace kbqa {

enum class OutputKind { answer, logical_form };

inline constexpr const char* kAnswerPrefix = "Question Answering:";
inline constexpr const char* kLogicalFormPrefix = "Semantic Parsing:";

const char* prefix_for(OutputKind kind) noexcept;

struct ReaderPassage {
  std::string title;
  std::string body;
};

struct ReaderInput {
  std::string prefix;
  std::string question;
  std::vector<ReaderPassage> passages;  // retrieval rank order

  /// "{prefix} {question} title: {title} context: {body}" per passage; a
  /// question-only input yields one "{prefix} {question}" entry.
  std::vector<std::string> encoder_texts() const;
};

/// Throws NotFoundError for a retrieved id missing from `passages`.
ReaderInput build_reader_input(const std::string& question, std::span<const RetrievedPassage> retrieved,
                               const PassageLookup& passages, OutputKind kind);

struct CandidateBeam {
  OutputKind kind = OutputKind::answer;
  std::vector<std::string> candidates;  // rank 1 first
  std::size_t beam_size = 0;
};

/// A reader returns rank-ordered raw candidates for one input.
class ReaderBackend {
 public:
  virtual ~ReaderBackend() = default;
  virtual std::vector<std::string> generate(const ReaderInput& input, std::size_t beam_size) const = 0;
};

/// Lookup-table reader backed by a JSON fixture:
/// {"entries": [{"prefix", "question", "candidates": [..]}]}.
class MockReader final : public ReaderBackend {
 public:
  MockReader() = default;
  static MockReader from_json(const nlohmann::json& fixture);
  static MockReader from_file(const std::string& path);

  void add(std::string prefix, std::string question, std::vector<std::string> candidates);
  /// Throws NotFoundError when no entry matches (prefix, question).
  std::vector<std::string> generate(const ReaderInput& input, std::size_t beam_size) const override;

 private:
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> table_;
};

/// Speaks POST /generate.
class RemoteReader final : public ReaderBackend {
 public:
  explicit RemoteReader(std::string base_url, RemoteOptions options = {});
  /// TransportError on timeouts and 5xx, ProtocolError on malformed replies
  /// including non-contiguous ranks.
  std::vector<std::string> generate(const ReaderInput& input, std::size_t beam_size) const override;

  static nlohmann::json request_body(const ReaderInput& input, std::size_t beam_size);
  /// Validates a /generate reply and returns candidates in rank order.
  static std::vector<std::string> parse_response(const nlohmann::json& reply);

 private:
  std::string base_url_;
  RemoteOptions options_;
};

/// Normalises whitespace, collapses duplicates onto their best rank and
/// truncates to `beam_size`. Throws ContractError for beam_size 0.
CandidateBeam call_reader(const ReaderInput& input, std::size_t beam_size, const ReaderBackend& backend);

/// "China | India" -> {"China", "India"}.
AnswerSet split_multi_answer(const std::string& candidate);

}  // namespace kbqa
