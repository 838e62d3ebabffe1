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

#include <optional>
#include <string>

#include <json.hpp>

#include "combiner.hpp"
#include "http_client.hpp"
#include "kb_store.hpp"
#include "lf_engine.hpp"

namespace kbqa {

enum class RetrieverKind { sparse, dense };
enum class AnswerMode { single, multi };

struct EmbeddingConfig {
  std::string kind = "hash";  // hash | remote
  std::size_t dim = 64;
  std::uint64_t seed = 0x6b627161;
  std::string url;
};

/// Declarative run description. Relative paths are resolved against the
/// directory of the config file.
struct PipelineConfig {
  std::string kb_path;
  LoadOptions load;
  std::string dataset_path;
  std::string output_dir = "out";
  std::string passages_dir;  // default: <output_dir>/passages

  std::size_t max_words = 100;
  bool strip_relation_domain = true;
  std::size_t shard_size = 10000;

  RetrieverKind retriever = RetrieverKind::sparse;
  std::size_t k = 100;
  double bm25_k1 = 0.9;
  double bm25_b = 0.4;
  EmbeddingConfig embedding;

  std::string mock_fixture;
  std::string reader_url;
  RemoteOptions remote;

  CombinationConfig combination;
  AnswerMode mode = AnswerMode::single;
  std::size_t threads = 0;  // 0: hardware concurrency, capped at 8

  std::string sparse_index_path() const;
  std::string dense_index_path() const;
  std::string retrieval_path() const;
  std::string predictions_path() const;
  std::string answer_log_path() const;

  /// Throws ConfigError for out-of-range values.
  void validate() const;
};

/// Throws ConfigError for unreadable files, bad JSON or unknown keys.
PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_json(const nlohmann::json& j, const std::string& base_dir);

/// Command-line overrides; unset fields leave the config untouched.
struct ConfigOverrides {
  std::optional<std::size_t> k;
  std::optional<std::size_t> beam;
  std::optional<double> lambda;
  std::optional<std::string> score_fn;
  std::optional<std::string> mode;
  std::optional<std::string> reader_url;
  std::optional<std::string> mock_fixture;
};

void apply_overrides(PipelineConfig& cfg, const ConfigOverrides& o);

/// Every command returns a JSON summary. "failures" > 0 in the answer
/// summary means some questions could not be answered.
nlohmann::json cmd_linearize(const PipelineConfig& cfg);
nlohmann::json cmd_index_sparse(const PipelineConfig& cfg);
nlohmann::json cmd_index_dense(const PipelineConfig& cfg);
nlohmann::json cmd_retrieve(const PipelineConfig& cfg);
nlohmann::json cmd_answer(const PipelineConfig& cfg);
nlohmann::json cmd_eval(const PipelineConfig& cfg);
/// Parses, binds and executes one logical form against the configured KB.
nlohmann::json cmd_execute(const PipelineConfig& cfg, const std::string& logical_form);

nlohmann::json execution_to_json(const lf::Execution& ex);

}  // namespace kbqa
