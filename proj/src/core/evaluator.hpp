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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "answer_set.hpp"
#include "passage_io.hpp"
#include "sparse_index.hpp"

namespace kbqa {

struct DatasetExample {
  std::string qid;
  std::string question;
  AnswerSet gold_answers;
  std::optional<std::string> gold_lf;
  std::optional<std::string> category;  // iid | compositional | zero-shot
};

/// Accepts "i.i.d." and "zero_shot" spellings; returns nullopt for others.
std::optional<std::string> normalize_category(const std::string& raw);

DatasetExample example_from_json(const nlohmann::json& j);
/// Throws DataError with file:line on malformed rows or duplicate qids.
std::vector<DatasetExample> read_dataset(const std::string& path);

struct Prediction {
  std::string qid;
  AnswerSet answers;
  std::string source;  // "lf" | "gen" | "" for failed rows
  std::optional<std::size_t> lf_rank;
  std::optional<std::size_t> gen_rank;
  // B': how many LF candidates executed. Absent in foreign files.
  std::optional<std::size_t> num_executable;
  bool failed = false;
  std::string error;
};

nlohmann::json prediction_to_json(const Prediction& p);
Prediction prediction_from_json(const nlohmann::json& j);
std::vector<Prediction> read_predictions(const std::string& path);

struct ExampleScore {
  int hits1 = 0;
  double f1 = 0.0;
};

/// Hits@1 checks the prediction's first answer; F1 is set overlap. Empty
/// predictions score (0, 0).
ExampleScore score_example(const AnswerSet& pred, const AnswerSet& gold);

struct RetrievalScore {
  int hits = 0;
  double recall = 0.0;
};

/// Word-boundary, case-insensitive containment of `needle` in `haystack`.
bool contains_answer_name(std::string_view haystack, std::string_view needle);

/// Answer-name match of each gold string against the top-k passage bodies.
RetrievalScore retrieval_metrics(std::span<const RetrievedPassage> retrieved, const PassageLookup& passages,
                                 const AnswerSet& gold, std::size_t k);

struct CategoryStats {
  std::size_t count = 0;
  double hits_at_1 = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::size_t count = 0;
  double hits_at_1 = 0.0;
  double f1 = 0.0;
  double non_executable_rate = 0.0;
  std::size_t failed = 0;
  std::map<std::string, CategoryStats> per_category;

  nlohmann::json to_json() const;
  std::string to_table() const;
  /// Bar chart of per-category F1.
  std::string to_svg() const;
};

/// Macro averages, aligned by qid. Throws DataError naming every qid that
/// is missing on either side or duplicated in `preds`.
EvalReport aggregate(std::span<const DatasetExample> examples, std::span<const Prediction> preds);

}  // namespace kbqa
