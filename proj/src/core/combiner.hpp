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
#include <vector>

#include "answer_set.hpp"

namespace kbqa {

enum class ScoreFn { reciprocal, linear };

const char* to_string(ScoreFn fn) noexcept;
/// Accepts "reciprocal" / "linear" in any case. Throws ConfigError.
ScoreFn parse_score_fn(const std::string& name);

struct CombinationConfig {
  double lambda = 1.0;
  ScoreFn score_fn = ScoreFn::reciprocal;
  std::size_t beam_size = 10;

  /// Throws ConfigError unless 0 <= lambda <= 1 and beam_size >= 1.
  void validate() const;
};

/// S(k) = 1/k or S(k) = B - k + 1 for a 1-based rank k.
double rank_score(ScoreFn fn, std::size_t rank, std::size_t beam_size);

struct ScoredAnswerSet {
  AnswerSet answers;
  double score = 0.0;
  std::optional<std::size_t> lf_rank;
  std::optional<std::size_t> gen_rank;

  /// "lf" when the set came from an executed logical form, else "gen".
  const char* source() const noexcept { return lf_rank ? "lf" : "gen"; }
};

/// Collapses repeated sets onto their best (first) rank.
std::vector<AnswerSet> dedupe_ranked(const std::vector<AnswerSet>& ranked);

/// Scores every distinct set by lambda*S(lf_rank) + (1-lambda)*S(gen_rank)
/// and returns the best one. Ties go to the better lf_rank, then the better
/// gen_rank, then the smallest rendering. With no executed sets the top
/// generated set is returned. Throws ContractError for empty `gen_answers`.
ScoredAnswerSet combine(const std::vector<AnswerSet>& lf_answers, const std::vector<AnswerSet>& gen_answers,
                        const CombinationConfig& cfg);

}  // namespace kbqa
