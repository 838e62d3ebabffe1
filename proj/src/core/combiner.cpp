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

#include "combiner.hpp"

#include <map>
#include <unordered_set>

#include "error.hpp"
#include "text.hpp"

namespace kbqa {

const char* to_string(ScoreFn fn) noexcept { return fn == ScoreFn::reciprocal ? "reciprocal" : "linear"; }

ScoreFn parse_score_fn(const std::string& name) {
  std::string n = text::to_lower_ascii(name);
  if (n == "reciprocal") return ScoreFn::reciprocal;
  if (n == "linear") return ScoreFn::linear;
  throw ConfigError("unknown score function '" + name + "' (expected reciprocal or linear)");
}

void CombinationConfig::validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
  if (beam_size < 1) throw ConfigError("beam size must be >= 1");
}

double rank_score(ScoreFn fn, std::size_t rank, std::size_t beam_size) {
  if (rank == 0) throw ContractError("ranks start at 1");
  if (fn == ScoreFn::reciprocal) return 1.0 / static_cast<double>(rank);
  return static_cast<double>(beam_size) - static_cast<double>(rank) + 1.0;
}

std::vector<AnswerSet> dedupe_ranked(const std::vector<AnswerSet>& ranked) {
  std::vector<AnswerSet> out;
  std::unordered_set<std::string> seen;
  for (const auto& a : ranked)
    if (seen.insert(a.key()).second) out.push_back(a);
  return out;
}

ScoredAnswerSet combine(const std::vector<AnswerSet>& lf_answers, const std::vector<AnswerSet>& gen_answers,
                        const CombinationConfig& cfg) {
  if (gen_answers.empty()) throw ContractError("combine needs at least one generated answer");
  cfg.validate();
  if (lf_answers.empty()) {
    ScoredAnswerSet out;
    out.answers = gen_answers.front();
    out.gen_rank = 1;
    out.score = (1.0 - cfg.lambda) * rank_score(cfg.score_fn, 1, cfg.beam_size);
    return out;
  }

  std::map<std::string, ScoredAnswerSet> pool;
  auto entry = [&](const AnswerSet& a) -> ScoredAnswerSet& {
    auto [it, fresh] = pool.try_emplace(a.key());
    if (fresh) it->second.answers = a;
    return it->second;
  };
  for (std::size_t i = 0; i < lf_answers.size(); ++i) {
    auto& e = entry(lf_answers[i]);
    if (!e.lf_rank) e.lf_rank = i + 1;
  }
  for (std::size_t i = 0; i < gen_answers.size(); ++i) {
    auto& e = entry(gen_answers[i]);
    if (!e.gen_rank) e.gen_rank = i + 1;
  }

  const ScoredAnswerSet* best = nullptr;
  std::string best_render;
  for (auto& [key, e] : pool) {
    e.score = 0.0;
    if (e.lf_rank) e.score += cfg.lambda * rank_score(cfg.score_fn, *e.lf_rank, cfg.beam_size);
    if (e.gen_rank) e.score += (1.0 - cfg.lambda) * rank_score(cfg.score_fn, *e.gen_rank, cfg.beam_size);
    std::string r = e.answers.render();
    if (!best) {
      best = &e;
      best_render = std::move(r);
      continue;
    }
    auto rank_or_inf = [](const std::optional<std::size_t>& k) { return k ? *k : SIZE_MAX; };
    bool better = false;
    if (e.score != best->score) better = e.score > best->score;
    else if (rank_or_inf(e.lf_rank) != rank_or_inf(best->lf_rank)) better = rank_or_inf(e.lf_rank) < rank_or_inf(best->lf_rank);
    else if (rank_or_inf(e.gen_rank) != rank_or_inf(best->gen_rank)) better = rank_or_inf(e.gen_rank) < rank_or_inf(best->gen_rank);
    else better = r < best_render;
    if (better) {
      best = &e;
      best_render = std::move(r);
    }
  }
  return *best;
}

}  // namespace kbqa
