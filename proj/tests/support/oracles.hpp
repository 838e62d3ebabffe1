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

// Slow reference implementations used only by tests. They share no code
// with the production modules beyond plain data types.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kb_store.hpp"
#include "lf_engine.hpp"
#include "linearizer.hpp"

namespace kbqa::oracle {

struct Scored {
  std::string id;
  double score = 0.0;
};

/// Recounts tf, df and lengths from the raw bodies for every query.
std::vector<Scored> bm25(const std::vector<Passage>& passages, const std::string& query, std::size_t k,
                         double k1 = 0.9, double b = 0.4);

/// Sorts every row by (dot product desc, id asc).
std::vector<Scored> dense(const std::vector<std::string>& ids, const std::vector<float>& matrix, std::size_t dim,
                          const std::vector<float>& query, std::size_t k);

struct NaiveResult {
  lf::ExecStatus status = lf::ExecStatus::ok;
  std::vector<std::string> answers;  // sorted, unique
};

/// Interprets a bound expression by scanning store.facts() for every step.
NaiveResult naive_execute(const lf::Expr& e, const KbStore& store);

/// Brute-force lambda combination over sorted answer lists. Returns the
/// winning set's sorted items.
std::vector<std::string> combine(const std::vector<std::vector<std::string>>& lf,
                                 const std::vector<std::vector<std::string>>& gen, double lambda, bool reciprocal,
                                 std::size_t beam);

/// Word-level split of text, whitespace separated.
std::vector<std::string> words(const std::string& s);

}  // namespace kbqa::oracle
