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

#include "answer_set.hpp"

#include <algorithm>

#include "text.hpp"

namespace kbqa {

AnswerSet::AnswerSet(const std::vector<std::string>& answers) {
  for (const auto& a : answers) {
    std::string n = text::normalize_whitespace(a);
    if (n.empty()) continue;
    if (std::find(items_.begin(), items_.end(), n) != items_.end()) continue;
    items_.push_back(std::move(n));
  }
  sorted_ = items_;
  std::sort(sorted_.begin(), sorted_.end());
  key_ = text::join(sorted_, "\xE2\x90\x9F");
}

bool AnswerSet::contains(const std::string& normalized) const {
  return std::binary_search(sorted_.begin(), sorted_.end(), normalized);
}

std::string AnswerSet::render() const { return text::join(sorted_, " | "); }

}  // namespace kbqa
