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

#include <string>
#include <vector>

namespace kbqa {

/// Set of answer strings that remembers insertion order, so the first item
/// is the designated top answer. Strings are whitespace-normalised, empty
/// strings dropped and duplicates collapsed onto their first occurrence.
/// Equality is set equality.
class AnswerSet {
 public:
  AnswerSet() = default;
  explicit AnswerSet(const std::vector<std::string>& answers);
  AnswerSet(std::initializer_list<std::string> answers)
      : AnswerSet(std::vector<std::string>(answers)) {}

  const std::vector<std::string>& items() const noexcept { return items_; }
  bool empty() const noexcept { return items_.empty(); }
  std::size_t size() const noexcept { return items_.size(); }
  const std::string& top() const { return items_.at(0); }
  bool contains(const std::string& normalized) const;

  /// Canonical identity: sorted items joined by U+241F.
  const std::string& key() const noexcept { return key_; }
  /// Sorted items joined by " | ".
  std::string render() const;

  friend bool operator==(const AnswerSet& a, const AnswerSet& b) { return a.key_ == b.key_; }

 private:
  std::vector<std::string> items_;
  std::vector<std::string> sorted_;
  std::string key_;
};

}  // namespace kbqa
