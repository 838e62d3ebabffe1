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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "linearizer.hpp"

namespace kbqa {

struct RetrievedPassage {
  std::string passage_id;
  double score = 0;
  std::size_t rank = 0;  // 1-based

  friend bool operator==(const RetrievedPassage&, const RetrievedPassage&) = default;
};

/// Lowercases ASCII and splits on every byte that is not an ASCII letter or
/// digit. Bytes >= 0x80 are kept inside tokens so UTF-8 words survive.
std::vector<std::string> tokenize(std::string_view s);

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

struct Posting {
  std::uint32_t doc;  // ordinal in ascending passage id order
  std::uint32_t tf;

  friend bool operator==(const Posting&, const Posting&) = default;
};

/// BM25 inverted index over passage bodies.
///
///   score(q, d) = sum over distinct t in q of
///       idf(t) * tf / (tf + k1 * (1 - b + b * len(d) / avglen))
///   idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
class SparseIndex {
 public:
  SparseIndex() = default;

  /// Throws DataError on a duplicate passage id.
  static SparseIndex build(std::span<const Passage> passages, Bm25Params params = {});

  /// Top-k by score, ties by ascending passage id; only passages scoring > 0.
  std::vector<RetrievedPassage> search(std::string_view query, std::size_t k) const;

  const Bm25Params& params() const noexcept { return params_; }
  std::size_t size() const noexcept { return doc_ids_.size(); }
  double avg_doc_length() const noexcept { return avg_length_; }
  std::size_t vocabulary_size() const noexcept { return terms_.size(); }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::string& passage_id(std::uint32_t doc) const { return doc_ids_.at(doc); }
  std::uint32_t doc_length(std::uint32_t doc) const { return doc_lengths_.at(doc); }
  /// Empty for out-of-vocabulary terms.
  std::span<const Posting> postings(std::string_view term) const;

  /// JSON layout with a "format"/"version" header.
  void save(const std::string& path) const;
  static SparseIndex load(const std::string& path);

 private:
  Bm25Params params_;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  double avg_length_ = 0;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::uint32_t> vocabulary_;
  std::vector<std::vector<Posting>> postings_;
};

}  // namespace kbqa
