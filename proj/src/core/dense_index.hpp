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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "http_client.hpp"
#include "linearizer.hpp"
#include "sparse_index.hpp"

namespace kbqa {

using Vector = std::vector<float>;

enum class EmbedMode { passage, question };

/// Source of passage and question embeddings. Implementations must return
/// vectors of length dim() and be deterministic for identical input.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::size_t dim() const = 0;
  /// Identifies the encoder; an index refuses to be searched with a provider
  /// whose fingerprint differs from the one it was built with.
  virtual std::string fingerprint() const = 0;
  /// Throws TransportError (retriable) when the backend fails.
  virtual std::vector<Vector> embed(EmbedMode mode, std::span<const std::string> texts) const = 0;

  Vector embed_passage(const std::string& text) const;
  Vector embed_question(const std::string& text) const;
};

/// Deterministic bag-of-tokens random projection. Each token seeds a
/// pseudo-random vector; the sum is L2-normalised. Both modes share one
/// encoder.
class HashProjectionProvider final : public EmbeddingProvider {
 public:
  explicit HashProjectionProvider(std::size_t dim = 64, std::uint64_t seed = 0x6b627161);

  std::size_t dim() const override { return dim_; }
  std::string fingerprint() const override;
  std::vector<Vector> embed(EmbedMode mode, std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

/// Fixed text -> vector tables, e.g. embeddings precomputed offline.
class StaticEmbeddingProvider final : public EmbeddingProvider {
 public:
  StaticEmbeddingProvider(std::size_t dim, std::string fingerprint);

  void add(EmbedMode mode, std::string text, Vector v);

  std::size_t dim() const override { return dim_; }
  std::string fingerprint() const override { return fingerprint_; }
  /// Throws NotFoundError for texts without a table entry.
  std::vector<Vector> embed(EmbedMode mode, std::span<const std::string> texts) const override;

 private:
  std::size_t dim_;
  std::string fingerprint_;
  std::unordered_map<std::string, Vector> passages_;
  std::unordered_map<std::string, Vector> questions_;
};

/// Speaks POST /embed {"mode", "texts"} -> {"dim", "vectors"}.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  /// `dim` of 0 asks the service once on first use.
  RemoteEmbeddingProvider(std::string base_url, std::size_t dim = 0, RemoteOptions options = {});

  std::size_t dim() const override;
  std::string fingerprint() const override;
  std::vector<Vector> embed(EmbedMode mode, std::span<const std::string> texts) const override;

 private:
  std::string base_url_;
  mutable std::atomic<std::size_t> dim_;
  RemoteOptions options_;
};

/// Exact inner-product index over float32 passage vectors.
class DenseIndex {
 public:
  DenseIndex() = default;

  /// Embeds every passage body once, in batches, rows ordered by ascending
  /// passage id. Throws DataError on duplicate ids or a dim mismatch and
  /// TransportError naming the first passage of a failed batch.
  static DenseIndex build(std::span<const Passage> passages, const EmbeddingProvider& provider,
                          std::size_t batch_size = 64);

  /// Exhaustive top-k by dot product, ties by ascending passage id.
  /// Throws ContractError when the provider fingerprint does not match.
  std::vector<RetrievedPassage> search(std::string_view question, const EmbeddingProvider& provider,
                                       std::size_t k) const;
  std::vector<RetrievedPassage> search_vector(std::span<const float> query, std::size_t k) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::string& fingerprint() const noexcept { return fingerprint_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(matrix_).subspan(i * dim_, dim_);
  }
  const std::vector<float>& matrix() const noexcept { return matrix_; }

  /// Returns a copy with every row multiplied by `factor`.
  DenseIndex scaled(float factor) const;

  /// Binary layout: magic "KBQADNS1", u32 version, u32 dim, u64 rows,
  /// u32 fingerprint length + bytes, then per row u32 id length + bytes,
  /// then the row-major float32 block. Integers are little-endian.
  void save(const std::string& path) const;
  static DenseIndex load(const std::string& path);

  static DenseIndex from_rows(std::vector<std::string> ids, std::vector<float> matrix, std::size_t dim,
                              std::string fingerprint);

 private:
  std::size_t dim_ = 0;
  std::string fingerprint_;
  std::vector<std::string> ids_;
  std::vector<float> matrix_;
};

}  // namespace kbqa
