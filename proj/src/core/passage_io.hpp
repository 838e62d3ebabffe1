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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "linearizer.hpp"

namespace kbqa {

struct ShardInfo {
  std::string file;
  std::size_t count = 0;
  std::string checksum;
};

struct PassageManifest {
  std::size_t passage_count = 0;
  std::size_t document_count = 0;
  std::vector<ShardInfo> shards;
  // FNV-1a over every shard's bytes in shard order.
  std::string checksum;
};

std::string passage_to_jsonl(const Passage& p);
Passage passage_from_json(std::string_view line);

/// Writes passages-NNNNN.jsonl shards plus manifest.json into `dir`
/// (created if missing). shard_size 0 means a single shard.
PassageManifest write_passage_shards(const std::string& dir, std::span<const Passage> passages,
                                     std::size_t shard_size, std::size_t document_count);

PassageManifest read_manifest(const std::string& dir);

/// Reads every shard listed in the manifest, verifying counts.
std::vector<Passage> read_passages(const std::string& dir);

/// Reads a single JSON-lines passage file.
std::vector<Passage> read_passages_jsonl(const std::string& path);

/// Id -> passage lookup over an owned passage list.
class PassageLookup {
 public:
  PassageLookup() = default;
  explicit PassageLookup(std::vector<Passage> passages);

  const Passage* find(std::string_view id) const;
  /// Throws NotFoundError.
  const Passage& at(std::string_view id) const;
  std::span<const Passage> all() const noexcept { return passages_; }
  std::size_t size() const noexcept { return passages_.size(); }

 private:
  std::vector<Passage> passages_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace kbqa
