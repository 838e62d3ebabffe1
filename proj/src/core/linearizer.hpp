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
#include <functional>
#include <string>
#include <vector>

#include "kb_store.hpp"

namespace kbqa {

struct Sentence {
  std::string text;
  // Indexes into KbStore::facts() the sentence was rendered from.
  std::size_t source_fact = 0;
};

struct Document {
  EntityId head;
  std::string title;
  std::vector<Sentence> sentences;

  /// Sentences joined by single spaces.
  std::string body() const;
};

struct Passage {
  std::string id;  // "{entity_id}#{chunk_index}"
  std::string title;
  std::string body;
  std::size_t word_count = 0;

  friend bool operator==(const Passage&, const Passage&) = default;
};

struct LinearizeOptions {
  // Drops the leading domain segment of CVT relations with three or more
  // segments ("people.marriage.spouse" renders as "marriage spouse").
  bool strip_relation_domain = true;
  std::size_t max_words = 100;
};

/// "head relation tail." for a triple whose head is a named entity.
/// Throws ContractError when the head is a CVT node.
Sentence linearize_triple(const KbStore& store, std::size_t fact_index);

/// Sentences for every triple incident to `cvt`, without the CVT id, in
/// source order. Neighbouring CVT nodes are skipped with a warning; a node
/// without named neighbours yields nothing.
std::vector<Sentence> linearize_cvt(const KbStore& store, std::uint32_t cvt,
                                    const LinearizeOptions& options = {},
                                    std::vector<std::string>* warnings = nullptr);

/// Visits one document per named entity with at least one rendered sentence,
/// in ascending entity id order. Direct triples come first sorted by
/// (relation, tail); attached CVT groups follow in CVT id order.
void for_each_document(const KbStore& store, const LinearizeOptions& options,
                       const std::function<void(Document&&)>& visit,
                       std::vector<std::string>* warnings = nullptr);

std::vector<Document> build_documents(const KbStore& store, const LinearizeOptions& options = {},
                                      std::vector<std::string>* warnings = nullptr);

/// Greedy split on sentence boundaries, falling back to a hard word split for
/// sentences longer than max_words. Joining the bodies with single spaces
/// reproduces doc.body().
std::vector<Passage> chunk_passages(const Document& doc, std::size_t max_words = 100);

/// Linearizes and chunks the whole store.
std::vector<Passage> linearize_store(const KbStore& store, const LinearizeOptions& options = {},
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace kbqa
