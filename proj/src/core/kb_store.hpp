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

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "error.hpp"

namespace kbqa {

/// Opaque entity identifier, e.g. a Freebase MID such as "m.0d_qhv".
struct EntityId {
  std::string value;

  EntityId() = default;
  explicit EntityId(std::string v) : value(std::move(v)) {}

  friend auto operator<=>(const EntityId&, const EntityId&) = default;
  friend bool operator==(const EntityId&, const EntityId&) = default;
};

/// Schema class identifier, the object of a type_relation triple.
struct ClassId {
  std::string value;

  ClassId() = default;
  explicit ClassId(std::string v) : value(std::move(v)) {}

  friend auto operator<=>(const ClassId&, const ClassId&) = default;
  friend bool operator==(const ClassId&, const ClassId&) = default;
};

enum class LiteralKind : std::uint8_t { string, integer, floating, datetime };

const char* to_string(LiteralKind kind) noexcept;

/// Literals compare only within one of these classes. Integers and floats
/// share the numeric class.
enum class ValueClass : std::uint8_t { numeric, datetime, string };

ValueClass value_class(LiteralKind kind) noexcept;

/// Raised when two literals of different value classes are compared.
class LiteralTypeError : public DataError {
 public:
  using DataError::DataError;
};

struct Literal {
  std::string raw;
  LiteralKind kind = LiteralKind::string;

  /// Types `raw` by its lexical form: integer, then float, then datetime,
  /// falling back to string.
  static Literal sniff(std::string raw);

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Three-way comparison of two literals of the same value class.
/// Throws LiteralTypeError when the classes differ.
std::strong_ordering compare_literals(const Literal& a, const Literal& b);

using Endpoint = std::variant<EntityId, Literal, ClassId>;

/// Raw token of an endpoint: the entity id, the literal lexical form or the class id.
std::string endpoint_text(const Endpoint& e);

struct Triple {
  EntityId head;
  std::string relation;
  Endpoint tail;

  friend bool operator==(const Triple&, const Triple&) = default;
};

struct Entity {
  EntityId id;
  std::optional<std::string> canonical_name;
  // Equal to canonical_name until disambiguate_names() runs.
  std::optional<std::string> assigned_name;
  std::vector<std::string> aliases;
  std::vector<ClassId> types;

  bool is_cvt() const noexcept { return !canonical_name.has_value(); }
};

enum class Direction { forward, inverse };

struct Edge {
  std::string relation;
  Endpoint endpoint;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct LoadOptions {
  std::string name_relation = "type.object.name";
  std::string type_relation = "type.object.type";
  // Empty disables alias collection.
  std::string alias_relation = "common.topic.alias";
};

/// Interned reference to a value stored in a KbStore.
struct Node {
  enum class Kind : std::uint8_t { entity, literal, klass };
  Kind kind = Kind::entity;
  std::uint32_t index = 0;

  friend auto operator<=>(const Node&, const Node&) = default;
};

struct Adjacent {
  std::uint32_t relation;
  Node other;

  friend auto operator<=>(const Adjacent&, const Adjacent&) = default;
};

struct Fact {
  std::uint32_t head;
  std::uint32_t relation;
  Node tail;

  friend bool operator==(const Fact&, const Fact&) = default;
};

/// Compressed adjacency rows, each sorted by (relation, other).
class AdjacencyTable {
 public:
  AdjacencyTable() = default;
  AdjacencyTable(std::size_t rows, std::vector<std::pair<std::uint32_t, Adjacent>> entries);

  std::span<const Adjacent> row(std::uint32_t r) const;
  std::span<const Adjacent> row(std::uint32_t r, std::uint32_t relation) const;
  std::size_t rows() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<Adjacent> edges_;
};

/// Immutable in-memory RDF store with forward and inverse adjacency, CVT
/// awareness and (after disambiguate_names) a bijective name index.
///
/// Intern tables for entities, relations, literals and classes are sorted by
/// their string form, so ordering by index is ordering by text within a kind.
class KbStore {
 public:
  KbStore() = default;

  /// Reads "subject predicate object ." records. Blank lines and lines
  /// starting with '#' are skipped. Throws ParseError with the line number.
  static KbStore load_ntriples(std::istream& in, const LoadOptions& options = {});
  static KbStore load_ntriples(std::string_view text, const LoadOptions& options = {});
  static KbStore load_ntriples_file(const std::string& path, const LoadOptions& options = {});

  const LoadOptions& options() const noexcept { return options_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool disambiguated() const noexcept { return disambiguated_; }

  std::size_t entity_count() const noexcept { return entities_.size(); }
  std::size_t triple_count() const noexcept { return facts_.size(); }
  std::size_t relation_count() const noexcept { return relations_.size(); }

  std::span<const Entity> entities() const noexcept { return entities_; }
  const Entity& entity_at(std::uint32_t index) const { return entities_.at(index); }
  const Entity& entity(const EntityId& id) const;
  std::optional<std::uint32_t> find_entity(std::string_view id) const;

  /// Facts in first-occurrence order of the source, deduplicated.
  std::span<const Fact> facts() const noexcept { return facts_; }
  Triple triple(std::size_t fact_index) const;

  /// Sorted adjacency in the requested direction. Throws NotFoundError.
  std::vector<Edge> neighbors(const EntityId& id, Direction direction) const;

  /// Requires a disambiguated store. Throws NotFoundError for unknown names.
  EntityId resolve_name(std::string_view name) const;
  std::optional<std::uint32_t> find_by_name(std::string_view name) const;

  std::optional<std::uint32_t> find_relation(std::string_view relation) const;
  const std::string& relation_name(std::uint32_t index) const { return relations_.at(index); }
  std::optional<std::uint32_t> find_literal(std::string_view raw) const;
  const Literal& literal_at(std::uint32_t index) const { return literals_.at(index); }
  std::size_t literal_count() const noexcept { return literals_.size(); }
  std::optional<std::uint32_t> find_class(std::string_view id) const;
  const std::string& class_at(std::uint32_t index) const { return classes_.at(index); }
  std::size_t class_count() const noexcept { return classes_.size(); }

  std::optional<std::uint32_t> name_relation() const noexcept { return name_relation_; }
  std::optional<std::uint32_t> type_relation() const noexcept { return type_relation_; }

  std::span<const Adjacent> out_edges(std::uint32_t entity) const { return forward_.row(entity); }
  std::span<const Adjacent> out_edges(std::uint32_t entity, std::uint32_t relation) const {
    return forward_.row(entity, relation);
  }
  std::span<const Adjacent> in_edges(Node node) const;
  std::span<const Adjacent> in_edges(Node node, std::uint32_t relation) const;

  /// Indexes into facts() of every fact using `relation`, in fact order.
  std::span<const std::uint32_t> relation_facts(std::uint32_t relation) const;

  bool has_type(std::uint32_t entity, std::uint32_t klass) const;

  Endpoint endpoint(Node node) const;
  /// Human-facing rendering: assigned name for named entities, the id for
  /// CVT nodes, the lexical form for literals and the id for classes.
  std::string display(Node node) const;

  friend KbStore disambiguate_names(const KbStore& store);

 private:
  void build_indexes();

  LoadOptions options_;
  std::vector<std::string> warnings_;
  bool disambiguated_ = false;

  std::vector<Entity> entities_;
  std::unordered_map<std::string, std::uint32_t> entity_index_;
  std::vector<std::string> relations_;
  std::unordered_map<std::string, std::uint32_t> relation_index_;
  std::vector<Literal> literals_;
  std::unordered_map<std::string, std::uint32_t> literal_index_;
  std::vector<std::string> classes_;
  std::unordered_map<std::string, std::uint32_t> class_index_;
  std::vector<Fact> facts_;

  std::optional<std::uint32_t> name_relation_;
  std::optional<std::uint32_t> type_relation_;

  AdjacencyTable forward_;
  AdjacencyTable inverse_entity_;
  AdjacencyTable inverse_literal_;
  AdjacencyTable inverse_class_;
  std::vector<std::vector<std::uint32_t>> relation_facts_;

  std::unordered_map<std::string, std::uint32_t> name_index_;
};

/// Gives every entity a KB-unique name. Entities sharing a name X are renamed
/// X, "X v1", ... "X v(n-1)" in ascending id order; a suffix that already
/// exists as another name is skipped by incrementing k.
KbStore disambiguate_names(const KbStore& store);

/// load_ntriples_file followed by disambiguate_names.
KbStore load_kb(const std::string& path, const LoadOptions& options = {});

}  // namespace kbqa
