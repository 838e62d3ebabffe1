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

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "answer_set.hpp"
#include "kb_store.hpp"

namespace kbqa::lf {

/// Owning, deep-copying pointer used to make the AST a regular value type.
template <typename T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Expr;

struct RelationRef {
  std::string name;
  bool reversed = false;  // (R name)

  friend bool operator==(const RelationRef&, const RelationRef&) = default;
};

/// "[ Incentive Software ]" before binding, "m.0d_qhv" after.
struct EntityRef {
  enum class By : std::uint8_t { name, id };
  By by = By::name;
  std::string value;

  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

struct ClassRef {
  std::string id;
  friend bool operator==(const ClassRef&, const ClassRef&) = default;
};

struct LiteralRef {
  Literal value;
  friend bool operator==(const LiteralRef&, const LiteralRef&) = default;
};

struct Join {
  RelationRef relation;
  Box<Expr> inner;
  friend bool operator==(const Join&, const Join&) = default;
};

struct And {
  Box<Expr> left;
  Box<Expr> right;
  friend bool operator==(const And&, const And&) = default;
};

struct ArgMin {
  Box<Expr> set;
  RelationRef relation;
  friend bool operator==(const ArgMin&, const ArgMin&) = default;
};

struct ArgMax {
  Box<Expr> set;
  RelationRef relation;
  friend bool operator==(const ArgMax&, const ArgMax&) = default;
};

struct Count {
  Box<Expr> set;
  friend bool operator==(const Count&, const Count&) = default;
};

enum class CompareOp : std::uint8_t { lt, le, gt, ge };

struct Compare {
  CompareOp op = CompareOp::lt;
  RelationRef relation;
  Literal value;
  friend bool operator==(const Compare&, const Compare&) = default;
};

struct Expr {
  std::variant<EntityRef, ClassRef, LiteralRef, Join, And, ArgMin, ArgMax, Count, Compare> node;
  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Parses reader output. Set positions classify bare atoms as entity ids
/// (m./g. prefixed), literals (numeric, datetime, quoted or ^^-typed) or
/// class ids. Throws ParseError on any malformed input.
Expr parse(std::string_view text);

/// Inverse of parse: parse(render(e)) == e.
std::string render(const Expr& e);

/// Thrown by bind_entities for names missing from the store.
class BindError : public NotFoundError {
 public:
  using NotFoundError::NotFoundError;
};

/// Replaces every name-form EntityRef with the id it resolves to.
Expr bind_entities(const Expr& e, const KbStore& store);

/// Replaces every id-form EntityRef with the entity's assigned name; CVT
/// nodes keep their id.
Expr name_entities(const Expr& e, const KbStore& store);

enum class ExecStatus : std::uint8_t {
  ok,
  parse_error,
  bind_error,
  unbound_entity,
  unknown_entity,
  unknown_relation,
  type_error,
  empty_result,
};

const char* to_string(ExecStatus s) noexcept;

struct Execution {
  ExecStatus status = ExecStatus::ok;
  std::string reason;
  AnswerSet answers;

  bool executable() const noexcept { return status == ExecStatus::ok; }
};

/// Set-semantics execution of a bound expression. Empty intermediate sets
/// propagate, so an empty final result is reported as empty_result rather
/// than an answer. Never throws for data-dependent failures.
Execution execute(const Expr& e, const KbStore& store);

/// parse -> bind_entities -> execute, folding each failure into the status.
Execution run_candidate(std::string_view text, const KbStore& store);

}  // namespace kbqa::lf
