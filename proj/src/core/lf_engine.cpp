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

#include "lf_engine.hpp"

#include <algorithm>
#include <optional>

#include "text.hpp"

namespace kbqa::lf {

namespace {

constexpr std::size_t kMaxDepth = 256;

enum class TokKind { open, close, bracket, quoted, atom };

struct Token {
  TokKind kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (text::is_space(c)) {
      ++i;
    } else if (c == '(') {
      out.push_back({TokKind::open, "(", i++});
    } else if (c == ')') {
      out.push_back({TokKind::close, ")", i++});
    } else if (c == '[') {
      std::size_t end = s.find(']', i + 1);
      if (end == std::string_view::npos) throw ParseError("unterminated '[' at offset " + std::to_string(i));
      std::string name = text::normalize_whitespace(s.substr(i + 1, end - i - 1));
      if (name.empty()) throw ParseError("empty entity name at offset " + std::to_string(i));
      out.push_back({TokKind::bracket, std::move(name), i});
      i = end + 1;
    } else if (c == '"') {
      std::size_t start = i++;
      std::string value;
      bool closed = false;
      while (i < s.size()) {
        char d = s[i++];
        if (d == '"') {
          closed = true;
          break;
        }
        if (d == '\\' && i < s.size()) d = s[i++];
        value.push_back(d);
      }
      if (!closed) throw ParseError("unterminated string at offset " + std::to_string(start));
      // Datatype or language suffix.
      if (s.substr(i, 2) == "^^" || (i < s.size() && s[i] == '@'))
        while (i < s.size() && !text::is_space(s[i]) && s[i] != '(' && s[i] != ')') ++i;
      out.push_back({TokKind::quoted, std::move(value), start});
    } else {
      std::size_t start = i;
      while (i < s.size() && !text::is_space(s[i]) && s[i] != '(' && s[i] != ')') ++i;
      out.push_back({TokKind::atom, std::string(s.substr(start, i - start)), start});
    }
  }
  return out;
}

bool is_entity_id(std::string_view a) {
  if (a.size() < 3 || (a[0] != 'm' && a[0] != 'g') || a[1] != '.') return false;
  for (std::size_t i = 2; i < a.size(); ++i)
    if (!text::is_alnum(a[i]) && a[i] != '_') return false;
  return true;
}

std::string strip_datatype(std::string_view atom) {
  auto pos = atom.find("^^");
  return std::string(pos == std::string_view::npos ? atom : atom.substr(0, pos));
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Expr parse_all() {
    if (toks_.empty()) throw ParseError("empty logical form");
    Expr e = expr(0);
    if (pos_ != toks_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t off = pos_ < toks_.size() ? toks_[pos_].offset : (toks_.empty() ? 0 : toks_.back().offset);
    throw ParseError(what + " at offset " + std::to_string(off));
  }

  const Token& next(const char* expecting) {
    if (pos_ >= toks_.size()) throw ParseError(std::string("unbalanced parentheses: expected ") + expecting);
    return toks_[pos_++];
  }

  void expect_close() {
    const Token& t = next("')'");
    if (t.kind != TokKind::close) {
      --pos_;
      fail("bad arity: expected ')'");
    }
  }

  Expr expr(std::size_t depth) {
    if (depth > kMaxDepth) fail("logical form nested too deeply");
    const Token& t = next("an expression");
    switch (t.kind) {
      case TokKind::bracket: return Expr{EntityRef{EntityRef::By::name, t.text}};
      case TokKind::quoted: return Expr{LiteralRef{Literal::sniff(t.text)}};
      case TokKind::atom: return atom_expr(t.text);
      case TokKind::close: --pos_; fail("unexpected ')'");
      case TokKind::open: break;
    }
    const Token& head = next("an operator");
    if (head.kind != TokKind::atom) {
      --pos_;
      fail("expected operator");
    }
    const std::string op = upper(head.text);
    Expr result;
    if (op == "AND") {
      Expr l = expr(depth + 1);
      Expr r = expr(depth + 1);
      result = Expr{And{std::move(l), std::move(r)}};
    } else if (op == "JOIN") {
      RelationRef rel = relation(depth + 1);
      Expr inner = expr(depth + 1);
      result = Expr{Join{std::move(rel), std::move(inner)}};
    } else if (op == "ARGMIN" || op == "ARGMAX") {
      Expr set = expr(depth + 1);
      RelationRef rel = relation(depth + 1);
      if (op == "ARGMIN") result = Expr{ArgMin{std::move(set), std::move(rel)}};
      else result = Expr{ArgMax{std::move(set), std::move(rel)}};
    } else if (op == "COUNT") {
      result = Expr{Count{expr(depth + 1)}};
    } else if (op == "LT" || op == "LE" || op == "GT" || op == "GE") {
      CompareOp cop = op == "LT" ? CompareOp::lt : op == "LE" ? CompareOp::le : op == "GT" ? CompareOp::gt : CompareOp::ge;
      RelationRef rel = relation(depth + 1);
      const Token& v = next("a literal");
      Literal value;
      if (v.kind == TokKind::quoted) value = Literal::sniff(v.text);
      else if (v.kind == TokKind::atom) value = Literal::sniff(strip_datatype(v.text));
      else {
        --pos_;
        fail("comparison needs a literal value");
      }
      result = Expr{Compare{cop, std::move(rel), std::move(value)}};
    } else {
      --pos_;
      fail("unknown operator '" + head.text + "'");
    }
    expect_close();
    return result;
  }

  RelationRef relation(std::size_t depth) {
    if (depth > kMaxDepth) fail("logical form nested too deeply");
    const Token& t = next("a relation");
    if (t.kind == TokKind::atom) return RelationRef{t.text, false};
    if (t.kind == TokKind::open) {
      const Token& r = next("R");
      if (r.kind != TokKind::atom || upper(r.text) != "R") {
        --pos_;
        fail("expected (R relation)");
      }
      const Token& name = next("a relation");
      if (name.kind != TokKind::atom) {
        --pos_;
        fail("expected relation id");
      }
      RelationRef rel{name.text, true};
      expect_close();
      return rel;
    }
    --pos_;
    fail("expected relation");
  }

  static Expr atom_expr(const std::string& a) {
    if (is_entity_id(a)) return Expr{EntityRef{EntityRef::By::id, a}};
    if (a.find("^^") != std::string::npos) return Expr{LiteralRef{Literal::sniff(strip_datatype(a))}};
    Literal lit = Literal::sniff(a);
    if (lit.kind != LiteralKind::string) return Expr{LiteralRef{std::move(lit)}};
    return Expr{ClassRef{a}};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

void render_relation(const RelationRef& r, std::string& out) {
  if (r.reversed) {
    out += "(R ";
    out += r.name;
    out += ')';
  } else {
    out += r.name;
  }
}

void render_literal(const Literal& l, std::string& out) {
  if (l.kind != LiteralKind::string) {
    out += l.raw;
    return;
  }
  out += '"';
  for (char c : l.raw) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
}

void render_into(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EntityRef>) {
          if (n.by == EntityRef::By::name) out += "[ " + n.value + " ]";
          else out += n.value;
        } else if constexpr (std::is_same_v<T, ClassRef>) {
          out += n.id;
        } else if constexpr (std::is_same_v<T, LiteralRef>) {
          render_literal(n.value, out);
        } else if constexpr (std::is_same_v<T, Join>) {
          out += "(JOIN ";
          render_relation(n.relation, out);
          out += ' ';
          render_into(*n.inner, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, And>) {
          out += "(AND ";
          render_into(*n.left, out);
          out += ' ';
          render_into(*n.right, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, ArgMin> || std::is_same_v<T, ArgMax>) {
          out += std::is_same_v<T, ArgMin> ? "(ARGMIN " : "(ARGMAX ";
          render_into(*n.set, out);
          out += ' ';
          render_relation(n.relation, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Count>) {
          out += "(COUNT ";
          render_into(*n.set, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Compare>) {
          static constexpr const char* names[] = {"lt", "le", "gt", "ge"};
          out += '(';
          out += names[static_cast<int>(n.op)];
          out += ' ';
          render_relation(n.relation, out);
          out += ' ';
          render_literal(n.value, out);
          out += ')';
        }
      },
      e.node);
}

template <typename F>
Expr map_entities(const Expr& e, const F& f) {
  return std::visit(
      [&](const auto& n) -> Expr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, EntityRef>) return Expr{f(n)};
        else if constexpr (std::is_same_v<T, Join>) return Expr{Join{n.relation, map_entities(*n.inner, f)}};
        else if constexpr (std::is_same_v<T, And>)
          return Expr{And{map_entities(*n.left, f), map_entities(*n.right, f)}};
        else if constexpr (std::is_same_v<T, ArgMin>) return Expr{ArgMin{map_entities(*n.set, f), n.relation}};
        else if constexpr (std::is_same_v<T, ArgMax>) return Expr{ArgMax{map_entities(*n.set, f), n.relation}};
        else if constexpr (std::is_same_v<T, Count>) return Expr{Count{map_entities(*n.set, f)}};
        else return Expr{n};
      },
      e.node);
}

}  // namespace

Expr parse(std::string_view text) { return Parser(lex(text)).parse_all(); }

std::string render(const Expr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

Expr bind_entities(const Expr& e, const KbStore& store) {
  if (!store.disambiguated()) throw ContractError("bind_entities requires a disambiguated store");
  return map_entities(e, [&](const EntityRef& r) {
    if (r.by == EntityRef::By::id) return r;
    auto idx = store.find_by_name(r.value);
    if (!idx) throw BindError("no entity named '" + r.value + "'");
    return EntityRef{EntityRef::By::id, store.entity_at(*idx).id.value};
  });
}

Expr name_entities(const Expr& e, const KbStore& store) {
  return map_entities(e, [&](const EntityRef& r) {
    if (r.by == EntityRef::By::name) return r;
    auto idx = store.find_entity(r.value);
    if (!idx) throw NotFoundError("unknown entity id '" + r.value + "'");
    const Entity& ent = store.entity_at(*idx);
    if (!ent.assigned_name) return r;
    return EntityRef{EntityRef::By::name, *ent.assigned_name};
  });
}

const char* to_string(ExecStatus s) noexcept {
  switch (s) {
    case ExecStatus::ok: return "ok";
    case ExecStatus::parse_error: return "parse_error";
    case ExecStatus::bind_error: return "bind_error";
    case ExecStatus::unbound_entity: return "unbound_entity";
    case ExecStatus::unknown_entity: return "unknown_entity";
    case ExecStatus::unknown_relation: return "unknown_relation";
    case ExecStatus::type_error: return "type_error";
    case ExecStatus::empty_result: return "empty_result";
  }
  return "unknown";
}

namespace {

struct ExecFailure {
  ExecStatus status;
  std::string reason;
};

// Nodes live in the store; literals produced by COUNT or written in the
// logical form but absent from the store are carried separately.
struct ValueSet {
  std::vector<Node> nodes;       // sorted, unique
  std::vector<std::string> extra;  // sorted, unique raw literals

  bool empty() const { return nodes.empty() && extra.empty(); }
  std::size_t size() const { return nodes.size() + extra.size(); }
};

void normalize(std::vector<Node>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

ValueSet literal_value(const KbStore& store, const std::string& raw) {
  ValueSet out;
  if (auto idx = store.find_literal(raw)) out.nodes.push_back(Node{Node::Kind::literal, *idx});
  else out.extra.push_back(raw);
  return out;
}

class Executor {
 public:
  explicit Executor(const KbStore& store) : store_(store) {}

  ValueSet eval(const Expr& e) {
    return std::visit([&](const auto& n) { return eval_node(n); }, e.node);
  }

 private:
  std::uint32_t relation_id(const RelationRef& r) const {
    auto idx = store_.find_relation(r.name);
    if (!idx) throw ExecFailure{ExecStatus::unknown_relation, "unknown relation '" + r.name + "'"};
    return *idx;
  }

  ValueSet eval_node(const EntityRef& r) {
    if (r.by == EntityRef::By::name)
      throw ExecFailure{ExecStatus::unbound_entity, "entity name '" + r.value + "' is not bound"};
    auto idx = store_.find_entity(r.value);
    if (!idx) throw ExecFailure{ExecStatus::unknown_entity, "unknown entity id '" + r.value + "'"};
    return ValueSet{{Node{Node::Kind::entity, *idx}}, {}};
  }

  ValueSet eval_node(const ClassRef& c) {
    ValueSet out;
    auto cls = store_.find_class(c.id);
    auto type_rel = store_.type_relation();
    if (!cls || !type_rel) return out;
    for (const Adjacent& a : store_.in_edges(Node{Node::Kind::klass, *cls}, *type_rel)) out.nodes.push_back(a.other);
    normalize(out.nodes);
    return out;
  }

  ValueSet eval_node(const LiteralRef& l) { return literal_value(store_, l.value.raw); }

  ValueSet eval_node(const Join& j) {
    const std::uint32_t rel = relation_id(j.relation);
    ValueSet inner = eval(*j.inner);
    ValueSet out;
    for (Node n : inner.nodes) {
      if (j.relation.reversed) {
        if (n.kind != Node::Kind::entity) continue;
        for (const Adjacent& a : store_.out_edges(n.index, rel)) out.nodes.push_back(a.other);
      } else {
        for (const Adjacent& a : store_.in_edges(n, rel)) out.nodes.push_back(a.other);
      }
    }
    normalize(out.nodes);
    return out;
  }

  ValueSet eval_node(const And& a) {
    if (const auto* cls = std::get_if<ClassRef>(&a.left->node)) {
      ValueSet right = eval(*a.right);
      ValueSet out;
      auto c = store_.find_class(cls->id);
      if (!c) return out;
      for (Node n : right.nodes)
        if (n.kind == Node::Kind::entity && store_.has_type(n.index, *c)) out.nodes.push_back(n);
      return out;
    }
    ValueSet left = eval(*a.left);
    ValueSet right = eval(*a.right);
    ValueSet out;
    std::set_intersection(left.nodes.begin(), left.nodes.end(), right.nodes.begin(), right.nodes.end(),
                          std::back_inserter(out.nodes));
    std::set_intersection(left.extra.begin(), left.extra.end(), right.extra.begin(), right.extra.end(),
                          std::back_inserter(out.extra));
    return out;
  }

  ValueSet extreme(const Expr& set_expr, const RelationRef& r, bool want_max) {
    const std::uint32_t rel = relation_id(r);
    ValueSet set = eval(set_expr);
    std::vector<std::pair<Node, const Literal*>> values;
    for (Node n : set.nodes) {
      if (r.reversed) {
        if (!store_.in_edges(n, rel).empty()) values.push_back({n, nullptr});
        continue;
      }
      if (n.kind != Node::Kind::entity) continue;
      for (const Adjacent& a : store_.out_edges(n.index, rel))
        values.push_back({n, a.other.kind == Node::Kind::literal ? &store_.literal_at(a.other.index) : nullptr});
    }
    ValueSet out;
    if (values.empty()) return out;
    for (const auto& [n, lit] : values)
      if (!lit) throw ExecFailure{ExecStatus::type_error, "superlative over non-literal values of '" + r.name + "'"};
    const ValueClass cls = value_class(values.front().second->kind);
    for (const auto& [n, lit] : values)
      if (value_class(lit->kind) != cls)
        throw ExecFailure{ExecStatus::type_error, "mixed literal kinds under '" + r.name + "'"};
    const Literal* best = values.front().second;
    for (const auto& [n, lit] : values) {
      auto ord = compare_literals(*lit, *best);
      if (want_max ? ord > 0 : ord < 0) best = lit;
    }
    for (const auto& [n, lit] : values)
      if (compare_literals(*lit, *best) == 0) out.nodes.push_back(n);
    normalize(out.nodes);
    return out;
  }

  ValueSet eval_node(const ArgMin& a) { return extreme(*a.set, a.relation, false); }
  ValueSet eval_node(const ArgMax& a) { return extreme(*a.set, a.relation, true); }

  ValueSet eval_node(const Count& c) {
    ValueSet inner = eval(*c.set);
    if (inner.empty()) return {};
    return literal_value(store_, std::to_string(inner.size()));
  }

  ValueSet eval_node(const Compare& c) {
    const std::uint32_t rel = relation_id(c.relation);
    if (c.relation.reversed)
      throw ExecFailure{ExecStatus::type_error, "comparison over reversed relation '" + c.relation.name + "'"};
    ValueSet out;
    for (std::uint32_t fi : store_.relation_facts(rel)) {
      const Fact& f = store_.facts()[fi];
      if (f.tail.kind != Node::Kind::literal)
        throw ExecFailure{ExecStatus::type_error, "comparison over non-literal values of '" + c.relation.name + "'"};
      const Literal& v = store_.literal_at(f.tail.index);
      if (value_class(v.kind) != value_class(c.value.kind))
        throw ExecFailure{ExecStatus::type_error, "cannot compare '" + v.raw + "' with '" + c.value.raw + "'"};
      auto ord = compare_literals(v, c.value);
      bool keep = false;
      switch (c.op) {
        case CompareOp::lt: keep = ord < 0; break;
        case CompareOp::le: keep = ord <= 0; break;
        case CompareOp::gt: keep = ord > 0; break;
        case CompareOp::ge: keep = ord >= 0; break;
      }
      if (keep) out.nodes.push_back(Node{Node::Kind::entity, f.head});
    }
    normalize(out.nodes);
    return out;
  }

  const KbStore& store_;
};

}  // namespace

Execution execute(const Expr& e, const KbStore& store) {
  Execution ex;
  ValueSet result;
  try {
    result = Executor(store).eval(e);
  } catch (const ExecFailure& f) {
    ex.status = f.status;
    ex.reason = f.reason;
    return ex;
  } catch (const LiteralTypeError& err) {
    ex.status = ExecStatus::type_error;
    ex.reason = err.what();
    return ex;
  }
  if (result.empty()) {
    ex.status = ExecStatus::empty_result;
    ex.reason = "empty result";
    return ex;
  }
  std::vector<std::string> rendered;
  rendered.reserve(result.size());
  for (Node n : result.nodes) rendered.push_back(store.display(n));
  for (auto& raw : result.extra) rendered.push_back(raw);
  std::sort(rendered.begin(), rendered.end());
  ex.answers = AnswerSet(rendered);
  if (ex.answers.empty()) {
    ex.status = ExecStatus::empty_result;
    ex.reason = "result renders to no answer strings";
  }
  return ex;
}

Execution run_candidate(std::string_view text, const KbStore& store) {
  Expr parsed;
  try {
    parsed = parse(text);
  } catch (const ParseError& e) {
    return Execution{ExecStatus::parse_error, e.what(), {}};
  }
  Expr bound;
  try {
    bound = bind_entities(parsed, store);
  } catch (const BindError& e) {
    return Execution{ExecStatus::bind_error, e.what(), {}};
  }
  return execute(bound, store);
}

}  // namespace kbqa::lf
