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

#include "kb_store.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "text.hpp"

namespace kbqa {

const char* to_string(LiteralKind kind) noexcept {
  switch (kind) {
    case LiteralKind::string: return "string";
    case LiteralKind::integer: return "integer";
    case LiteralKind::floating: return "float";
    case LiteralKind::datetime: return "datetime";
  }
  return "string";
}

ValueClass value_class(LiteralKind kind) noexcept {
  switch (kind) {
    case LiteralKind::integer:
    case LiteralKind::floating: return ValueClass::numeric;
    case LiteralKind::datetime: return ValueClass::datetime;
    case LiteralKind::string: break;
  }
  return ValueClass::string;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool looks_integer(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!is_digit(s[i])) return false;
  return true;
}

bool looks_float(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t mantissa_digits = 0;
  bool dot = false;
  for (; i < s.size() && (is_digit(s[i]) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (dot) return false;
      dot = true;
    } else {
      ++mantissa_digits;
    }
  }
  if (mantissa_digits == 0) return false;
  bool exponent = false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    exponent = true;
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    for (; i < s.size() && is_digit(s[i]); ++i) ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == s.size() && (dot || exponent);
}

struct DateTimeKey {
  long year = 0;
  int month = 0, day = 0, hour = 0, minute = 0;
  double second = 0;
  auto operator<=>(const DateTimeKey&) const = default;
};

bool take_digits(std::string_view s, std::size_t& i, std::size_t n, long& out) {
  if (i + n > s.size()) return false;
  long v = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!is_digit(s[i + k])) return false;
    v = v * 10 + (s[i + k] - '0');
  }
  i += n;
  out = v;
  return true;
}

// Accepts [-]YYYY-MM[-DD[Thh:mm[:ss[.fff]]][Z|(+|-)hh:mm]]. A bare year is an
// integer, so at least the month must be present.
std::optional<DateTimeKey> parse_datetime(std::string_view s) {
  DateTimeKey key;
  std::size_t i = 0;
  bool negative = false;
  if (i < s.size() && s[i] == '-') {
    negative = true;
    ++i;
  }
  long v = 0;
  if (!take_digits(s, i, 4, v)) return std::nullopt;
  key.year = negative ? -v : v;
  if (i >= s.size() || s[i] != '-') return std::nullopt;
  ++i;
  if (!take_digits(s, i, 2, v) || v < 1 || v > 12) return std::nullopt;
  key.month = static_cast<int>(v);
  if (i == s.size()) return key;
  if (s[i] != '-') return std::nullopt;
  ++i;
  if (!take_digits(s, i, 2, v) || v < 1 || v > 31) return std::nullopt;
  key.day = static_cast<int>(v);
  if (i == s.size()) return key;
  if (s[i] == 'T') {
    ++i;
    if (!take_digits(s, i, 2, v) || v > 24) return std::nullopt;
    key.hour = static_cast<int>(v);
    if (i >= s.size() || s[i] != ':') return std::nullopt;
    ++i;
    if (!take_digits(s, i, 2, v) || v > 59) return std::nullopt;
    key.minute = static_cast<int>(v);
    if (i < s.size() && s[i] == ':') {
      ++i;
      if (!take_digits(s, i, 2, v) || v > 60) return std::nullopt;
      key.second = static_cast<double>(v);
      if (i < s.size() && s[i] == '.') {
        ++i;
        double scale = 0.1;
        std::size_t start = i;
        for (; i < s.size() && is_digit(s[i]); ++i, scale /= 10) key.second += (s[i] - '0') * scale;
        if (i == start) return std::nullopt;
      }
    }
  }
  if (i == s.size()) return key;
  if (s[i] == 'Z' && i + 1 == s.size()) return key;
  if (s[i] == '+' || s[i] == '-') {
    ++i;
    if (!take_digits(s, i, 2, v)) return std::nullopt;
    if (i >= s.size() || s[i] != ':') return std::nullopt;
    ++i;
    if (!take_digits(s, i, 2, v)) return std::nullopt;
    if (i == s.size()) return key;
  }
  return std::nullopt;
}

template <typename T>
std::strong_ordering order_of(const T& a, const T& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

Literal Literal::sniff(std::string raw) {
  LiteralKind kind = LiteralKind::string;
  if (looks_integer(raw)) kind = LiteralKind::integer;
  else if (looks_float(raw)) kind = LiteralKind::floating;
  else if (parse_datetime(raw)) kind = LiteralKind::datetime;
  return Literal{std::move(raw), kind};
}

std::strong_ordering compare_literals(const Literal& a, const Literal& b) {
  ValueClass ca = value_class(a.kind);
  if (ca != value_class(b.kind))
    throw LiteralTypeError("cannot compare " + std::string(to_string(a.kind)) + " '" + a.raw +
                           "' with " + to_string(b.kind) + " '" + b.raw + "'");
  switch (ca) {
    case ValueClass::numeric: {
      if (a.kind == LiteralKind::integer && b.kind == LiteralKind::integer) {
        long long x = 0, y = 0;
        auto ra = std::from_chars(a.raw.data() + (a.raw[0] == '+'), a.raw.data() + a.raw.size(), x);
        auto rb = std::from_chars(b.raw.data() + (b.raw[0] == '+'), b.raw.data() + b.raw.size(), y);
        if (ra.ec == std::errc() && rb.ec == std::errc()) return x <=> y;
      }
      double x = std::strtod(a.raw.c_str(), nullptr);
      double y = std::strtod(b.raw.c_str(), nullptr);
      return order_of(x, y);
    }
    case ValueClass::datetime:
      return order_of(*parse_datetime(a.raw), *parse_datetime(b.raw));
    case ValueClass::string:
      break;
  }
  return a.raw <=> b.raw;
}

std::string endpoint_text(const Endpoint& e) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Literal>) return v.raw;
        else return v.value;
      },
      e);
}

AdjacencyTable::AdjacencyTable(std::size_t rows,
                               std::vector<std::pair<std::uint32_t, Adjacent>> entries) {
  std::sort(entries.begin(), entries.end());
  offsets_.assign(rows + 1, 0);
  edges_.reserve(entries.size());
  for (const auto& [row, adj] : entries) {
    ++offsets_[row + 1];
    edges_.push_back(adj);
  }
  for (std::size_t r = 0; r < rows; ++r) offsets_[r + 1] += offsets_[r];
}

std::span<const Adjacent> AdjacencyTable::row(std::uint32_t r) const {
  if (r + 1 >= offsets_.size()) return {};
  return std::span<const Adjacent>(edges_).subspan(offsets_[r], offsets_[r + 1] - offsets_[r]);
}

std::span<const Adjacent> AdjacencyTable::row(std::uint32_t r, std::uint32_t relation) const {
  auto all = row(r);
  auto lo = std::lower_bound(all.begin(), all.end(), relation,
                             [](const Adjacent& a, std::uint32_t rel) { return a.relation < rel; });
  auto hi = std::upper_bound(lo, all.end(), relation,
                             [](std::uint32_t rel, const Adjacent& a) { return rel < a.relation; });
  return {lo, hi};
}

namespace {

struct Term {
  bool literal = false;
  std::string text;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class LineParser {
 public:
  LineParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  void skip_ws() {
    while (pos_ < s_.size() && text::is_space(s_[pos_])) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  Term read_term(bool allow_literal, const char* role) {
    skip_ws();
    if (at_end()) fail(std::string("missing ") + role);
    char c = s_[pos_];
    if (c == '<') {
      std::size_t end = s_.find('>', pos_ + 1);
      if (end == std::string_view::npos) fail(std::string("unterminated IRI in ") + role);
      Term t{false, std::string(s_.substr(pos_ + 1, end - pos_ - 1))};
      pos_ = end + 1;
      if (t.text.empty()) fail(std::string("empty IRI in ") + role);
      return t;
    }
    if (c == '"') {
      if (!allow_literal) fail(std::string("literal not allowed as ") + role);
      return Term{true, read_quoted()};
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && !text::is_space(s_[pos_])) ++pos_;
    return Term{false, std::string(s_.substr(start, pos_ - start))};
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_); }

 private:
  std::string read_quoted() {
    ++pos_;
    std::string out;
    for (;;) {
      if (at_end()) fail("unterminated literal");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) fail("dangling escape in literal");
      char e = s_[pos_++];
      switch (e) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '"': out.push_back('"'); break;
        case '\'': out.push_back('\''); break;
        case '\\': out.push_back('\\'); break;
        case 'u':
        case 'U': {
          std::size_t n = e == 'u' ? 4 : 8;
          if (pos_ + n > s_.size()) fail("short unicode escape");
          std::uint32_t cp = 0;
          auto r = std::from_chars(s_.data() + pos_, s_.data() + pos_ + n, cp, 16);
          if (r.ec != std::errc() || r.ptr != s_.data() + pos_ + n) fail("bad unicode escape");
          pos_ += n;
          append_utf8(out, cp);
          break;
        }
        default: fail(std::string("unknown escape \\") + e);
      }
    }
    // Language tags and datatypes are accepted and dropped.
    if (pos_ < s_.size() && s_[pos_] == '@') {
      ++pos_;
      while (pos_ < s_.size() && (text::is_alnum(s_[pos_]) || s_[pos_] == '-')) ++pos_;
    } else if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (pos_ < s_.size() && s_[pos_] == '<') {
        std::size_t end = s_.find('>', pos_);
        if (end == std::string_view::npos) fail("unterminated datatype IRI");
        pos_ = end + 1;
      } else {
        while (pos_ < s_.size() && !text::is_space(s_[pos_])) ++pos_;
      }
    }
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

struct RawRecord {
  std::string subject;
  std::string predicate;
  Term object;
  std::size_t line;
};

std::optional<RawRecord> parse_line(std::string_view line, std::size_t line_no) {
  LineParser p(line, line_no);
  p.skip_ws();
  if (p.at_end() || p.peek() == '#') return std::nullopt;
  RawRecord rec;
  rec.line = line_no;
  rec.subject = p.read_term(false, "subject").text;
  rec.predicate = p.read_term(false, "predicate").text;
  rec.object = p.read_term(true, "object");
  p.skip_ws();
  if (!p.at_end() && p.peek() == '.') {
    p.read_term(false, "terminator");
  } else if (!rec.object.literal && rec.object.text.size() > 1 && rec.object.text.back() == '.') {
    rec.object.text.pop_back();
  } else {
    p.fail("expected '.' after object");
  }
  p.skip_ws();
  if (!p.at_end() && p.peek() != '#') p.fail("trailing content after '.'");
  return rec;
}

template <typename Map>
std::optional<std::uint32_t> lookup(const Map& m, std::string_view key) {
  auto it = m.find(std::string(key));
  if (it == m.end()) return std::nullopt;
  return it->second;
}

struct FactHash {
  std::size_t operator()(const Fact& f) const noexcept {
    std::uint64_t h = f.head;
    h = h * 0x9E3779B97F4A7C15ULL ^ f.relation;
    h = h * 0x9E3779B97F4A7C15ULL ^ (static_cast<std::uint64_t>(f.tail.kind) << 32 | f.tail.index);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace

KbStore KbStore::load_ntriples(std::istream& in, const LoadOptions& options) {
  if (options.name_relation.empty()) throw ConfigError("name_relation must be declared");
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto rec = parse_line(line, line_no)) {
      if (rec->predicate == options.name_relation && !rec->object.literal)
        throw ParseError("name relation requires a literal object", line_no);
      if (!options.type_relation.empty() && rec->predicate == options.type_relation &&
          rec->object.literal)
        throw ParseError("type relation requires a class id object", line_no);
      records.push_back(std::move(*rec));
    }
  }

  KbStore store;
  store.options_ = options;

  std::set<std::string> entity_ids, relation_ids, literal_raws, class_ids;
  auto is_type = [&](const RawRecord& r) {
    return !options.type_relation.empty() && r.predicate == options.type_relation;
  };
  for (const auto& r : records) {
    entity_ids.insert(r.subject);
    relation_ids.insert(r.predicate);
    if (r.object.literal) literal_raws.insert(r.object.text);
    else if (is_type(r)) class_ids.insert(r.object.text);
    else entity_ids.insert(r.object.text);
  }

  for (const auto& id : entity_ids) {
    store.entity_index_.emplace(id, static_cast<std::uint32_t>(store.entities_.size()));
    store.entities_.push_back(Entity{EntityId(id), {}, {}, {}, {}});
  }
  for (const auto& rel : relation_ids) {
    store.relation_index_.emplace(rel, static_cast<std::uint32_t>(store.relations_.size()));
    store.relations_.push_back(rel);
  }
  for (const auto& raw : literal_raws) {
    store.literal_index_.emplace(raw, static_cast<std::uint32_t>(store.literals_.size()));
    store.literals_.push_back(Literal::sniff(raw));
  }
  for (const auto& c : class_ids) {
    store.class_index_.emplace(c, static_cast<std::uint32_t>(store.classes_.size()));
    store.classes_.push_back(c);
  }
  store.name_relation_ = lookup(store.relation_index_, options.name_relation);
  if (!options.type_relation.empty())
    store.type_relation_ = lookup(store.relation_index_, options.type_relation);

  std::unordered_set<Fact, FactHash> seen;
  seen.reserve(records.size());
  for (const auto& r : records) {
    Fact f;
    f.head = store.entity_index_.at(r.subject);
    f.relation = store.relation_index_.at(r.predicate);
    if (r.object.literal) f.tail = Node{Node::Kind::literal, store.literal_index_.at(r.object.text)};
    else if (is_type(r)) f.tail = Node{Node::Kind::klass, store.class_index_.at(r.object.text)};
    else f.tail = Node{Node::Kind::entity, store.entity_index_.at(r.object.text)};
    if (!seen.insert(f).second) continue;
    store.facts_.push_back(f);

    Entity& head = store.entities_[f.head];
    if (store.name_relation_ && f.relation == *store.name_relation_) {
      if (!head.canonical_name) {
        head.canonical_name = r.object.text;
      } else if (*head.canonical_name != r.object.text) {
        store.warnings_.push_back("line " + std::to_string(r.line) + ": entity " + head.id.value +
                                  " has conflicting name '" + r.object.text + "'; keeping '" +
                                  *head.canonical_name + "'");
      }
    } else if (is_type(r)) {
      head.types.emplace_back(r.object.text);
    } else if (!options.alias_relation.empty() && r.predicate == options.alias_relation &&
               r.object.literal) {
      head.aliases.push_back(r.object.text);
    }
  }
  for (auto& e : store.entities_) {
    e.assigned_name = e.canonical_name;
    std::sort(e.types.begin(), e.types.end());
  }
  store.build_indexes();
  return store;
}

KbStore KbStore::load_ntriples(std::string_view text, const LoadOptions& options) {
  std::istringstream in{std::string(text)};
  return load_ntriples(in, options);
}

KbStore KbStore::load_ntriples_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open KB file " + path);
  try {
    return load_ntriples(in, options);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void KbStore::build_indexes() {
  std::vector<std::pair<std::uint32_t, Adjacent>> fwd, inv_e, inv_l, inv_c;
  fwd.reserve(facts_.size());
  relation_facts_.assign(relations_.size(), {});
  for (std::uint32_t i = 0; i < facts_.size(); ++i) {
    const Fact& f = facts_[i];
    relation_facts_[f.relation].push_back(i);
    fwd.push_back({f.head, Adjacent{f.relation, f.tail}});
    Adjacent back{f.relation, Node{Node::Kind::entity, f.head}};
    switch (f.tail.kind) {
      case Node::Kind::entity: inv_e.push_back({f.tail.index, back}); break;
      case Node::Kind::literal: inv_l.push_back({f.tail.index, back}); break;
      case Node::Kind::klass: inv_c.push_back({f.tail.index, back}); break;
    }
  }
  forward_ = AdjacencyTable(entities_.size(), std::move(fwd));
  inverse_entity_ = AdjacencyTable(entities_.size(), std::move(inv_e));
  inverse_literal_ = AdjacencyTable(literals_.size(), std::move(inv_l));
  inverse_class_ = AdjacencyTable(classes_.size(), std::move(inv_c));
}

const Entity& KbStore::entity(const EntityId& id) const {
  auto idx = find_entity(id.value);
  if (!idx) throw NotFoundError("unknown entity id '" + id.value + "'");
  return entities_[*idx];
}

std::optional<std::uint32_t> KbStore::find_entity(std::string_view id) const {
  return lookup(entity_index_, id);
}

Triple KbStore::triple(std::size_t fact_index) const {
  const Fact& f = facts_.at(fact_index);
  return Triple{entities_[f.head].id, relations_[f.relation], endpoint(f.tail)};
}

std::vector<Edge> KbStore::neighbors(const EntityId& id, Direction direction) const {
  auto idx = find_entity(id.value);
  if (!idx) throw NotFoundError("unknown entity id '" + id.value + "'");
  auto row = direction == Direction::forward ? forward_.row(*idx)
                                             : inverse_entity_.row(*idx);
  std::vector<Edge> out;
  out.reserve(row.size());
  for (const Adjacent& a : row) out.push_back(Edge{relations_[a.relation], endpoint(a.other)});
  return out;
}

EntityId KbStore::resolve_name(std::string_view name) const {
  if (!disambiguated_) throw ContractError("resolve_name requires a disambiguated store");
  auto idx = find_by_name(name);
  if (!idx) throw NotFoundError("no entity named '" + std::string(name) + "'");
  return entities_[*idx].id;
}

std::optional<std::uint32_t> KbStore::find_by_name(std::string_view name) const {
  return lookup(name_index_, name);
}

std::optional<std::uint32_t> KbStore::find_relation(std::string_view relation) const {
  return lookup(relation_index_, relation);
}

std::optional<std::uint32_t> KbStore::find_literal(std::string_view raw) const {
  return lookup(literal_index_, raw);
}

std::optional<std::uint32_t> KbStore::find_class(std::string_view id) const {
  return lookup(class_index_, id);
}

std::span<const Adjacent> KbStore::in_edges(Node node) const {
  switch (node.kind) {
    case Node::Kind::entity: return inverse_entity_.row(node.index);
    case Node::Kind::literal: return inverse_literal_.row(node.index);
    case Node::Kind::klass: return inverse_class_.row(node.index);
  }
  return {};
}

std::span<const Adjacent> KbStore::in_edges(Node node, std::uint32_t relation) const {
  switch (node.kind) {
    case Node::Kind::entity: return inverse_entity_.row(node.index, relation);
    case Node::Kind::literal: return inverse_literal_.row(node.index, relation);
    case Node::Kind::klass: return inverse_class_.row(node.index, relation);
  }
  return {};
}

std::span<const std::uint32_t> KbStore::relation_facts(std::uint32_t relation) const {
  if (relation >= relation_facts_.size()) return {};
  return relation_facts_[relation];
}

bool KbStore::has_type(std::uint32_t entity, std::uint32_t klass) const {
  if (!type_relation_) return false;
  auto row = forward_.row(entity, *type_relation_);
  return std::binary_search(row.begin(), row.end(),
                            Adjacent{*type_relation_, Node{Node::Kind::klass, klass}});
}

Endpoint KbStore::endpoint(Node node) const {
  switch (node.kind) {
    case Node::Kind::entity: return entities_[node.index].id;
    case Node::Kind::literal: return literals_[node.index];
    case Node::Kind::klass: return ClassId(classes_[node.index]);
  }
  return EntityId();
}

std::string KbStore::display(Node node) const {
  switch (node.kind) {
    case Node::Kind::entity: {
      const Entity& e = entities_[node.index];
      return e.assigned_name ? *e.assigned_name : e.id.value;
    }
    case Node::Kind::literal: return literals_[node.index].raw;
    case Node::Kind::klass: return classes_[node.index];
  }
  return {};
}

KbStore disambiguate_names(const KbStore& store) {
  KbStore out = store;
  out.name_index_.clear();

  // Groups iterate in name order; members are already in ascending id order
  // because the entity table is sorted by id.
  std::map<std::string, std::vector<std::uint32_t>> groups;
  std::unordered_set<std::string> taken;
  for (std::uint32_t i = 0; i < out.entities_.size(); ++i) {
    const Entity& e = out.entities_[i];
    if (!e.canonical_name) continue;
    groups[*e.canonical_name].push_back(i);
    taken.insert(*e.canonical_name);
  }

  for (const auto& [name, members] : groups) {
    out.entities_[members[0]].assigned_name = name;
    std::size_t k = 0;
    for (std::size_t m = 1; m < members.size(); ++m) {
      ++k;
      std::string candidate = name + " v" + std::to_string(k);
      while (taken.contains(candidate)) {
        out.warnings_.push_back("suffix '" + candidate + "' already in use; skipping for " +
                                out.entities_[members[m]].id.value);
        ++k;
        candidate = name + " v" + std::to_string(k);
      }
      taken.insert(candidate);
      out.entities_[members[m]].assigned_name = std::move(candidate);
    }
  }

  for (std::uint32_t i = 0; i < out.entities_.size(); ++i) {
    const Entity& e = out.entities_[i];
    if (e.assigned_name) out.name_index_.emplace(*e.assigned_name, i);
  }
  out.disambiguated_ = true;
  return out;
}

KbStore load_kb(const std::string& path, const LoadOptions& options) {
  return disambiguate_names(KbStore::load_ntriples_file(path, options));
}

}  // namespace kbqa
