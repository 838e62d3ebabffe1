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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <set>
#include <sstream>

namespace kbqa::oracle {

namespace {

std::vector<std::string> simple_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : s) {
    bool keep = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
    if (keep) {
      cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : static_cast<char>(c));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::vector<Scored> bm25(const std::vector<Passage>& passages, const std::string& query, std::size_t k, double k1,
                         double b) {
  const double n = static_cast<double>(passages.size());
  std::vector<std::vector<std::string>> docs;
  double total = 0;
  for (const auto& p : passages) {
    docs.push_back(simple_tokens(p.body));
    total += static_cast<double>(docs.back().size());
  }
  const double avg = passages.empty() ? 0.0 : total / n;

  std::vector<std::string> terms;
  for (const auto& t : simple_tokens(query))
    if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);

  std::vector<double> dfs;
  for (const auto& t : terms) {
    double df = 0;
    for (const auto& other : docs)
      if (std::find(other.begin(), other.end(), t) != other.end()) df += 1;
    dfs.push_back(df);
  }

  std::vector<Scored> all;
  for (std::size_t d = 0; d < passages.size(); ++d) {
    double score = 0.0;
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
      const std::string& t = terms[ti];
      const double df = dfs[ti];
      if (df == 0) continue;
      double tf = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), t));
      if (tf == 0) continue;
      double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
      double len = static_cast<double>(docs[d].size());
      score += idf * tf / (tf + k1 * (1.0 - b + b * len / avg));
    }
    if (score > 0) all.push_back({passages[d].id, score});
  }
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b2) {
    if (a.score != b2.score) return a.score > b2.score;
    return a.id < b2.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

std::vector<Scored> dense(const std::vector<std::string>& ids, const std::vector<float>& matrix, std::size_t dim,
                          const std::vector<float>& query, std::size_t k) {
  std::vector<Scored> all;
  for (std::size_t r = 0; r < ids.size(); ++r) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) s += static_cast<double>(matrix[r * dim + j]) * static_cast<double>(query[j]);
    all.push_back({ids[r], s});
  }
  std::sort(all.begin(), all.end(), [](const Scored& a, const Scored& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

namespace {

// Values are tagged strings: "E:<id>", "L:<raw>", "C:<class>".
using Values = std::set<std::string>;

struct Failure {
  lf::ExecStatus status;
};

struct Naive {
  const KbStore& store;
  std::vector<Triple> triples;
  std::string type_rel;

  explicit Naive(const KbStore& s) : store(s), type_rel(s.options().type_relation) {
    for (std::size_t i = 0; i < s.triple_count(); ++i) triples.push_back(s.triple(i));
  }

  static std::string tag(const Endpoint& e) {
    if (auto* id = std::get_if<EntityId>(&e)) return "E:" + id->value;
    if (auto* l = std::get_if<Literal>(&e)) return "L:" + l->raw;
    return "C:" + std::get<ClassId>(e).value;
  }

  void check_relation(const std::string& r) const {
    for (const auto& t : triples)
      if (t.relation == r) return;
    throw Failure{lf::ExecStatus::unknown_relation};
  }

  Values eval(const lf::Expr& e) {
    using namespace lf;
    if (auto* r = std::get_if<EntityRef>(&e.node)) {
      if (r->by == EntityRef::By::name) throw Failure{ExecStatus::unbound_entity};
      for (const auto& ent : store.entities())
        if (ent.id.value == r->value) return {"E:" + r->value};
      throw Failure{ExecStatus::unknown_entity};
    }
    if (auto* c = std::get_if<ClassRef>(&e.node)) {
      Values out;
      for (const auto& t : triples)
        if (t.relation == type_rel && tag(t.tail) == "C:" + c->id) out.insert("E:" + t.head.value);
      return out;
    }
    if (auto* l = std::get_if<LiteralRef>(&e.node)) return {"L:" + l->value.raw};
    if (auto* j = std::get_if<Join>(&e.node)) {
      check_relation(j->relation.name);
      Values in = eval(*j->inner);
      Values out;
      for (const auto& t : triples) {
        if (t.relation != j->relation.name) continue;
        if (j->relation.reversed) {
          if (in.count("E:" + t.head.value)) out.insert(tag(t.tail));
        } else if (in.count(tag(t.tail))) {
          out.insert("E:" + t.head.value);
        }
      }
      return out;
    }
    if (auto* a = std::get_if<And>(&e.node)) {
      Values l = eval(*a->left);
      Values r = eval(*a->right);
      Values out;
      std::set_intersection(l.begin(), l.end(), r.begin(), r.end(), std::inserter(out, out.end()));
      return out;
    }
    if (auto* m = std::get_if<ArgMin>(&e.node)) return extreme(*m->set, m->relation, false);
    if (auto* m = std::get_if<ArgMax>(&e.node)) return extreme(*m->set, m->relation, true);
    if (auto* c = std::get_if<Count>(&e.node)) {
      Values in = eval(*c->set);
      if (in.empty()) return {};
      return {"L:" + std::to_string(in.size())};
    }
    const auto& cmp = std::get<Compare>(e.node);
    check_relation(cmp.relation.name);
    if (cmp.relation.reversed) throw Failure{ExecStatus::type_error};
    Values out;
    for (const auto& t : triples) {
      if (t.relation != cmp.relation.name) continue;
      auto* lit = std::get_if<Literal>(&t.tail);
      if (!lit || value_class(lit->kind) != value_class(cmp.value.kind)) throw Failure{ExecStatus::type_error};
      auto ord = compare_literals(*lit, cmp.value);
      bool keep = cmp.op == CompareOp::lt ? ord < 0 : cmp.op == CompareOp::le ? ord <= 0
                : cmp.op == CompareOp::gt ? ord > 0 : ord >= 0;
      if (keep) out.insert("E:" + t.head.value);
    }
    return out;
  }

  Values extreme(const lf::Expr& set, const lf::RelationRef& r, bool want_max) {
    check_relation(r.name);
    Values in = eval(set);
    std::vector<std::pair<std::string, const Literal*>> vals;
    bool non_literal = false;
    for (const auto& t : triples) {
      if (t.relation != r.name) continue;
      if (r.reversed) {
        if (in.count(tag(t.tail))) non_literal = true;
        continue;
      }
      if (!in.count("E:" + t.head.value)) continue;
      auto* lit = std::get_if<Literal>(&t.tail);
      if (!lit) non_literal = true;
      else vals.push_back({"E:" + t.head.value, lit});
    }
    if (non_literal) throw Failure{lf::ExecStatus::type_error};
    if (vals.empty()) return {};
    for (const auto& v : vals)
      if (value_class(v.second->kind) != value_class(vals.front().second->kind)) throw Failure{lf::ExecStatus::type_error};
    Values out;
    for (const auto& [who, lit] : vals) {
      bool beaten = false;
      for (const auto& other : vals) {
        auto ord = compare_literals(*other.second, *lit);
        if (want_max ? ord > 0 : ord < 0) beaten = true;
      }
      if (!beaten) out.insert(who);
    }
    return out;
  }

  std::string display(const std::string& v) const {
    const std::string body = v.substr(2);
    if (v[0] != 'E') return body;
    for (const auto& ent : store.entities())
      if (ent.id.value == body) return ent.assigned_name ? *ent.assigned_name : body;
    return body;
  }
};

}  // namespace

NaiveResult naive_execute(const lf::Expr& e, const KbStore& store) {
  Naive n(store);
  NaiveResult r;
  Values v;
  try {
    v = n.eval(e);
  } catch (const Failure& f) {
    r.status = f.status;
    return r;
  }
  std::set<std::string> shown;
  for (const auto& x : v) {
    std::string d = n.display(x);
    // Mirror answer-string normalisation: collapse whitespace runs.
    std::string norm;
    for (const auto& w : words(d)) norm += (norm.empty() ? "" : " ") + w;
    if (!norm.empty()) shown.insert(norm);
  }
  r.answers.assign(shown.begin(), shown.end());
  if (r.answers.empty()) r.status = lf::ExecStatus::empty_result;
  return r;
}

std::vector<std::string> combine(const std::vector<std::vector<std::string>>& lf,
                                 const std::vector<std::vector<std::string>>& gen, double lambda, bool reciprocal,
                                 std::size_t beam) {
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  auto s = [&](std::size_t k) { return reciprocal ? 1.0 / static_cast<double>(k) : static_cast<double>(beam - k + 1); };
  auto first_rank = [&](const std::vector<std::vector<std::string>>& list, const std::vector<std::string>& set) {
    for (std::size_t i = 0; i < list.size(); ++i)
      if (sorted(list[i]) == set) return i + 1;
    return std::size_t{0};
  };
  if (lf.empty()) return sorted(gen.front());
  std::set<std::vector<std::string>> candidates;
  for (const auto& a : lf) candidates.insert(sorted(a));
  for (const auto& a : gen) candidates.insert(sorted(a));

  struct Best {
    double score;
    std::size_t lf_rank, gen_rank;
    std::vector<std::string> set;
  };
  std::optional<Best> best;
  const std::size_t none = std::numeric_limits<std::size_t>::max();
  for (const auto& c : candidates) {
    std::size_t i = first_rank(lf, c), j = first_rank(gen, c);
    double score = (i ? lambda * s(i) : 0.0) + (j ? (1.0 - lambda) * s(j) : 0.0);
    Best b{score, i ? i : none, j ? j : none, c};
    std::string rendering;
    for (const auto& x : c) rendering += (rendering.empty() ? "" : " | ") + x;
    std::string best_rendering;
    if (best)
      for (const auto& x : best->set) best_rendering += (best_rendering.empty() ? "" : " | ") + x;
    if (!best || b.score > best->score ||
        (b.score == best->score &&
         std::tie(b.lf_rank, b.gen_rank, rendering) < std::tie(best->lf_rank, best->gen_rank, best_rendering)))
      best = b;
  }
  return best->set;
}

}  // namespace kbqa::oracle
