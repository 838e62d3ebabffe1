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

#include "linearizer.hpp"

#include <algorithm>
#include <unordered_map>

#include "text.hpp"

namespace kbqa {

std::string Document::body() const {
  std::string out;
  for (const Sentence& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out.append(s.text);
  }
  return out;
}

namespace {

std::string render_tail(const KbStore& store, Node tail) {
  if (tail.kind == Node::Kind::klass) return text::replace_relation_punctuation(store.class_at(tail.index));
  return store.display(tail);
}

std::string render_cvt_relation(const std::string& relation, bool strip_domain) {
  if (strip_domain && std::count(relation.begin(), relation.end(), '.') >= 2)
    return text::replace_relation_punctuation(relation.substr(relation.find('.') + 1));
  return text::replace_relation_punctuation(relation);
}

bool is_name_fact(const KbStore& store, const Fact& f) {
  return store.name_relation() && f.relation == *store.name_relation();
}

bool is_type_fact(const KbStore& store, const Fact& f) {
  return store.type_relation() && f.relation == *store.type_relation();
}

bool is_cvt_entity(const KbStore& store, Node n) {
  return n.kind == Node::Kind::entity && store.entity_at(n.index).is_cvt();
}

// Renders the incident facts of one CVT node. `named` receives the named
// entities adjacent to it.
std::vector<Sentence> render_cvt_group(const KbStore& store, std::uint32_t cvt,
                                       const std::vector<std::size_t>& incident,
                                       const LinearizeOptions& options,
                                       std::vector<std::uint32_t>& named,
                                       std::vector<std::string>* warnings) {
  std::vector<Sentence> out;
  const std::string& cvt_id = store.entity_at(cvt).id.value;
  for (std::size_t fi : incident) {
    const Fact& f = store.facts()[fi];
    if (is_type_fact(store, f)) continue;
    Node other = f.head == cvt ? f.tail : Node{Node::Kind::entity, f.head};
    if (is_cvt_entity(store, other)) {
      if (warnings)
        warnings->push_back("CVT " + cvt_id + ": skipping neighbouring CVT " +
                            store.entity_at(other.index).id.value);
      continue;
    }
    if (other.kind == Node::Kind::entity) named.push_back(other.index);
    std::string rel = render_cvt_relation(store.relation_name(f.relation), options.strip_relation_domain);
    out.push_back(Sentence{text::normalize_whitespace(rel + " " + render_tail(store, other) + "."), fi});
  }
  std::sort(named.begin(), named.end());
  named.erase(std::unique(named.begin(), named.end()), named.end());
  if (named.empty()) {
    if (warnings) warnings->push_back("CVT " + cvt_id + " has no named neighbours");
    out.clear();
  }
  return out;
}

}  // namespace

Sentence linearize_triple(const KbStore& store, std::size_t fact_index) {
  if (fact_index >= store.facts().size()) throw NotFoundError("fact index out of range");
  const Fact& f = store.facts()[fact_index];
  const Entity& head = store.entity_at(f.head);
  if (head.is_cvt())
    throw ContractError("linearize_triple: head " + head.id.value + " is a CVT node");
  std::string s = *head.assigned_name;
  s += ' ';
  s += text::replace_relation_punctuation(store.relation_name(f.relation));
  s += ' ';
  s += render_tail(store, f.tail);
  s += '.';
  return Sentence{text::normalize_whitespace(s), fact_index};
}

std::vector<Sentence> linearize_cvt(const KbStore& store, std::uint32_t cvt,
                                    const LinearizeOptions& options,
                                    std::vector<std::string>* warnings) {
  if (cvt >= store.entity_count()) throw NotFoundError("entity index out of range");
  if (!store.entity_at(cvt).is_cvt())
    throw ContractError("linearize_cvt: " + store.entity_at(cvt).id.value + " is not a CVT node");
  std::vector<std::size_t> incident;
  const auto facts = store.facts();
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const Fact& f = facts[i];
    if (f.head == cvt || (f.tail.kind == Node::Kind::entity && f.tail.index == cvt))
      incident.push_back(i);
  }
  std::vector<std::uint32_t> named;
  return render_cvt_group(store, cvt, incident, options, named, warnings);
}

void for_each_document(const KbStore& store, const LinearizeOptions& options,
                       const std::function<void(Document&&)>& visit,
                       std::vector<std::string>* warnings) {
  const auto facts = store.facts();
  const std::size_t n = store.entity_count();

  std::vector<std::vector<std::size_t>> direct(n);
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> incident;
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const Fact& f = facts[i];
    bool head_cvt = store.entity_at(f.head).is_cvt();
    bool tail_cvt = is_cvt_entity(store, f.tail);
    if (head_cvt) incident[f.head].push_back(i);
    if (tail_cvt && !(head_cvt && f.tail.index == f.head)) incident[f.tail.index].push_back(i);
    if (!head_cvt && !tail_cvt && !is_name_fact(store, f)) direct[f.head].push_back(i);
  }

  std::vector<std::uint32_t> cvts;
  cvts.reserve(incident.size());
  for (const auto& [cvt, _] : incident) cvts.push_back(cvt);
  std::sort(cvts.begin(), cvts.end());

  std::unordered_map<std::uint32_t, std::vector<Sentence>> groups;
  std::vector<std::vector<std::uint32_t>> attached(n);
  for (std::uint32_t cvt : cvts) {
    std::vector<std::uint32_t> named;
    auto sentences = render_cvt_group(store, cvt, incident[cvt], options, named, warnings);
    if (sentences.empty()) continue;
    for (std::uint32_t e : named) attached[e].push_back(cvt);
    groups.emplace(cvt, std::move(sentences));
  }

  for (std::uint32_t e = 0; e < n; ++e) {
    const Entity& entity = store.entity_at(e);
    if (entity.is_cvt()) continue;
    if (direct[e].empty() && attached[e].empty()) continue;

    auto& order = direct[e];
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const Fact& fa = facts[a];
      const Fact& fb = facts[b];
      if (fa.relation != fb.relation) return fa.relation < fb.relation;
      if (fa.tail != fb.tail) return fa.tail < fb.tail;
      return a < b;
    });

    Document doc;
    doc.head = entity.id;
    doc.title = *entity.assigned_name;
    for (std::size_t fi : order) doc.sentences.push_back(linearize_triple(store, fi));
    for (std::uint32_t cvt : attached[e]) {
      const auto& g = groups.at(cvt);
      doc.sentences.insert(doc.sentences.end(), g.begin(), g.end());
    }
    visit(std::move(doc));
  }
}

std::vector<Document> build_documents(const KbStore& store, const LinearizeOptions& options,
                                      std::vector<std::string>* warnings) {
  std::vector<Document> docs;
  for_each_document(store, options, [&](Document&& d) { docs.push_back(std::move(d)); }, warnings);
  return docs;
}

std::vector<Passage> chunk_passages(const Document& doc, std::size_t max_words) {
  if (max_words == 0) throw ContractError("max_words must be >= 1");
  std::vector<Passage> out;
  std::vector<std::string_view> current;

  auto flush = [&] {
    if (current.empty()) return;
    Passage p;
    p.id = doc.head.value + "#" + std::to_string(out.size());
    p.title = doc.title;
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (i) p.body.push_back(' ');
      p.body.append(current[i]);
    }
    p.word_count = current.size();
    out.push_back(std::move(p));
    current.clear();
  };

  for (const Sentence& s : doc.sentences) {
    auto words = text::split_words(s.text);
    if (current.size() + words.size() <= max_words) {
      current.insert(current.end(), words.begin(), words.end());
      continue;
    }
    flush();
    std::size_t i = 0;
    while (words.size() - i > max_words) {
      current.assign(words.begin() + static_cast<std::ptrdiff_t>(i),
                     words.begin() + static_cast<std::ptrdiff_t>(i + max_words));
      flush();
      i += max_words;
    }
    current.assign(words.begin() + static_cast<std::ptrdiff_t>(i), words.end());
  }
  flush();
  return out;
}

std::vector<Passage> linearize_store(const KbStore& store, const LinearizeOptions& options,
                                     std::vector<std::string>* warnings) {
  std::vector<Passage> passages;
  for_each_document(
      store, options,
      [&](Document&& d) {
        auto chunks = chunk_passages(d, options.max_words);
        passages.insert(passages.end(), std::make_move_iterator(chunks.begin()),
                        std::make_move_iterator(chunks.end()));
      },
      warnings);
  return passages;
}

}  // namespace kbqa
