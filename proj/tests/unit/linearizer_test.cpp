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

#include <doctest.h>

#include "generators.hpp"
#include "linearizer.hpp"
#include "oracles.hpp"
#include "text.hpp"

using namespace kbqa;

namespace {

const std::string kData = KBQA_TEST_DATA_DIR;

std::string joined(const std::vector<Sentence>& s) {
  std::string out;
  for (const auto& x : s) out += (out.empty() ? "" : " ") + x.text;
  return out;
}

const Document* find_doc(const std::vector<Document>& docs, const std::string& id) {
  for (const auto& d : docs)
    if (d.head.value == id) return &d;
  return nullptr;
}

}  // namespace

TEST_CASE("single triple sentence") {
  KbStore s = load_kb(kData + "/golden/freescape.nt");
  std::size_t dev = 0;
  for (std::size_t i = 0; i < s.triple_count(); ++i)
    if (s.triple(i).relation == "game_engine.developer") dev = i;
  CHECK(linearize_triple(s, dev).text == "Freescape game engine developer Incentive Software.");
}

TEST_CASE("engine document groups sentences by head") {
  KbStore s = load_kb(kData + "/golden/freescape.nt");
  auto docs = build_documents(s);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].title == "Freescape");
  CHECK(docs[0].body() == "Freescape game engine developer Incentive Software. Freescape release date 1987.");
  auto passages = chunk_passages(docs[0]);
  REQUIRE(passages.size() == 1);
  CHECK(passages[0].id == "m.0fsc#0");
  CHECK(passages[0].word_count == 10);
}

TEST_CASE("marriage CVT passage") {
  KbStore s = load_kb(kData + "/golden/marriage.nt");
  auto cvt = s.find_entity("m.02h98gq");
  REQUIRE(cvt);
  CHECK(joined(linearize_cvt(s, *cvt)) ==
        "marriage spouse Richard Nixon. marriage spouse Pat Nixon. marriage location of ceremony The Mission Inn "
        "Hotel & Spa.");
  // The group is attached to every named participant.
  auto docs = build_documents(s);
  CHECK(docs.size() == 3);
  for (const auto& d : docs) CHECK(d.body().find("m.02h98gq") == std::string::npos);
  const Document* nixon = find_doc(docs, "m.nixon");
  REQUIRE(nixon);
  CHECK(nixon->body() ==
        "marriage spouse Richard Nixon. marriage spouse Pat Nixon. marriage location of ceremony The Mission Inn "
        "Hotel & Spa.");
}

TEST_CASE("domain stripping applies to three-segment CVT relations") {
  KbStore s = load_kb(kData + "/toy/kb.nt");
  auto cvt = s.find_entity("m.02h98gq");
  REQUIRE(cvt);
  CHECK(joined(linearize_cvt(s, *cvt)) ==
        "marriage spouse Richard Nixon. marriage spouse Pat Nixon. marriage location of ceremony The Mission Inn "
        "Hotel & Spa. marriage from 1940-06-21.");
  LinearizeOptions keep;
  keep.strip_relation_domain = false;
  CHECK(joined(linearize_cvt(s, *cvt, keep)).rfind("people marriage spouse Richard Nixon.", 0) == 0);
}

TEST_CASE("CVT heads cannot be linearized directly") {
  KbStore s = load_kb(kData + "/golden/marriage.nt");
  std::size_t checked = 0;
  for (std::size_t i = 0; i < s.triple_count(); ++i) {
    if (s.triple(i).head.value != "m.02h98gq") continue;
    CHECK_THROWS_AS(linearize_triple(s, i), ContractError);
    ++checked;
  }
  CHECK(checked == 3);
}

TEST_CASE("isolated CVT nodes warn and render nothing") {
  KbStore s = disambiguate_names(KbStore::load_ntriples("<m.c1> <x.y> <m.c2> .\n<m.c2> <x.z> \"5\" .\n"));
  std::vector<std::string> warnings;
  auto docs = build_documents(s, {}, &warnings);
  CHECK(docs.empty());
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("documents come in ascending id order") {
  KbStore s = load_kb(kData + "/toy/kb.nt");
  auto docs = build_documents(s);
  for (std::size_t i = 1; i < docs.size(); ++i) CHECK(docs[i - 1].head < docs[i].head);
  const Document* sun = find_doc(docs, "m.0b9wr");
  REQUIRE(sun);
  CHECK(sun->title == "Sun v1");
  CHECK(sun->body() == "Sun v1 music artist genre R&B. Sun v1 type object type music musical group.");
}

TEST_CASE("chunking splits at sentence boundaries") {
  Document d;
  d.head = EntityId("m.x");
  d.title = "X";
  d.sentences = {{"a b c.", 0}, {"d e.", 1}, {"f g h i.", 2}};
  auto p = chunk_passages(d, 5);
  REQUIRE(p.size() == 2);
  CHECK(p[0].body == "a b c. d e.");
  CHECK(p[1].body == "f g h i.");
  CHECK(p[1].id == "m.x#1");

  d.sentences = {{"one two three four five six seven.", 0}};
  p = chunk_passages(d, 3);
  REQUIRE(p.size() == 3);
  CHECK(p[0].body == "one two three");
  CHECK(p[2].body == "seven.");
  CHECK_THROWS_AS(chunk_passages(d, 0), ContractError);
}

TEST_CASE("chunking properties on random documents") {
  gen::Rng rng(11);
  for (int round = 0; round < 200; ++round) {
    Document d = gen::document(rng, 30, round % 3 == 0 ? 140 : 25);
    auto passages = chunk_passages(d, 100);
    std::string rebuilt;
    bool oversized = false;
    for (const auto& s : d.sentences) oversized |= text::word_count(s.text) > 100;
    for (const auto& p : passages) {
      CHECK(p.word_count <= 100);
      CHECK(p.word_count == text::word_count(p.body));
      rebuilt += (rebuilt.empty() ? "" : " ") + p.body;
      if (!oversized) CHECK(p.body.back() == '.');
    }
    CHECK(rebuilt == d.body());
  }
}
