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

#include <cstdio>
#include <fstream>

#include "error.hpp"
#include "evaluator.hpp"
#include "generators.hpp"
#include "metrics_fixture.hpp"

using namespace kbqa;
using doctest::Approx;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = "/tmp/kbqa_eval_test_" + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("per-example scores") {
  CHECK(score_example({"Ce fut en mai"}, {"Ce fut en mai"}).hits1 == 1);
  CHECK(score_example({"Ce fut en mai"}, {"Ce fut en mai"}).f1 == 1.0);
  auto half = score_example({"a", "b"}, {"b", "c"});
  CHECK(half.f1 == 0.5);
  CHECK(half.hits1 == 0);
  CHECK(score_example({"b", "a"}, {"b", "c"}).hits1 == 1);
  auto none = score_example({}, {"x"});
  CHECK(none.hits1 == 0);
  CHECK(none.f1 == 0.0);
  CHECK_THROWS_AS(score_example({"x"}, {}), ContractError);
}

TEST_CASE("hand-computed fixture") {
  for (const auto& row : fixture::metrics_rows()) {
    CAPTURE(row.pred.empty() ? std::string() : row.pred.front());
    auto s = score_example(AnswerSet(row.pred), AnswerSet(row.gold));
    CHECK(s.hits1 == row.hits1);
    CHECK(s.f1 == Approx(row.f1).epsilon(1e-15));
  }
  auto examples = fixture::metrics_examples();
  auto preds = fixture::metrics_predictions();
  EvalReport rep = aggregate(examples, preds);
  fixture::MetricsTotals want;
  CHECK(rep.count == 10);
  CHECK(rep.hits_at_1 == Approx(want.hits_at_1).epsilon(1e-15));
  CHECK(rep.f1 == Approx(want.f1).epsilon(1e-15));
  CHECK(rep.non_executable_rate == Approx(want.non_executable_rate).epsilon(1e-15));
  REQUIRE(rep.per_category.size() == 3);
  CHECK(rep.per_category["iid"].f1 == Approx(want.iid_f1).epsilon(1e-15));
  CHECK(rep.per_category["iid"].hits_at_1 == Approx(want.iid_hits).epsilon(1e-15));
  CHECK(rep.per_category["compositional"].f1 == Approx(want.compositional_f1).epsilon(1e-15));
  CHECK(rep.per_category["compositional"].hits_at_1 == Approx(want.compositional_hits).epsilon(1e-15));
  CHECK(rep.per_category["zero-shot"].f1 == Approx(want.zero_shot_f1).epsilon(1e-15));
  CHECK(rep.per_category["zero-shot"].hits_at_1 == Approx(want.zero_shot_hits).epsilon(1e-15));

  double weighted = 0;
  for (const auto& [name, c] : rep.per_category) weighted += c.f1 * static_cast<double>(c.count);
  CHECK(weighted / static_cast<double>(rep.count) == Approx(rep.f1).epsilon(1e-12));

  auto j = rep.to_json();
  CHECK(j["count"] == 10);
  CHECK(j["per_category"]["zero-shot"]["count"] == 3);
  CHECK(rep.to_table().find("compositional") != std::string::npos);
  CHECK(rep.to_svg().rfind("<svg", 0) == 0);
}

TEST_CASE("aggregate means") {
  std::vector<DatasetExample> ex(2);
  ex[0].qid = "a";
  ex[0].gold_answers = AnswerSet{"x"};
  ex[1].qid = "b";
  ex[1].gold_answers = AnswerSet{"y"};
  std::vector<Prediction> p(2);
  p[0].qid = "b";
  p[0].answers = AnswerSet{"nope"};
  p[1].qid = "a";
  p[1].answers = AnswerSet{"x"};
  p[1].source = "lf";
  auto rep = aggregate(ex, p);
  CHECK(rep.f1 == 0.5);
  CHECK(rep.hits_at_1 == 0.5);
  CHECK(rep.non_executable_rate == 0.5);
  CHECK(rep.per_category.empty());

  for (auto& x : p) x.answers = AnswerSet{};
  auto empty = aggregate(ex, p);
  CHECK(empty.f1 == 0.0);
  CHECK(empty.hits_at_1 == 0.0);
}

TEST_CASE("misaligned predictions list every offender") {
  auto examples = fixture::metrics_examples();
  auto preds = fixture::metrics_predictions();
  preds.erase(preds.begin() + 2);
  preds.push_back(preds.front());
  Prediction stray;
  stray.qid = "zz";
  preds.push_back(stray);
  try {
    aggregate(examples, preds);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    std::string msg = e.what();
    CHECK(msg.find("no prediction for qid m3") != std::string::npos);
    CHECK(msg.find("duplicate prediction for qid m1") != std::string::npos);
    CHECK(msg.find("unknown qid zz") != std::string::npos);
  }
}

TEST_CASE("answer name matching") {
  CHECK(contains_answer_name("Freescape game engine", "Freescape"));
  CHECK(contains_answer_name("the freescape engine", "FreeScape"));
  CHECK_FALSE(contains_answer_name("Freescapes engine", "Freescape"));
  CHECK_FALSE(contains_answer_name("AFreescape", "Freescape"));
  CHECK(contains_answer_name("genre R&B.", "R&B"));
  CHECK(contains_answer_name("released 1987.", "1987"));
  CHECK_FALSE(contains_answer_name("released 19870", "1987"));
  CHECK(contains_answer_name("Hotel & Spa, Riverside", "Hotel & Spa"));
  CHECK_FALSE(contains_answer_name("anything", ""));
  CHECK(contains_answer_name("x Sun v1 y", "Sun v1"));
}

TEST_CASE("retrieval hits and recall") {
  PassageLookup lookup({{"p1", "t", "Freescape game engine", 3}, {"p2", "t", "only A here", 3}, {"p3", "t", "B later", 2}});
  std::vector<RetrievedPassage> one{{"p1", 1.0, 1}};
  auto s = retrieval_metrics(one, lookup, {"Freescape"}, 100);
  CHECK(s.hits == 1);
  CHECK(s.recall == 1.0);

  std::vector<RetrievedPassage> ab{{"p2", 2.0, 1}, {"p3", 1.0, 2}};
  auto a = retrieval_metrics(ab, lookup, {"A", "B"}, 1);
  CHECK(a.hits == 1);
  CHECK(a.recall == 0.5);
  CHECK(retrieval_metrics(ab, lookup, {"A", "B"}, 2).recall == 1.0);

  auto empty = retrieval_metrics({}, lookup, {"A"}, 10);
  CHECK(empty.hits == 0);
  CHECK(empty.recall == 0.0);
  CHECK_THROWS_AS(retrieval_metrics(ab, lookup, {"A"}, 0), ContractError);
}

TEST_CASE("recall never drops as k grows") {
  gen::Rng rng(8);
  for (int round = 0; round < 50; ++round) {
    auto corpus = gen::corpus(rng, 30, 12);
    PassageLookup lookup(corpus);
    std::vector<RetrievedPassage> ranked;
    for (std::size_t i = 0; i < corpus.size(); ++i) ranked.push_back({corpus[i].id, 0.0, i + 1});
    std::vector<std::string> gold;
    for (int g = 0; g < 4; ++g) gold.push_back(gen::word(rng));
    double prev = 0.0;
    for (std::size_t k = 1; k <= ranked.size(); ++k) {
      auto s = retrieval_metrics(ranked, lookup, AnswerSet(gold), k);
      CHECK(s.recall >= prev);
      CHECK(s.recall <= 1.0);
      prev = s.recall;
    }
  }
}

TEST_CASE("f1 is one exactly for equal sets") {
  gen::Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> a, b;
    for (std::size_t n = rng.between(1, 4); n > 0; --n) a.push_back(gen::word(rng, 6));
    for (std::size_t n = rng.between(0, 4); n > 0; --n) b.push_back(gen::word(rng, 6));
    AnswerSet gold(a), pred(b);
    auto s = score_example(pred, gold);
    CHECK(s.f1 >= 0.0);
    CHECK(s.f1 <= 1.0);
    CHECK((s.f1 == 1.0) == (pred == gold));
  }
}

TEST_CASE("dataset and prediction files") {
  std::string ds = write_temp("ds.jsonl",
                              R"({"qid": "q1", "question": "x?", "answers": ["A"], "category": "I.I.D."})"
                              "\n\n"
                              R"j({"qid": "q2", "question": "y?", "answers": ["B", "C"], "s_expression": "(JOIN r m.x)", "category": "zero_shot"})j"
                              "\n");
  auto rows = read_dataset(ds);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].category == "iid");
  CHECK(rows[1].category == "zero-shot");
  CHECK(rows[1].gold_lf == "(JOIN r m.x)");
  CHECK_FALSE(rows[0].gold_lf.has_value());

  std::string dup = write_temp("dup.jsonl", R"({"qid": "q1", "question": "x", "answers": ["A"]})"
                                            "\n"
                                            R"({"qid": "q1", "question": "y", "answers": ["B"]})"
                                            "\n");
  CHECK_THROWS_AS(read_dataset(dup), DataError);
  std::string bad = write_temp("bad.jsonl", R"({"qid": "q1", "question": "x", "answers": "A"})"
                                            "\n");
  try {
    read_dataset(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find(":1") != std::string::npos);
  }
  CHECK_THROWS(read_dataset(write_temp("cat.jsonl", R"({"qid": "q", "question": "x", "answers": ["A"], "category": "other"})"
                                                    "\n")));

  Prediction p;
  p.qid = "q1";
  p.answers = AnswerSet{"B", "A"};
  p.source = "lf";
  p.lf_rank = 2;
  p.num_executable = 3;
  auto back = prediction_from_json(prediction_to_json(p));
  CHECK(back.answers.items() == std::vector<std::string>{"B", "A"});
  CHECK(back.lf_rank == 2u);
  CHECK_FALSE(back.gen_rank.has_value());
  CHECK(back.num_executable == 3u);
  CHECK_FALSE(back.failed);

  std::string foreign = write_temp("pred.jsonl", R"({"qid": "q1", "answers": ["A"], "source": "gen", "lf_rank": null, "gen_rank": 1})"
                                                 "\n");
  auto preds = read_predictions(foreign);
  REQUIRE(preds.size() == 1);
  CHECK_FALSE(preds[0].num_executable.has_value());
  CHECK(preds[0].gen_rank == 1u);
}
