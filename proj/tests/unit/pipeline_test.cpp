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

#include <filesystem>

#include "error.hpp"
#include "evaluator.hpp"
#include "fake_server.hpp"
#include "text.hpp"
#include "toy_run.hpp"

using namespace kbqa;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = KBQA_TEST_DATA_DIR;

json minimal() { return json{{"kb", "kb.nt"}, {"dataset", "dataset.jsonl"}, {"reader", {{"mock_fixture", "m.json"}}}}; }

}  // namespace

TEST_CASE("config defaults and path resolution") {
  PipelineConfig c = config_from_json(minimal(), "/data/toy");
  CHECK(c.kb_path == "/data/toy/kb.nt");
  CHECK(c.dataset_path == "/data/toy/dataset.jsonl");
  CHECK(c.output_dir == "/data/toy/out");
  CHECK(c.passages_dir == "/data/toy/out/passages");
  CHECK(c.mock_fixture == "/data/toy/m.json");
  CHECK(c.k == 100);
  CHECK(c.combination.lambda == 1.0);
  CHECK(c.combination.score_fn == ScoreFn::reciprocal);
  CHECK(c.combination.beam_size == 10);
  CHECK(c.retriever == RetrieverKind::sparse);
  CHECK(c.mode == AnswerMode::single);
  CHECK(c.max_words == 100);
  CHECK(c.load.name_relation == "type.object.name");

  json j = minimal();
  j["output_dir"] = "/abs/out";
  j["retriever"] = {{"kind", "dense"}, {"k", 5}, {"embedding", {{"kind", "hash"}, {"dim", 8}}}};
  j["combination"] = {{"lambda", 0.3}, {"score_fn", "linear"}};
  j["mode"] = "multi";
  j["name_relation"] = "rdfs.label";
  PipelineConfig d = config_from_json(j, "/data/toy");
  CHECK(d.output_dir == "/abs/out");
  CHECK(d.retriever == RetrieverKind::dense);
  CHECK(d.k == 5);
  CHECK(d.embedding.dim == 8);
  CHECK(d.combination.lambda == 0.3);
  CHECK(d.combination.score_fn == ScoreFn::linear);
  CHECK(d.mode == AnswerMode::multi);
  CHECK(d.load.name_relation == "rdfs.label");
}

TEST_CASE("bad configs are rejected") {
  auto with = [](const char* key, json v) {
    json j = minimal();
    j[key] = std::move(v);
    return j;
  };
  for (const json& j : {with("unknown", 1), with("retriever", {{"k", 0}}), with("retriever", {{"kind", "fuzzy"}}),
                        with("reader", {{"beam", 0}}), with("combination", {{"lambda", 1.5}}),
                        with("combination", {{"score_fn", "cubic"}}), with("mode", "both"), with("kb", 3),
                        with("retriever", {{"embedding", {{"kind", "remote"}}}}), with("reader", {{"colour", 1}})}) {
    CAPTURE(j.dump());
    CHECK_THROWS_AS(config_from_json(j, "."), ConfigError);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  std::string dir = fixture::scratch_dir("badjson");
  text::write_file(dir + "/c.json", "{ nope");
  CHECK_THROWS_AS(load_config(dir + "/c.json"), ConfigError);
}

TEST_CASE("overrides") {
  PipelineConfig c = config_from_json(minimal(), "/d");
  ConfigOverrides o;
  o.k = 7;
  o.beam = 3;
  o.lambda = 0.25;
  o.score_fn = "linear";
  o.mode = "multi";
  o.reader_url = "http://localhost:9";
  apply_overrides(c, o);
  CHECK(c.k == 7);
  CHECK(c.combination.beam_size == 3);
  CHECK(c.combination.lambda == 0.25);
  CHECK(c.combination.score_fn == ScoreFn::linear);
  CHECK(c.mode == AnswerMode::multi);
  CHECK(c.reader_url == "http://localhost:9");
  CHECK(c.mock_fixture.empty());

  ConfigOverrides bad;
  bad.lambda = -1;
  CHECK_THROWS_AS(apply_overrides(c, bad), ConfigError);
  ConfigOverrides mode;
  mode.mode = "triple";
  CHECK_THROWS_AS(apply_overrides(c, mode), ConfigError);
}

TEST_CASE("gold logical forms answer every toy question") {
  std::string out = fixture::scratch_dir("gold");
  PipelineConfig cfg = fixture::toy_config(kData, out);
  json lin = cmd_linearize(cfg);
  CHECK(lin["documents"] == 20);
  CHECK(lin["passages"] == 20);
  CHECK(lin["shards"] == 2);
  std::string checksum = lin["checksum"];
  CHECK(cmd_linearize(cfg)["checksum"] == checksum);

  json sparse = cmd_index_sparse(cfg);
  CHECK(sparse["passages"] == 20);
  json ret = cmd_retrieve(cfg);
  CHECK(ret["questions"] == 20);
  CHECK(fs::exists(out + "/retrieval_metrics.json"));

  json ans = cmd_answer(cfg);
  CHECK(ans["answered"] == 20);
  CHECK(ans["source_lf"] == 20);
  CHECK(ans["failures"] == 0);
  json ev = cmd_eval(cfg);
  CHECK(ev["f1"] == 1.0);
  CHECK(ev["hits_at_1"] == 1.0);
  CHECK(ev["non_executable_rate"] == 0.0);
  CHECK(ev["per_category"]["iid"]["count"] == 9);
  for (const char* f : {"report.json", "report.txt", "report.svg", "predictions.jsonl", "answer_log.jsonl"})
    CHECK(fs::exists(out + "/" + f));

  auto preds = read_predictions(cfg.predictions_path());
  REQUIRE(preds.size() == 20);
  CHECK(preds[0].qid == "q01");
  CHECK(preds[0].answers.items() == std::vector<std::string>{"Freescape"});
  CHECK(preds[0].source == "lf");
  CHECK(preds[0].lf_rank == 1u);
  for (std::size_t i = 1; i < preds.size(); ++i) CHECK(preds[i - 1].qid < preds[i].qid);

  // Identical inputs give byte-identical predictions.
  std::string first = text::read_file(cfg.predictions_path());
  cfg.threads = 1;
  cmd_answer(cfg);
  CHECK(text::read_file(cfg.predictions_path()) == first);
}

TEST_CASE("corrupted logical forms fall back to generated answers") {
  std::string out = fixture::scratch_dir("corrupt");
  PipelineConfig cfg = fixture::toy_config(kData, out, "mock_corrupt.json");
  json ans;
  json ev = fixture::run_toy(cfg, &ans);
  CHECK(ans["answered"] == 20);
  CHECK(ans["source_gen"] == 20);
  CHECK(ans["non_executable"] == 20);
  CHECK(ev["non_executable_rate"] == 1.0);
  CHECK(ev["count"] == 20);

  // Every candidate is logged with its failure reason.
  std::size_t logged = 0;
  std::string log = text::read_file(cfg.answer_log_path());
  std::istringstream in(log);
  for (std::string line; std::getline(in, line);) {
    json row = json::parse(line);
    for (const auto& lf : row["logical_forms"]) {
      CHECK(lf["status"] != "ok");
      CHECK(lf.contains("reason"));
      ++logged;
    }
  }
  CHECK(logged > 20);
}

TEST_CASE("mixed beams keep the executable candidate") {
  std::string out = fixture::scratch_dir("mixed");
  PipelineConfig cfg = fixture::toy_config(kData, out, "mock_mixed.json");
  json ev = fixture::run_toy(cfg);
  CHECK(ev["f1"] == 1.0);
  auto preds = read_predictions(cfg.predictions_path());
  for (const auto& p : preds) {
    CHECK(p.source == "lf");
    CHECK(p.lf_rank == 1u);
    CHECK(p.num_executable == 1u);
  }
}

TEST_CASE("lambda crossing one half flips the source") {
  std::string out = fixture::scratch_dir("flip");
  PipelineConfig cfg = fixture::toy_config(kData, out, "mock_disjoint.json");
  cmd_linearize(cfg);
  cmd_index_sparse(cfg);
  for (ScoreFn fn : {ScoreFn::reciprocal, ScoreFn::linear}) {
    cfg.combination.score_fn = fn;
    cfg.combination.lambda = 0.49;
    json low = cmd_answer(cfg);
    CHECK(low["source_gen"] == 20);
    cfg.combination.lambda = 0.51;
    json high = cmd_answer(cfg);
    CHECK(high["source_lf"] == 20);
  }
}

TEST_CASE("reader failures mark questions failed without aborting") {
  std::string out = fixture::scratch_dir("remote");
  PipelineConfig cfg = fixture::toy_config(kData, out);
  cmd_linearize(cfg);
  cmd_index_sparse(cfg);

  kbqa::testing::FakeServer server;
  server.on_post("/generate", [](const json& req, httplib::Response& res) {
    const std::string q = req["question"];
    if (q.find("who developed the unreal engine") != std::string::npos) return kbqa::testing::reply_json(res, {{"error", "boom"}}, 503);
    json c = json::array();
    if (req["prefix"] == "Semantic Parsing:") c.push_back({{"text", "(COUNT cvg.computer_videogame)"}, {"rank", 1}});
    else c.push_back({{"text", "Something"}, {"rank", 1}});
    kbqa::testing::reply_json(res, {{"candidates", c}});
  });
  server.start();
  ConfigOverrides o;
  o.reader_url = server.url();
  apply_overrides(cfg, o);
  cfg.remote.max_attempts = 2;
  cfg.remote.backoff = std::chrono::milliseconds(1);
  json ans = cmd_answer(cfg);
  CHECK(ans["questions"] == 20);
  CHECK(ans["failures"] == 1);
  CHECK(ans["failed"][0]["qid"] == "q02");
  CHECK(ans["source_lf"] == 19);
  auto preds = read_predictions(cfg.predictions_path());
  REQUIRE(preds.size() == 20);
  CHECK(preds[1].failed);
  CHECK(preds[1].answers.empty());
  CHECK(preds[0].answers.items() == std::vector<std::string>{"5"});
  json ev = cmd_eval(cfg);
  CHECK(ev["failed"] == 1);
}

TEST_CASE("dense retrieval runs end to end") {
  std::string out = fixture::scratch_dir("dense");
  PipelineConfig cfg = fixture::toy_config(kData, out);
  cfg.retriever = RetrieverKind::dense;
  cfg.k = 5;
  cmd_linearize(cfg);
  json idx = cmd_index_dense(cfg);
  CHECK(idx["passages"] == 20);
  CHECK(idx["dim"] == 64);
  json ret = cmd_retrieve(cfg);
  CHECK(ret["questions"] == 20);
  json ans = cmd_answer(cfg);
  CHECK(ans["answered"] == 20);
}

TEST_CASE("missing inputs are data errors") {
  std::string out = fixture::scratch_dir("missing");
  PipelineConfig cfg = fixture::toy_config(kData, out);
  CHECK_THROWS_AS(cmd_index_sparse(cfg), Error);
  CHECK_THROWS_AS(cmd_eval(cfg), Error);
  cfg.kb_path = out + "/nope.nt";
  CHECK_THROWS_AS(cmd_linearize(cfg), Error);
}

TEST_CASE("execute command") {
  std::string out = fixture::scratch_dir("exec");
  PipelineConfig cfg = fixture::toy_config(kData, out);
  json ok = cmd_execute(cfg, "(AND cvg.computer_game_engine (JOIN cvg.computer_game_engine.developer [ Incentive Software ]))");
  CHECK(ok["executable"] == true);
  CHECK(ok["answers"] == json::array({"Freescape"}));
  json bad = cmd_execute(cfg, "(JOIN");
  CHECK(bad["executable"] == false);
  CHECK(bad["status"] == "parse_error");
}
