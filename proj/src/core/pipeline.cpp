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

#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "dense_index.hpp"
#include "evaluator.hpp"
#include "linearizer.hpp"
#include "passage_io.hpp"
#include "reader_gateway.hpp"
#include "sparse_index.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace kbqa {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, v] : obj.items()) {
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& out, const char* where) {
  if (!obj.contains(key) || obj[key].is_null()) return;
  try {
    out = obj[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + " has the wrong type");
  }
}

void read_size(const json& obj, const char* key, std::size_t& out, const char* where) {
  if (!obj.contains(key) || obj[key].is_null()) return;
  if (!obj[key].is_number_integer() || obj[key].get<long long>() < 0)
    throw ConfigError(std::string(where) + "." + key + " must be a non-negative integer");
  out = obj[key].get<std::size_t>();
}

std::string resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute() || base.empty()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string(what) + " is not configured");
  if (!fs::exists(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

void write_jsonl(const std::string& path, const std::vector<json>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.dump();
    out += '\n';
  }
  text::write_file(path, out);
}

void ensure_output_dir(const PipelineConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.output_dir + ": " + ec.message());
}

std::size_t worker_count(const PipelineConfig& cfg, std::size_t jobs) {
  std::size_t n = cfg.threads;
  if (n == 0) n = std::min<std::size_t>(8, std::max(1u, std::thread::hardware_concurrency()));
  return std::max<std::size_t>(1, std::min(n, jobs));
}

// Runs fn(i) for i in [0, n) on a bounded pool of workers.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& cfg) {
  if (cfg.embedding.kind == "hash") return std::make_unique<HashProjectionProvider>(cfg.embedding.dim, cfg.embedding.seed);
  return std::make_unique<RemoteEmbeddingProvider>(cfg.embedding.url, 0, cfg.remote);
}

class Retriever {
 public:
  explicit Retriever(const PipelineConfig& cfg) : cfg_(cfg) {
    if (cfg.retriever == RetrieverKind::sparse) {
      require_file(cfg.sparse_index_path(), "sparse index (run index-sparse)");
      sparse_ = SparseIndex::load(cfg.sparse_index_path());
    } else {
      require_file(cfg.dense_index_path(), "dense index (run index-dense)");
      dense_ = DenseIndex::load(cfg.dense_index_path());
      provider_ = make_provider(cfg);
    }
  }

  std::vector<RetrievedPassage> search(const std::string& question) const {
    if (provider_) return dense_.search(question, *provider_, cfg_.k);
    return sparse_.search(question, cfg_.k);
  }

 private:
  const PipelineConfig& cfg_;
  SparseIndex sparse_;
  DenseIndex dense_;
  std::unique_ptr<EmbeddingProvider> provider_;
};

PassageLookup load_passages(const PipelineConfig& cfg) {
  require_file((fs::path(cfg.passages_dir) / "manifest.json").string(), "passage manifest (run linearize)");
  return PassageLookup(read_passages(cfg.passages_dir));
}

std::unique_ptr<ReaderBackend> make_reader(const PipelineConfig& cfg) {
  if (!cfg.mock_fixture.empty()) return std::make_unique<MockReader>(MockReader::from_file(cfg.mock_fixture));
  if (!cfg.reader_url.empty()) return std::make_unique<RemoteReader>(cfg.reader_url, cfg.remote);
  throw ConfigError("no reader configured: set reader.mock_fixture or reader.url");
}

json retrieved_to_json(const std::vector<RetrievedPassage>& r) {
  json arr = json::array();
  for (const auto& p : r) arr.push_back({{"id", p.passage_id}, {"score", p.score}, {"rank", p.rank}});
  return arr;
}

struct AnswerOutcome {
  Prediction prediction;
  json log;
};

AnswerOutcome answer_question(const PipelineConfig& cfg, const DatasetExample& ex, const Retriever& retriever,
                              const PassageLookup& passages, const ReaderBackend& reader, const KbStore& store) {
  AnswerOutcome out;
  Prediction& pred = out.prediction;
  pred.qid = ex.qid;
  out.log = {{"qid", ex.qid}};
  try {
    auto retrieved = retriever.search(ex.question);
    const std::size_t beam = cfg.combination.beam_size;
    CandidateBeam gen_beam =
        call_reader(build_reader_input(ex.question, retrieved, passages, OutputKind::answer), beam, reader);
    CandidateBeam lf_beam =
        call_reader(build_reader_input(ex.question, retrieved, passages, OutputKind::logical_form), beam, reader);

    std::vector<AnswerSet> gen;
    for (const auto& c : gen_beam.candidates) {
      AnswerSet a = cfg.mode == AnswerMode::multi ? split_multi_answer(c) : AnswerSet{c};
      if (!a.empty()) gen.push_back(std::move(a));
    }
    gen = dedupe_ranked(gen);

    std::vector<AnswerSet> executed;
    json lf_log = json::array();
    for (std::size_t i = 0; i < lf_beam.candidates.size(); ++i) {
      lf::Execution run = lf::run_candidate(lf_beam.candidates[i], store);
      json entry = {{"rank", i + 1}, {"lf", lf_beam.candidates[i]}, {"status", lf::to_string(run.status)}};
      if (!run.executable()) entry["reason"] = run.reason;
      lf_log.push_back(std::move(entry));
      if (run.executable()) executed.push_back(std::move(run.answers));
    }
    pred.num_executable = executed.size();
    executed = dedupe_ranked(executed);
    out.log["retrieved"] = retrieved.size();
    out.log["logical_forms"] = std::move(lf_log);
    out.log["generated"] = gen_beam.candidates;

    if (gen.empty() && executed.empty()) throw DataError("reader produced no usable candidates");
    ScoredAnswerSet chosen;
    if (gen.empty()) {
      chosen.answers = executed.front();
      chosen.lf_rank = 1;
      chosen.score = cfg.combination.lambda * rank_score(cfg.combination.score_fn, 1, beam);
    } else {
      chosen = combine(executed, gen, cfg.combination);
    }
    pred.answers = chosen.answers;
    pred.source = chosen.source();
    pred.lf_rank = chosen.lf_rank;
    pred.gen_rank = chosen.gen_rank;
    out.log["score"] = chosen.score;
  } catch (const Error& e) {
    pred = Prediction{};
    pred.qid = ex.qid;
    pred.failed = true;
    pred.error = e.what();
    out.log["error"] = e.what();
  }
  return out;
}

}  // namespace

std::string PipelineConfig::sparse_index_path() const { return (fs::path(output_dir) / "sparse_index.json").string(); }
std::string PipelineConfig::dense_index_path() const { return (fs::path(output_dir) / "dense_index.bin").string(); }
std::string PipelineConfig::retrieval_path() const { return (fs::path(output_dir) / "retrieval.jsonl").string(); }
std::string PipelineConfig::predictions_path() const { return (fs::path(output_dir) / "predictions.jsonl").string(); }
std::string PipelineConfig::answer_log_path() const { return (fs::path(output_dir) / "answer_log.jsonl").string(); }

void PipelineConfig::validate() const {
  if (k < 1) throw ConfigError("retriever.k must be >= 1");
  if (max_words < 1) throw ConfigError("linearize.max_words must be >= 1");
  if (embedding.kind != "hash" && embedding.kind != "remote")
    throw ConfigError("retriever.embedding.kind must be hash or remote");
  if (embedding.kind == "remote" && embedding.url.empty()) throw ConfigError("retriever.embedding.url is required");
  if (embedding.kind == "hash" && embedding.dim < 1) throw ConfigError("retriever.embedding.dim must be >= 1");
  if (remote.max_attempts < 1) throw ConfigError("reader.max_attempts must be >= 1");
  combination.validate();
}

PipelineConfig config_from_json(const json& j, const std::string& base_dir) {
  check_keys(j, "config", {"kb", "name_relation", "type_relation", "alias_relation", "dataset", "output_dir",
                           "passages_dir", "linearize", "retriever", "reader", "combination", "mode", "threads"});
  PipelineConfig c;
  read_field(j, "kb", c.kb_path, "config");
  read_field(j, "name_relation", c.load.name_relation, "config");
  read_field(j, "type_relation", c.load.type_relation, "config");
  read_field(j, "alias_relation", c.load.alias_relation, "config");
  read_field(j, "dataset", c.dataset_path, "config");
  read_field(j, "output_dir", c.output_dir, "config");
  read_field(j, "passages_dir", c.passages_dir, "config");
  read_size(j, "threads", c.threads, "config");

  if (j.contains("linearize")) {
    const json& l = j["linearize"];
    check_keys(l, "linearize", {"max_words", "strip_relation_domain", "shard_size"});
    read_size(l, "max_words", c.max_words, "linearize");
    read_field(l, "strip_relation_domain", c.strip_relation_domain, "linearize");
    read_size(l, "shard_size", c.shard_size, "linearize");
  }
  if (j.contains("retriever")) {
    const json& r = j["retriever"];
    check_keys(r, "retriever", {"kind", "k", "k1", "b", "embedding"});
    std::string kind = "sparse";
    read_field(r, "kind", kind, "retriever");
    if (kind == "sparse") c.retriever = RetrieverKind::sparse;
    else if (kind == "dense") c.retriever = RetrieverKind::dense;
    else throw ConfigError("retriever.kind must be sparse or dense");
    read_size(r, "k", c.k, "retriever");
    read_field(r, "k1", c.bm25_k1, "retriever");
    read_field(r, "b", c.bm25_b, "retriever");
    if (r.contains("embedding")) {
      const json& e = r["embedding"];
      check_keys(e, "retriever.embedding", {"kind", "dim", "seed", "url"});
      read_field(e, "kind", c.embedding.kind, "retriever.embedding");
      read_size(e, "dim", c.embedding.dim, "retriever.embedding");
      read_field(e, "seed", c.embedding.seed, "retriever.embedding");
      read_field(e, "url", c.embedding.url, "retriever.embedding");
    }
  }
  if (j.contains("reader")) {
    const json& r = j["reader"];
    check_keys(r, "reader", {"mock_fixture", "url", "beam", "timeout_ms", "max_attempts", "backoff_ms"});
    read_field(r, "mock_fixture", c.mock_fixture, "reader");
    read_field(r, "url", c.reader_url, "reader");
    read_size(r, "beam", c.combination.beam_size, "reader");
    std::size_t ms = static_cast<std::size_t>(c.remote.timeout.count());
    read_size(r, "timeout_ms", ms, "reader");
    c.remote.timeout = std::chrono::milliseconds(ms);
    read_field(r, "max_attempts", c.remote.max_attempts, "reader");
    ms = static_cast<std::size_t>(c.remote.backoff.count());
    read_size(r, "backoff_ms", ms, "reader");
    c.remote.backoff = std::chrono::milliseconds(ms);
  }
  if (j.contains("combination")) {
    const json& cb = j["combination"];
    check_keys(cb, "combination", {"lambda", "score_fn"});
    read_field(cb, "lambda", c.combination.lambda, "combination");
    if (cb.contains("score_fn")) c.combination.score_fn = parse_score_fn(cb["score_fn"].get<std::string>());
  }
  if (j.contains("mode")) {
    std::string m = j["mode"].get<std::string>();
    if (m == "single") c.mode = AnswerMode::single;
    else if (m == "multi") c.mode = AnswerMode::multi;
    else throw ConfigError("mode must be single or multi");
  }

  c.kb_path = resolve(base_dir, c.kb_path);
  c.dataset_path = resolve(base_dir, c.dataset_path);
  c.output_dir = resolve(base_dir, c.output_dir);
  c.passages_dir = c.passages_dir.empty() ? (fs::path(c.output_dir) / "passages").string()
                                          : resolve(base_dir, c.passages_dir);
  c.mock_fixture = resolve(base_dir, c.mock_fixture);
  c.validate();
  return c;
}

PipelineConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(text::read_file(path));
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  std::string base = fs::path(path).parent_path().string();
  return config_from_json(j, base.empty() ? "." : base);
}

void apply_overrides(PipelineConfig& cfg, const ConfigOverrides& o) {
  if (o.k) cfg.k = *o.k;
  if (o.beam) cfg.combination.beam_size = *o.beam;
  if (o.lambda) cfg.combination.lambda = *o.lambda;
  if (o.score_fn) cfg.combination.score_fn = parse_score_fn(*o.score_fn);
  if (o.mode) {
    if (*o.mode == "single") cfg.mode = AnswerMode::single;
    else if (*o.mode == "multi") cfg.mode = AnswerMode::multi;
    else throw ConfigError("--mode must be single or multi");
  }
  if (o.reader_url) {
    cfg.reader_url = *o.reader_url;
    cfg.mock_fixture.clear();
  }
  if (o.mock_fixture) {
    cfg.mock_fixture = *o.mock_fixture;
    cfg.reader_url.clear();
  }
  cfg.validate();
}

nlohmann::json cmd_linearize(const PipelineConfig& cfg) {
  require_file(cfg.kb_path, "kb");
  KbStore store = load_kb(cfg.kb_path, cfg.load);
  LinearizeOptions opts;
  opts.max_words = cfg.max_words;
  opts.strip_relation_domain = cfg.strip_relation_domain;
  std::vector<std::string> warnings = store.warnings();
  std::vector<Passage> passages;
  std::size_t docs = 0;
  for_each_document(
      store, opts,
      [&](Document&& d) {
        ++docs;
        auto chunk = chunk_passages(d, opts.max_words);
        passages.insert(passages.end(), std::make_move_iterator(chunk.begin()), std::make_move_iterator(chunk.end()));
      },
      &warnings);
  PassageManifest m = write_passage_shards(cfg.passages_dir, passages, cfg.shard_size, docs);
  return {{"command", "linearize"},
          {"entities", store.entity_count()},
          {"triples", store.triple_count()},
          {"documents", m.document_count},
          {"passages", m.passage_count},
          {"shards", m.shards.size()},
          {"checksum", m.checksum},
          {"warnings", warnings.size()},
          {"passages_dir", cfg.passages_dir}};
}

nlohmann::json cmd_index_sparse(const PipelineConfig& cfg) {
  PassageLookup passages = load_passages(cfg);
  ensure_output_dir(cfg);
  SparseIndex idx = SparseIndex::build(passages.all(), Bm25Params{cfg.bm25_k1, cfg.bm25_b});
  idx.save(cfg.sparse_index_path());
  return {{"command", "index-sparse"},
          {"passages", idx.size()},
          {"vocabulary", idx.vocabulary_size()},
          {"path", cfg.sparse_index_path()}};
}

nlohmann::json cmd_index_dense(const PipelineConfig& cfg) {
  PassageLookup passages = load_passages(cfg);
  ensure_output_dir(cfg);
  auto provider = make_provider(cfg);
  DenseIndex idx = DenseIndex::build(passages.all(), *provider);
  idx.save(cfg.dense_index_path());
  return {{"command", "index-dense"},
          {"passages", idx.size()},
          {"dim", idx.dim()},
          {"fingerprint", idx.fingerprint()},
          {"path", cfg.dense_index_path()}};
}

nlohmann::json cmd_retrieve(const PipelineConfig& cfg) {
  require_file(cfg.dataset_path, "dataset");
  auto examples = read_dataset(cfg.dataset_path);
  PassageLookup passages = load_passages(cfg);
  Retriever retriever(cfg);
  ensure_output_dir(cfg);
  std::vector<json> rows(examples.size());
  std::vector<RetrievalScore> scores(examples.size());
  parallel_for(examples.size(), worker_count(cfg, examples.size()), [&](std::size_t i) {
    auto r = retriever.search(examples[i].question);
    scores[i] = retrieval_metrics(r, passages, examples[i].gold_answers, cfg.k);
    rows[i] = {{"qid", examples[i].qid}, {"passages", retrieved_to_json(r)}};
  });
  write_jsonl(cfg.retrieval_path(), rows);
  double hits = 0, recall = 0;
  for (const auto& s : scores) {
    hits += s.hits;
    recall += s.recall;
  }
  const double n = examples.empty() ? 1.0 : static_cast<double>(examples.size());
  json summary = {{"command", "retrieve"},
                  {"questions", examples.size()},
                  {"k", cfg.k},
                  {"hits_at_k", hits / n},
                  {"recall_at_k", recall / n},
                  {"path", cfg.retrieval_path()}};
  text::write_file((fs::path(cfg.output_dir) / "retrieval_metrics.json").string(), summary.dump(2) + "\n");
  return summary;
}

nlohmann::json cmd_answer(const PipelineConfig& cfg) {
  require_file(cfg.kb_path, "kb");
  require_file(cfg.dataset_path, "dataset");
  if (!cfg.mock_fixture.empty()) require_file(cfg.mock_fixture, "mock fixture");
  auto examples = read_dataset(cfg.dataset_path);
  KbStore store = load_kb(cfg.kb_path, cfg.load);
  PassageLookup passages = load_passages(cfg);
  Retriever retriever(cfg);
  auto reader = make_reader(cfg);
  ensure_output_dir(cfg);

  std::vector<AnswerOutcome> outcomes(examples.size());
  parallel_for(examples.size(), worker_count(cfg, examples.size()), [&](std::size_t i) {
    outcomes[i] = answer_question(cfg, examples[i], retriever, passages, *reader, store);
  });
  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return examples[a].qid < examples[b].qid; });

  std::vector<json> pred_rows, log_rows;
  json failures = json::array();
  std::size_t from_lf = 0, from_gen = 0, non_exec = 0;
  for (std::size_t i : order) {
    const Prediction& p = outcomes[i].prediction;
    pred_rows.push_back(prediction_to_json(p));
    log_rows.push_back(outcomes[i].log);
    if (p.failed) failures.push_back({{"qid", p.qid}, {"error", p.error}});
    else if (p.source == "lf") ++from_lf;
    else ++from_gen;
    if (!p.failed && p.num_executable == 0u) ++non_exec;
  }
  write_jsonl(cfg.predictions_path(), pred_rows);
  write_jsonl(cfg.answer_log_path(), log_rows);
  return {{"command", "answer"},
          {"questions", examples.size()},
          {"answered", examples.size() - failures.size()},
          {"source_lf", from_lf},
          {"source_gen", from_gen},
          {"non_executable", non_exec},
          {"failures", failures.size()},
          {"failed", failures},
          {"path", cfg.predictions_path()}};
}

nlohmann::json cmd_eval(const PipelineConfig& cfg) {
  require_file(cfg.dataset_path, "dataset");
  require_file(cfg.predictions_path(), "predictions (run answer)");
  auto examples = read_dataset(cfg.dataset_path);
  auto preds = read_predictions(cfg.predictions_path());
  EvalReport rep = aggregate(examples, preds);
  ensure_output_dir(cfg);
  text::write_file((fs::path(cfg.output_dir) / "report.json").string(), rep.to_json().dump(2) + "\n");
  text::write_file((fs::path(cfg.output_dir) / "report.txt").string(), rep.to_table());
  text::write_file((fs::path(cfg.output_dir) / "report.svg").string(), rep.to_svg());
  json out = rep.to_json();
  out["command"] = "eval";
  out["table"] = rep.to_table();
  return out;
}

nlohmann::json execution_to_json(const lf::Execution& ex) {
  json j = {{"status", lf::to_string(ex.status)}, {"executable", ex.executable()}, {"answers", ex.answers.items()}};
  if (!ex.executable()) j["reason"] = ex.reason;
  return j;
}

nlohmann::json cmd_execute(const PipelineConfig& cfg, const std::string& logical_form) {
  require_file(cfg.kb_path, "kb");
  KbStore store = load_kb(cfg.kb_path, cfg.load);
  json out = execution_to_json(lf::run_candidate(logical_form, store));
  out["command"] = "execute";
  out["logical_form"] = logical_form;
  return out;
}

}  // namespace kbqa
