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

#include "kbqa/kbqa.h"

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

#include "dense_index.hpp"
#include "lf_engine.hpp"
#include "linearizer.hpp"
#include "passage_io.hpp"
#include "pipeline.hpp"
#include "sparse_index.hpp"

struct kbqa_kb {
  kbqa::KbStore store;
};

struct kbqa_sparse_index {
  kbqa::SparseIndex index;
};

struct kbqa_dense_index {
  kbqa::DenseIndex index;
};

struct kbqa_config {
  kbqa::PipelineConfig config;
};

namespace {

thread_local std::string g_last_error;

kbqa_status fail(kbqa_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs `body` and maps exceptions onto status codes.
template <typename F>
kbqa_status guarded(F&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const kbqa::ParseError& e) {
    return fail(KBQA_ERR_PARSE, e.what());
  } catch (const kbqa::NotFoundError& e) {
    return fail(KBQA_ERR_NOT_FOUND, e.what());
  } catch (const kbqa::IoError& e) {
    return fail(KBQA_ERR_IO, e.what());
  } catch (const kbqa::ConfigError& e) {
    return fail(KBQA_ERR_CONFIG, e.what());
  } catch (const kbqa::ContractError& e) {
    return fail(KBQA_ERR_INVALID_ARGUMENT, e.what());
  } catch (const kbqa::DataError& e) {
    return fail(KBQA_ERR_DATA, e.what());
  } catch (const kbqa::TransportError& e) {
    return fail(KBQA_ERR_TRANSPORT, e.what());
  } catch (const kbqa::ProtocolError& e) {
    return fail(KBQA_ERR_PROTOCOL, e.what());
  } catch (const std::exception& e) {
    return fail(KBQA_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KBQA_ERR_INTERNAL, "unknown error");
  }
}

#define KBQA_REQUIRE(cond, what) \
  if (!(cond)) return fail(KBQA_ERR_INVALID_ARGUMENT, what)

nlohmann::json retrieved_json(const std::vector<kbqa::RetrievedPassage>& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : r) arr.push_back({{"id", p.passage_id}, {"score", p.score}, {"rank", p.rank}});
  return arr;
}

std::size_t parse_size(const std::string& key, const char* value) {
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(value, &end, 10);
  if (errno || end == value || *end != '\0' || value[0] == '-')
    throw kbqa::ConfigError(key + " expects a non-negative integer, got '" + value + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

extern "C" {

const char* kbqa_version(void) { return "0.1.0"; }

const char* kbqa_status_name(kbqa_status status) {
  switch (status) {
    case KBQA_OK: return "ok";
    case KBQA_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case KBQA_ERR_PARSE: return "parse_error";
    case KBQA_ERR_NOT_FOUND: return "not_found";
    case KBQA_ERR_IO: return "io_error";
    case KBQA_ERR_CONFIG: return "config_error";
    case KBQA_ERR_DATA: return "data_error";
    case KBQA_ERR_TRANSPORT: return "transport_error";
    case KBQA_ERR_PROTOCOL: return "protocol_error";
    case KBQA_ERR_NOT_EXECUTABLE: return "not_executable";
    case KBQA_ERR_PARTIAL_FAILURE: return "partial_failure";
    case KBQA_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* kbqa_last_error(void) { return g_last_error.c_str(); }

void kbqa_string_free(char* s) { std::free(s); }

kbqa_status kbqa_kb_load(const char* path, const char* name_relation, const char* type_relation, kbqa_kb** out) {
  KBQA_REQUIRE(path && out, "path and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    kbqa::LoadOptions opts;
    if (name_relation) opts.name_relation = name_relation;
    if (type_relation) opts.type_relation = type_relation;
    *out = new kbqa_kb{kbqa::load_kb(path, opts)};
    return KBQA_OK;
  });
}

void kbqa_kb_free(kbqa_kb* kb) { delete kb; }

kbqa_status kbqa_kb_counts(const kbqa_kb* kb, size_t* entities, size_t* triples) {
  KBQA_REQUIRE(kb, "kb must be non-null");
  if (entities) *entities = kb->store.entity_count();
  if (triples) *triples = kb->store.triple_count();
  return KBQA_OK;
}

kbqa_status kbqa_kb_resolve_name(const kbqa_kb* kb, const char* name, char** out_id) {
  KBQA_REQUIRE(kb && name && out_id, "kb, name and out_id must be non-null");
  *out_id = nullptr;
  return guarded([&] {
    *out_id = dup_string(kb->store.resolve_name(name).value);
    return KBQA_OK;
  });
}

kbqa_status kbqa_kb_linearize(const kbqa_kb* kb, size_t max_words, char** out_jsonl) {
  KBQA_REQUIRE(kb && out_jsonl, "kb and out_jsonl must be non-null");
  *out_jsonl = nullptr;
  return guarded([&] {
    kbqa::LinearizeOptions opts;
    opts.max_words = max_words;
    std::string out;
    for (const auto& p : kbqa::linearize_store(kb->store, opts)) {
      out += kbqa::passage_to_jsonl(p);
      out += '\n';
    }
    *out_jsonl = dup_string(out);
    return KBQA_OK;
  });
}

kbqa_status kbqa_kb_execute(const kbqa_kb* kb, const char* logical_form, char** out_json) {
  KBQA_REQUIRE(kb && logical_form && out_json, "kb, logical_form and out_json must be non-null");
  *out_json = nullptr;
  return guarded([&] {
    kbqa::lf::Execution ex = kbqa::lf::run_candidate(logical_form, kb->store);
    *out_json = dup_string(kbqa::execution_to_json(ex).dump());
    if (!ex.executable()) return fail(KBQA_ERR_NOT_EXECUTABLE, ex.reason);
    return KBQA_OK;
  });
}

kbqa_status kbqa_sparse_load(const char* path, kbqa_sparse_index** out) {
  KBQA_REQUIRE(path && out, "path and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    *out = new kbqa_sparse_index{kbqa::SparseIndex::load(path)};
    return KBQA_OK;
  });
}

void kbqa_sparse_free(kbqa_sparse_index* index) { delete index; }

kbqa_status kbqa_sparse_search(const kbqa_sparse_index* index, const char* query, size_t k, char** out_json) {
  KBQA_REQUIRE(index && query && out_json, "index, query and out_json must be non-null");
  *out_json = nullptr;
  return guarded([&] {
    *out_json = dup_string(retrieved_json(index->index.search(query, k)).dump());
    return KBQA_OK;
  });
}

kbqa_status kbqa_dense_load(const char* path, kbqa_dense_index** out) {
  KBQA_REQUIRE(path && out, "path and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    *out = new kbqa_dense_index{kbqa::DenseIndex::load(path)};
    return KBQA_OK;
  });
}

void kbqa_dense_free(kbqa_dense_index* index) { delete index; }

kbqa_status kbqa_dense_dim(const kbqa_dense_index* index, size_t* dim) {
  KBQA_REQUIRE(index && dim, "index and dim must be non-null");
  *dim = index->index.dim();
  return KBQA_OK;
}

kbqa_status kbqa_dense_search_vector(const kbqa_dense_index* index, const float* query, size_t dim, size_t k,
                                     char** out_json) {
  KBQA_REQUIRE(index && query && out_json, "index, query and out_json must be non-null");
  *out_json = nullptr;
  return guarded([&] {
    if (dim != index->index.dim())
      throw kbqa::ContractError("query has dim " + std::to_string(dim) + ", index has " +
                                std::to_string(index->index.dim()));
    *out_json = dup_string(retrieved_json(index->index.search_vector({query, dim}, k)).dump());
    return KBQA_OK;
  });
}

kbqa_status kbqa_config_load(const char* path, kbqa_config** out) {
  KBQA_REQUIRE(path && out, "path and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    *out = new kbqa_config{kbqa::load_config(path)};
    return KBQA_OK;
  });
}

void kbqa_config_free(kbqa_config* config) { delete config; }

kbqa_status kbqa_config_set(kbqa_config* config, const char* key, const char* value) {
  KBQA_REQUIRE(config && key && value, "config, key and value must be non-null");
  return guarded([&] {
    const std::string k = key;
    kbqa::ConfigOverrides o;
    if (k == "k") o.k = parse_size(k, value);
    else if (k == "beam") o.beam = parse_size(k, value);
    else if (k == "lambda") {
      char* end = nullptr;
      double v = std::strtod(value, &end);
      if (end == value || *end != '\0') throw kbqa::ConfigError("lambda expects a number, got '" + std::string(value) + "'");
      o.lambda = v;
    } else if (k == "score_fn") o.score_fn = value;
    else if (k == "mode") o.mode = value;
    else if (k == "reader_url") o.reader_url = value;
    else if (k == "mock_fixture") o.mock_fixture = value;
    else throw kbqa::ConfigError("unknown override '" + k + "'");
    kbqa::PipelineConfig updated = config->config;
    kbqa::apply_overrides(updated, o);
    config->config = std::move(updated);
    return KBQA_OK;
  });
}

kbqa_status kbqa_run(const kbqa_config* config, const char* command, const char* arg, char** out_json) {
  KBQA_REQUIRE(config && command && out_json, "config, command and out_json must be non-null");
  *out_json = nullptr;
  return guarded([&] {
    const std::string c = command;
    const kbqa::PipelineConfig& cfg = config->config;
    nlohmann::json summary;
    if (c == "linearize") summary = kbqa::cmd_linearize(cfg);
    else if (c == "index-sparse") summary = kbqa::cmd_index_sparse(cfg);
    else if (c == "index-dense") summary = kbqa::cmd_index_dense(cfg);
    else if (c == "retrieve") summary = kbqa::cmd_retrieve(cfg);
    else if (c == "answer") summary = kbqa::cmd_answer(cfg);
    else if (c == "eval") summary = kbqa::cmd_eval(cfg);
    else if (c == "execute") {
      if (!arg) throw kbqa::ContractError("execute needs a logical form");
      summary = kbqa::cmd_execute(cfg, arg);
    } else {
      throw kbqa::ContractError("unknown command '" + c + "'");
    }
    *out_json = dup_string(summary.dump(2));
    if (c == "answer" && summary.value("failures", 0) > 0)
      return fail(KBQA_ERR_PARTIAL_FAILURE, std::to_string(summary["failures"].get<int>()) + " question(s) failed");
    if (c == "execute" && !summary.value("executable", false))
      return fail(KBQA_ERR_NOT_EXECUTABLE, summary.value("reason", std::string()));
    return KBQA_OK;
  });
}

}  // extern "C"
