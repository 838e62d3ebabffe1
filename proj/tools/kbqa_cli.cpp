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

// Command-line front end over libkbqa.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kbqa/kbqa.h"

namespace {

enum Exit { kSuccess = 0, kConfigError = 1, kDataError = 2, kPartialFailure = 3 };

int exit_code(kbqa_status s) {
  switch (s) {
    case KBQA_OK: return kSuccess;
    case KBQA_ERR_CONFIG:
    case KBQA_ERR_INVALID_ARGUMENT: return kConfigError;
    case KBQA_ERR_PARTIAL_FAILURE: return kPartialFailure;
    default: return kDataError;
  }
}

int report(kbqa_status s, const char* what) {
  std::fprintf(stderr, "kbqa: %s: %s: %s\n", what, kbqa_status_name(s), kbqa_last_error());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knowledge-base question answering pipeline"};
  app.set_version_flag("--version", std::string(kbqa_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::size_t> k, beam;
  std::optional<double> lambda;
  std::optional<std::string> score_fn, mode, reader_url, mock_fixture;

  app.add_option("--config", config_path, "Pipeline config file (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--k", k, "Passages retrieved per question");
  app.add_option("--beam", beam, "Reader beam size B");
  app.add_option("--lambda", lambda, "Weight of executed logical-form answers, in [0, 1]");
  app.add_option("--score-fn", score_fn, "Rank score function: reciprocal or linear");
  app.add_option("--mode", mode, "Answer mode: single or multi");
  app.add_option("--reader-url", reader_url, "Base URL of a reader service");
  app.add_option("--mock-fixture", mock_fixture, "Mock reader fixture (JSON)");

  std::string logical_form;
  const char* commands[][2] = {
      {"linearize", "Linearize the KB into passage shards"},
      {"index-sparse", "Build the BM25 index"},
      {"index-dense", "Build the dense index"},
      {"retrieve", "Retrieve passages for every dataset question"},
      {"answer", "Answer every dataset question"},
      {"eval", "Score predictions against the dataset"},
      {"execute", "Execute one logical form against the KB"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    if (std::string(c[0]) == "execute") sub->add_option("lf", logical_form, "Logical form")->required();
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  kbqa_config* cfg = nullptr;
  kbqa_status s = kbqa_config_load(config_path.c_str(), &cfg);
  if (s != KBQA_OK) return report(s, "loading config");

  auto set = [&](const char* key, const std::optional<std::string>& v) {
    if (!v || s != KBQA_OK) return;
    s = kbqa_config_set(cfg, key, v->c_str());
  };
  set("k", k ? std::optional<std::string>(std::to_string(*k)) : std::nullopt);
  set("beam", beam ? std::optional<std::string>(std::to_string(*beam)) : std::nullopt);
  if (lambda) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *lambda);
    set("lambda", std::string(buf));
  }
  set("score_fn", score_fn);
  set("mode", mode);
  set("reader_url", reader_url);
  set("mock_fixture", mock_fixture);
  if (s != KBQA_OK) {
    int rc = report(s, "applying flags");
    kbqa_config_free(cfg);
    return rc;
  }

  char* out = nullptr;
  s = kbqa_run(cfg, command.c_str(), command == "execute" ? logical_form.c_str() : nullptr, &out);
  if (out) std::printf("%s\n", out);
  kbqa_string_free(out);
  kbqa_config_free(cfg);
  if (s == KBQA_ERR_NOT_EXECUTABLE) {
    std::fprintf(stderr, "kbqa: not executable: %s\n", kbqa_last_error());
    return kDataError;
  }
  if (s != KBQA_OK) return report(s, command.c_str());
  return kSuccess;
}
