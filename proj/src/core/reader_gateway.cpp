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

#include "reader_gateway.hpp"

#include <algorithm>
#include <unordered_set>

#include "text.hpp"

namespace kbqa {

const char* prefix_for(OutputKind kind) noexcept {
  return kind == OutputKind::answer ? kAnswerPrefix : kLogicalFormPrefix;
}

std::vector<std::string> ReaderInput::encoder_texts() const {
  std::vector<std::string> out;
  const std::string head = prefix + " " + question;
  if (passages.empty()) {
    out.push_back(head);
    return out;
  }
  out.reserve(passages.size());
  for (const auto& p : passages) out.push_back(head + " title: " + p.title + " context: " + p.body);
  return out;
}

ReaderInput build_reader_input(const std::string& question, std::span<const RetrievedPassage> retrieved,
                               const PassageLookup& passages, OutputKind kind) {
  ReaderInput in;
  in.prefix = prefix_for(kind);
  in.question = question;
  in.passages.reserve(retrieved.size());
  for (const auto& r : retrieved) {
    const Passage& p = passages.at(r.passage_id);
    in.passages.push_back({p.title, p.body});
  }
  return in;
}

MockReader MockReader::from_json(const nlohmann::json& fixture) {
  MockReader m;
  if (!fixture.is_object() || !fixture.contains("entries") || !fixture["entries"].is_array())
    throw DataError("mock fixture: expected {\"entries\": [...]}");
  for (const auto& e : fixture["entries"]) {
    if (!e.is_object() || !e.contains("prefix") || !e.contains("question") || !e.contains("candidates"))
      throw DataError("mock fixture: entry needs prefix, question and candidates");
    std::vector<std::string> c;
    for (const auto& v : e["candidates"]) {
      if (!v.is_string()) throw DataError("mock fixture: candidates must be strings");
      c.push_back(v.get<std::string>());
    }
    m.add(e["prefix"].get<std::string>(), e["question"].get<std::string>(), std::move(c));
  }
  return m;
}

MockReader MockReader::from_file(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return from_json(j);
}

void MockReader::add(std::string prefix, std::string question, std::vector<std::string> candidates) {
  table_[{std::move(prefix), text::normalize_whitespace(question)}] = std::move(candidates);
}

std::vector<std::string> MockReader::generate(const ReaderInput& input, std::size_t beam_size) const {
  auto it = table_.find({input.prefix, text::normalize_whitespace(input.question)});
  if (it == table_.end())
    throw NotFoundError("mock reader has no entry for " + input.prefix + " " + input.question);
  std::vector<std::string> out = it->second;
  if (out.size() > beam_size) out.resize(beam_size);
  return out;
}

RemoteReader::RemoteReader(std::string base_url, RemoteOptions options)
    : base_url_(std::move(base_url)), options_(options) {}

nlohmann::json RemoteReader::request_body(const ReaderInput& input, std::size_t beam_size) {
  nlohmann::json passages = nlohmann::json::array();
  for (const auto& p : input.passages) passages.push_back({{"title", p.title}, {"text", p.body}});
  return {{"prefix", input.prefix}, {"question", input.question}, {"passages", passages}, {"beam_size", beam_size}};
}

std::vector<std::string> RemoteReader::parse_response(const nlohmann::json& reply) {
  if (!reply.is_object() || !reply.contains("candidates") || !reply["candidates"].is_array())
    throw ProtocolError("/generate reply lacks a candidates array");
  const auto& arr = reply["candidates"];
  std::vector<std::pair<long long, std::string>> ranked;
  for (const auto& c : arr) {
    if (!c.is_object() || !c.contains("text") || !c["text"].is_string() || !c.contains("rank") ||
        !c["rank"].is_number_integer())
      throw ProtocolError("/generate candidate needs string text and integer rank");
    ranked.emplace_back(c["rank"].get<long long>(), c["text"].get<std::string>());
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (ranked[i].first != static_cast<long long>(i + 1))
      throw ProtocolError("/generate ranks are not contiguous from 1");
  std::vector<std::string> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(std::move(r.second));
  return out;
}

std::vector<std::string> RemoteReader::generate(const ReaderInput& input, std::size_t beam_size) const {
  return parse_response(http::post_json(base_url_, "/generate", request_body(input, beam_size), options_));
}

CandidateBeam call_reader(const ReaderInput& input, std::size_t beam_size, const ReaderBackend& backend) {
  if (beam_size == 0) throw ContractError("beam size must be >= 1");
  CandidateBeam beam;
  beam.kind = input.prefix == kAnswerPrefix ? OutputKind::answer : OutputKind::logical_form;
  beam.beam_size = beam_size;
  std::unordered_set<std::string> seen;
  for (const auto& raw : backend.generate(input, beam_size)) {
    std::string c = text::normalize_whitespace(raw);
    if (c.empty() || !seen.insert(c).second) continue;
    beam.candidates.push_back(std::move(c));
    if (beam.candidates.size() == beam_size) break;
  }
  return beam;
}

AnswerSet split_multi_answer(const std::string& candidate) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= candidate.size()) {
    std::size_t end = candidate.find('|', start);
    if (end == std::string::npos) end = candidate.size();
    parts.push_back(candidate.substr(start, end - start));
    start = end + 1;
  }
  return AnswerSet(parts);
}

}  // namespace kbqa
