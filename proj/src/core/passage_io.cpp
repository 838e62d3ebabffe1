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

#include "passage_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "text.hpp"

namespace kbqa {

namespace fs = std::filesystem;
using nlohmann::json;

std::string passage_to_jsonl(const Passage& p) {
  json j = {{"id", p.id}, {"title", p.title}, {"text", p.body}};
  return j.dump() + "\n";
}

Passage passage_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("bad passage record: ") + e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j.contains("text"))
    throw ParseError("passage record needs \"id\" and \"text\"");
  Passage p;
  p.id = j.at("id").get<std::string>();
  p.title = j.value("title", std::string());
  p.body = j.at("text").get<std::string>();
  p.word_count = text::word_count(p.body);
  return p;
}

PassageManifest write_passage_shards(const std::string& dir, std::span<const Passage> passages,
                                     std::size_t shard_size, std::size_t document_count) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  PassageManifest m;
  m.passage_count = passages.size();
  m.document_count = document_count;
  std::size_t per_shard = shard_size == 0 ? std::max<std::size_t>(passages.size(), 1) : shard_size;
  std::uint64_t total = text::fnv1a64("");
  std::size_t shard_no = 0;
  for (std::size_t start = 0; start < passages.size(); start += per_shard, ++shard_no) {
    std::size_t end = std::min(passages.size(), start + per_shard);
    std::string body;
    for (std::size_t i = start; i < end; ++i) body += passage_to_jsonl(passages[i]);
    char name[32];
    std::snprintf(name, sizeof name, "passages-%05zu.jsonl", shard_no);
    text::write_file((fs::path(dir) / name).string(), body);
    m.shards.push_back(ShardInfo{name, end - start, text::hex64(text::fnv1a64(body))});
    total = text::fnv1a64(body, total);
  }
  m.checksum = text::hex64(total);

  json j = {{"format", "kbqa-passages"},
            {"version", 1},
            {"passage_count", m.passage_count},
            {"document_count", m.document_count},
            {"checksum", m.checksum},
            {"shards", json::array()}};
  for (const auto& s : m.shards)
    j["shards"].push_back({{"file", s.file}, {"count", s.count}, {"checksum", s.checksum}});
  text::write_file((fs::path(dir) / "manifest.json").string(), j.dump(2) + "\n");
  return m;
}

PassageManifest read_manifest(const std::string& dir) {
  json j;
  try {
    j = json::parse(text::read_file((fs::path(dir) / "manifest.json").string()));
  } catch (const json::exception& e) {
    throw ParseError(dir + "/manifest.json: " + e.what());
  }
  if (j.value("format", "") != "kbqa-passages") throw DataError(dir + ": not a passage manifest");
  PassageManifest m;
  m.passage_count = j.at("passage_count").get<std::size_t>();
  m.document_count = j.value("document_count", std::size_t{0});
  m.checksum = j.at("checksum").get<std::string>();
  for (const auto& s : j.at("shards"))
    m.shards.push_back(ShardInfo{s.at("file").get<std::string>(), s.at("count").get<std::size_t>(),
                                 s.value("checksum", std::string())});
  return m;
}

std::vector<Passage> read_passages_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<Passage> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::normalize_whitespace(line).empty()) continue;
    try {
      out.push_back(passage_from_json(line));
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), line_no);
    }
  }
  return out;
}

std::vector<Passage> read_passages(const std::string& dir) {
  PassageManifest m = read_manifest(dir);
  std::vector<Passage> out;
  out.reserve(m.passage_count);
  for (const auto& s : m.shards) {
    const std::string path = (fs::path(dir) / s.file).string();
    if (!s.checksum.empty() && text::hex64(text::fnv1a64(text::read_file(path))) != s.checksum)
      throw DataError(s.file + ": checksum mismatch");
    auto part = read_passages_jsonl(path);
    if (part.size() != s.count)
      throw DataError(s.file + ": expected " + std::to_string(s.count) + " passages, found " +
                      std::to_string(part.size()));
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  if (out.size() != m.passage_count) throw DataError(dir + ": manifest passage count mismatch");
  return out;
}

PassageLookup::PassageLookup(std::vector<Passage> passages) : passages_(std::move(passages)) {
  index_.reserve(passages_.size());
  for (std::size_t i = 0; i < passages_.size(); ++i)
    if (!index_.emplace(passages_[i].id, i).second)
      throw DataError("duplicate passage id '" + passages_[i].id + "'");
}

const Passage* PassageLookup::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &passages_[it->second];
}

const Passage& PassageLookup::at(std::string_view id) const {
  const Passage* p = find(id);
  if (!p) throw NotFoundError("unknown passage id '" + std::string(id) + "'");
  return *p;
}

}  // namespace kbqa
