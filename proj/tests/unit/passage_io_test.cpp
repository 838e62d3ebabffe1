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

#include "passage_io.hpp"
#include "text.hpp"

using namespace kbqa;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("kbqa_passage_io_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<Passage> sample() {
  return {{"m.a#0", "A", "A r one.", 3}, {"m.a#1", "A", "A r \"two\".", 3}, {"m.b#0", "B", "B caf\xC3\xA9.", 2}};
}

}  // namespace

TEST_CASE("JSONL record round trip") {
  Passage p{"m.a#0", "A", "say \"hi\"\tnow", 3};
  std::string line = passage_to_jsonl(p);
  CHECK(line.back() == '\n');
  CHECK(passage_from_json(line) == p);
  CHECK_THROWS_AS(passage_from_json("{\"title\":\"x\"}"), ParseError);
  CHECK_THROWS_AS(passage_from_json("not json"), ParseError);
}

TEST_CASE("shards and manifest") {
  fs::path dir = scratch("shards");
  auto ps = sample();
  PassageManifest m = write_passage_shards(dir.string(), ps, 2, 2);
  CHECK(m.passage_count == 3);
  CHECK(m.document_count == 2);
  REQUIRE(m.shards.size() == 2);
  CHECK(m.shards[0].file == "passages-00000.jsonl");
  CHECK(m.shards[1].count == 1);

  PassageManifest back = read_manifest(dir.string());
  CHECK(back.checksum == m.checksum);
  CHECK(read_passages(dir.string()) == ps);

  // Rewriting identical content reproduces the checksum.
  PassageManifest again = write_passage_shards(dir.string(), ps, 2, 2);
  CHECK(again.checksum == m.checksum);

  // Tampering is detected.
  text::write_file((dir / "passages-00001.jsonl").string(), passage_to_jsonl({"m.b#0", "B", "changed", 1}));
  CHECK_THROWS_AS(read_passages(dir.string()), DataError);
  fs::remove_all(dir);
}

TEST_CASE("empty passage set") {
  fs::path dir = scratch("empty");
  PassageManifest m = write_passage_shards(dir.string(), {}, 0, 0);
  CHECK(m.passage_count == 0);
  CHECK(m.shards.empty());
  CHECK(read_passages(dir.string()).empty());
  fs::remove_all(dir);
}

TEST_CASE("lookup") {
  PassageLookup l(sample());
  CHECK(l.size() == 3);
  CHECK(l.at("m.b#0").title == "B");
  CHECK(l.find("m.c#0") == nullptr);
  CHECK_THROWS_AS(l.at("m.c#0"), NotFoundError);
  auto dup = sample();
  dup.push_back(dup[0]);
  CHECK_THROWS_AS(PassageLookup{dup}, DataError);
}
