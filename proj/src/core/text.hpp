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

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kbqa::text {

bool is_space(char c) noexcept;
bool is_alnum(char c) noexcept;

// Trims and collapses every whitespace run to one ASCII space.
std::string normalize_whitespace(std::string_view s);

std::vector<std::string_view> split_words(std::string_view s);
std::size_t word_count(std::string_view s);

std::string to_lower_ascii(std::string_view s);

// Replaces '.', '_' and '/' with spaces and collapses the result.
std::string replace_relation_punctuation(std::string_view relation);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// 64-bit FNV-1a, used for manifest checksums and provider fingerprints.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace kbqa::text
