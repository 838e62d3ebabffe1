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

#include <functional>
#include <string>

#include <json.hpp>

namespace kbqa {

/// Calls `fn(row, line_no)` for each non-blank line of a JSON-lines file.
/// Throws IoError if unreadable, ParseError("path:line: ...") on bad JSON and
/// DataError("path:line: ...") for errors raised by `fn`.
void for_each_jsonl(const std::string& path, const std::function<void(const nlohmann::json&, std::size_t)>& fn);

}  // namespace kbqa
