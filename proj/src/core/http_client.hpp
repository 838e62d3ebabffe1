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

#include <chrono>
#include <string>

#include <json.hpp>

#include "error.hpp"

namespace kbqa {

struct RemoteOptions {
  std::chrono::milliseconds timeout{30000};
  int max_attempts = 3;
  std::chrono::milliseconds backoff{200};
};

}  // namespace kbqa

namespace kbqa::http {

/// POSTs a JSON body and parses the JSON reply. Connection failures and 5xx
/// replies are retried with linear backoff and end in TransportError; other
/// non-2xx statuses and unparseable bodies raise ProtocolError.
nlohmann::json post_json(const std::string& base_url, const std::string& path,
                         const nlohmann::json& body, const RemoteOptions& options);

}  // namespace kbqa::http
