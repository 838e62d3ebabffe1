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

#include "http_client.hpp"

#include <thread>

#include <httplib.h>

namespace kbqa::http {

nlohmann::json post_json(const std::string& base_url, const std::string& path,
                         const nlohmann::json& body, const RemoteOptions& options) {
  const std::string payload = body.dump();
  std::string last_error = "no attempt made";
  const int attempts = std::max(1, options.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) std::this_thread::sleep_for(options.backoff * (attempt - 1));

    httplib::Client client(base_url);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = base_url + path + ": " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = base_url + path + ": HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      throw ProtocolError(base_url + path + ": HTTP " + std::to_string(res->status) + " " + res->body);
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::parse_error& e) {
      throw ProtocolError(base_url + path + ": malformed JSON reply: " + e.what());
    }
  }
  throw TransportError(last_error + " (after " + std::to_string(attempts) + " attempts)");
}

}  // namespace kbqa::http
