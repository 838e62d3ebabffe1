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

#include "sparse_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "text.hpp"

namespace kbqa {

using nlohmann::json;

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    auto u = static_cast<unsigned char>(c);
    if (text::is_alnum(c) || u >= 0x80) {
      cur.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

SparseIndex SparseIndex::build(std::span<const Passage> passages, Bm25Params params) {
  SparseIndex idx;
  idx.params_ = params;

  std::vector<std::size_t> order(passages.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return passages[a].id < passages[b].id; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (passages[order[i]].id == passages[order[i - 1]].id)
      throw DataError("duplicate passage id '" + passages[order[i]].id + "'");

  idx.doc_ids_.reserve(order.size());
  idx.doc_lengths_.reserve(order.size());
  double total_length = 0;
  for (std::size_t doc = 0; doc < order.size(); ++doc) {
    const Passage& p = passages[order[doc]];
    auto tokens = tokenize(p.body);
    idx.doc_ids_.push_back(p.id);
    idx.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
    total_length += static_cast<double>(tokens.size());

    std::unordered_map<std::string, std::uint32_t> counts;
    for (auto& t : tokens) ++counts[t];
    for (auto& [term, tf] : counts) {
      auto [it, inserted] = idx.vocabulary_.try_emplace(term, static_cast<std::uint32_t>(idx.terms_.size()));
      if (inserted) {
        idx.terms_.push_back(term);
        idx.postings_.emplace_back();
      }
      idx.postings_[it->second].push_back(Posting{static_cast<std::uint32_t>(doc), tf});
    }
  }
  idx.avg_length_ = order.empty() ? 0.0 : total_length / static_cast<double>(order.size());
  return idx;
}

std::span<const Posting> SparseIndex::postings(std::string_view term) const {
  auto it = vocabulary_.find(std::string(term));
  if (it == vocabulary_.end()) return {};
  return postings_[it->second];
}

std::vector<RetrievedPassage> SparseIndex::search(std::string_view query, std::size_t k) const {
  if (k == 0) throw ContractError("k must be >= 1");
  if (doc_ids_.empty()) return {};

  std::vector<std::string> terms;
  std::unordered_set<std::string> seen;
  for (auto& t : tokenize(query))
    if (seen.insert(t).second) terms.push_back(std::move(t));

  const double n = static_cast<double>(doc_ids_.size());
  std::vector<double> scores(doc_ids_.size(), 0.0);
  std::vector<std::uint32_t> touched;
  for (const auto& term : terms) {
    auto plist = postings(term);
    if (plist.empty()) continue;
    const double df = static_cast<double>(plist.size());
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    for (const Posting& p : plist) {
      const double tf = p.tf;
      const double norm = 1.0 - params_.b + params_.b * doc_lengths_[p.doc] / avg_length_;
      if (scores[p.doc] == 0.0) touched.push_back(p.doc);
      scores[p.doc] += idf * tf / (tf + params_.k1 * norm);
    }
  }

  auto better = [&](std::uint32_t a, std::uint32_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  touched.erase(std::remove_if(touched.begin(), touched.end(), [&](std::uint32_t d) { return !(scores[d] > 0); }),
                touched.end());
  std::size_t take = std::min(k, touched.size());
  std::partial_sort(touched.begin(), touched.begin() + static_cast<std::ptrdiff_t>(take), touched.end(), better);

  std::vector<RetrievedPassage> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back(RetrievedPassage{doc_ids_[touched[i]], scores[touched[i]], i + 1});
  return out;
}

void SparseIndex::save(const std::string& path) const {
  json j = {{"format", "kbqa-sparse"},
            {"version", 1},
            {"k1", params_.k1},
            {"b", params_.b},
            {"doc_ids", doc_ids_},
            {"doc_lengths", doc_lengths_},
            {"terms", terms_}};
  json plists = json::array();
  for (const auto& plist : postings_) {
    json flat = json::array();
    for (const Posting& p : plist) {
      flat.push_back(p.doc);
      flat.push_back(p.tf);
    }
    plists.push_back(std::move(flat));
  }
  j["postings"] = std::move(plists);
  text::write_file(path, j.dump());
}

SparseIndex SparseIndex::load(const std::string& path) {
  json j;
  try {
    j = json::parse(text::read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (j.value("format", "") != "kbqa-sparse") throw DataError(path + ": not a sparse index");
  if (j.value("version", 0) != 1) throw DataError(path + ": unsupported sparse index version");

  SparseIndex idx;
  try {
    idx.params_ = Bm25Params{j.at("k1").get<double>(), j.at("b").get<double>()};
    idx.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
    idx.doc_lengths_ = j.at("doc_lengths").get<std::vector<std::uint32_t>>();
    idx.terms_ = j.at("terms").get<std::vector<std::string>>();
    const auto& plists = j.at("postings");
    if (plists.size() != idx.terms_.size() || idx.doc_lengths_.size() != idx.doc_ids_.size())
      throw DataError(path + ": inconsistent sparse index");
    for (std::size_t t = 0; t < idx.terms_.size(); ++t) {
      idx.vocabulary_.emplace(idx.terms_[t], static_cast<std::uint32_t>(t));
      const auto& flat = plists[t];
      std::vector<Posting> plist;
      plist.reserve(flat.size() / 2);
      for (std::size_t i = 0; i + 1 < flat.size(); i += 2)
        plist.push_back(Posting{flat[i].get<std::uint32_t>(), flat[i + 1].get<std::uint32_t>()});
      idx.postings_.push_back(std::move(plist));
    }
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  double total = 0;
  for (auto len : idx.doc_lengths_) total += len;
  idx.avg_length_ = idx.doc_ids_.empty() ? 0.0 : total / static_cast<double>(idx.doc_ids_.size());
  return idx;
}

}  // namespace kbqa
