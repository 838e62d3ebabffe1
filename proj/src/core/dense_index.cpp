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

#include "dense_index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "text.hpp"

namespace kbqa {

using nlohmann::json;

Vector EmbeddingProvider::embed_passage(const std::string& text) const {
  return embed(EmbedMode::passage, std::span<const std::string>(&text, 1)).at(0);
}

Vector EmbeddingProvider::embed_question(const std::string& text) const {
  return embed(EmbedMode::question, std::span<const std::string>(&text, 1)).at(0);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const char* mode_name(EmbedMode m) { return m == EmbedMode::passage ? "passage" : "question"; }

}  // namespace

HashProjectionProvider::HashProjectionProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim == 0) throw ConfigError("embedding dim must be >= 1");
}

std::string HashProjectionProvider::fingerprint() const {
  return "hash-projection/v1 dim=" + std::to_string(dim_) + " seed=" + std::to_string(seed_);
}

std::vector<Vector> HashProjectionProvider::embed(EmbedMode, std::span<const std::string> texts) const {
  std::vector<Vector> out;
  out.reserve(texts.size());
  std::vector<double> acc(dim_);
  for (const auto& t : texts) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto& token : tokenize(t)) {
      std::uint64_t state = text::fnv1a64(token, 0xcbf29ce484222325ULL ^ seed_);
      for (std::size_t i = 0; i < dim_; ++i)
        acc[i] += static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
    }
    double norm = 0;
    for (double x : acc) norm += x * x;
    norm = std::sqrt(norm);
    Vector v(dim_, 0.0f);
    if (norm > 0)
      for (std::size_t i = 0; i < dim_; ++i) v[i] = static_cast<float>(acc[i] / norm);
    out.push_back(std::move(v));
  }
  return out;
}

StaticEmbeddingProvider::StaticEmbeddingProvider(std::size_t dim, std::string fingerprint)
    : dim_(dim), fingerprint_(std::move(fingerprint)) {}

void StaticEmbeddingProvider::add(EmbedMode mode, std::string text, Vector v) {
  if (v.size() != dim_) throw DataError("static embedding has wrong dim");
  (mode == EmbedMode::passage ? passages_ : questions_)[std::move(text)] = std::move(v);
}

std::vector<Vector> StaticEmbeddingProvider::embed(EmbedMode mode, std::span<const std::string> texts) const {
  const auto& table = mode == EmbedMode::passage ? passages_ : questions_;
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto it = table.find(t);
    if (it == table.end())
      throw NotFoundError(std::string("no static ") + mode_name(mode) + " embedding for '" + t + "'");
    out.push_back(it->second);
  }
  return out;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string base_url, std::size_t dim, RemoteOptions options)
    : base_url_(std::move(base_url)), dim_(dim), options_(options) {}

std::size_t RemoteEmbeddingProvider::dim() const {
  if (dim_.load() == 0) {
    std::string probe;
    dim_.store(embed(EmbedMode::question, std::span<const std::string>(&probe, 1)).at(0).size());
  }
  return dim_.load();
}

std::string RemoteEmbeddingProvider::fingerprint() const {
  return "remote " + base_url_ + " dim=" + std::to_string(dim());
}

std::vector<Vector> RemoteEmbeddingProvider::embed(EmbedMode mode, std::span<const std::string> texts) const {
  json req = {{"mode", mode_name(mode)}, {"texts", json::array()}};
  for (const auto& t : texts) req["texts"].push_back(t);
  json res = http::post_json(base_url_, "/embed", req, options_);
  if (!res.is_object() || !res.contains("dim") || !res.contains("vectors") || !res["vectors"].is_array())
    throw ProtocolError("/embed reply must carry \"dim\" and \"vectors\"");
  std::size_t dim = 0;
  std::vector<Vector> out;
  try {
    dim = res["dim"].get<std::size_t>();
    out = res["vectors"].get<std::vector<Vector>>();
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("/embed reply: ") + e.what());
  }
  if (out.size() != texts.size())
    throw ProtocolError("/embed returned " + std::to_string(out.size()) + " vectors for " +
                        std::to_string(texts.size()) + " texts");
  for (const auto& v : out)
    if (v.size() != dim) throw ProtocolError("/embed vector length disagrees with declared dim");
  const std::size_t known = dim_.load();
  if (known != 0 && dim != known) throw DataError("/embed dim changed from " + std::to_string(known) +
                                                " to " + std::to_string(dim));
  return out;
}

DenseIndex DenseIndex::from_rows(std::vector<std::string> ids, std::vector<float> matrix, std::size_t dim,
                                 std::string fingerprint) {
  if (matrix.size() != ids.size() * dim) throw DataError("dense matrix shape mismatch");
  DenseIndex idx;
  idx.dim_ = dim;
  idx.fingerprint_ = std::move(fingerprint);
  idx.ids_ = std::move(ids);
  idx.matrix_ = std::move(matrix);
  return idx;
}

DenseIndex DenseIndex::build(std::span<const Passage> passages, const EmbeddingProvider& provider,
                             std::size_t batch_size) {
  if (batch_size == 0) batch_size = 1;
  std::vector<std::size_t> order(passages.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return passages[a].id < passages[b].id; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (passages[order[i]].id == passages[order[i - 1]].id)
      throw DataError("duplicate passage id '" + passages[order[i]].id + "'");

  DenseIndex idx;
  idx.dim_ = provider.dim();
  idx.fingerprint_ = provider.fingerprint();
  idx.ids_.reserve(order.size());
  idx.matrix_.reserve(order.size() * idx.dim_);

  std::vector<std::string> batch;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    std::size_t end = std::min(order.size(), start + batch_size);
    batch.clear();
    for (std::size_t i = start; i < end; ++i) batch.push_back(passages[order[i]].body);
    std::vector<Vector> vectors;
    try {
      vectors = provider.embed(EmbedMode::passage, batch);
    } catch (const TransportError& e) {
      throw TransportError("embedding failed at passage '" + passages[order[start]].id + "': " + e.what());
    }
    if (vectors.size() != batch.size()) throw DataError("provider returned wrong number of vectors");
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const std::string& id = passages[order[start + i]].id;
      if (vectors[i].size() != idx.dim_)
        throw DataError("passage '" + id + "': vector length " + std::to_string(vectors[i].size()) +
                        " != dim " + std::to_string(idx.dim_));
      idx.ids_.push_back(id);
      idx.matrix_.insert(idx.matrix_.end(), vectors[i].begin(), vectors[i].end());
    }
  }
  return idx;
}

std::vector<RetrievedPassage> DenseIndex::search(std::string_view question, const EmbeddingProvider& provider,
                                                 std::size_t k) const {
  if (provider.fingerprint() != fingerprint_)
    throw ContractError("provider fingerprint '" + provider.fingerprint() + "' does not match index '" +
                        fingerprint_ + "'");
  Vector q = provider.embed_question(std::string(question));
  return search_vector(q, k);
}

std::vector<RetrievedPassage> DenseIndex::search_vector(std::span<const float> query, std::size_t k) const {
  if (k == 0) throw ContractError("k must be >= 1");
  if (query.size() != dim_)
    throw DataError("question vector length " + std::to_string(query.size()) + " != dim " + std::to_string(dim_));
  const std::size_t n = ids_.size();
  std::vector<double> scores(n);
  for (std::size_t r = 0; r < n; ++r) {
    const float* row = matrix_.data() + r * dim_;
    double s = 0;
    for (std::size_t i = 0; i < dim_; ++i) s += static_cast<double>(row[i]) * static_cast<double>(query[i]);
    scores[r] = s;
  }
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::size_t take = std::min(k, n);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return a < b;
                    });
  std::vector<RetrievedPassage> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(RetrievedPassage{ids_[order[i]], scores[order[i]], i + 1});
  return out;
}

DenseIndex DenseIndex::scaled(float factor) const {
  DenseIndex copy = *this;
  for (float& x : copy.matrix_) x *= factor;
  return copy;
}

namespace {

constexpr char kMagic[8] = {'K', 'B', 'Q', 'A', 'D', 'N', 'S', '1'};

template <typename T>
void put_le(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

template <typename T>
T get_le(std::string_view in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw DataError("truncated dense index");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<T>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  pos += sizeof(T);
  return v;
}

std::string get_bytes(std::string_view in, std::size_t& pos, std::size_t n) {
  if (pos + n > in.size()) throw DataError("truncated dense index");
  std::string s(in.substr(pos, n));
  pos += n;
  return s;
}

}  // namespace

void DenseIndex::save(const std::string& path) const {
  std::string out(kMagic, sizeof kMagic);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dim_));
  put_le<std::uint64_t>(out, ids_.size());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(fingerprint_.size()));
  out += fingerprint_;
  for (const auto& id : ids_) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(id.size()));
    out += id;
  }
  for (float f : matrix_) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
  text::write_file(path, out);
}

DenseIndex DenseIndex::load(const std::string& path) {
  const std::string in = text::read_file(path);
  if (in.size() < sizeof kMagic || std::memcmp(in.data(), kMagic, sizeof kMagic) != 0)
    throw DataError(path + ": not a dense index");
  std::size_t pos = sizeof kMagic;
  if (get_le<std::uint32_t>(in, pos) != 1) throw DataError(path + ": unsupported dense index version");
  DenseIndex idx;
  idx.dim_ = get_le<std::uint32_t>(in, pos);
  auto rows = get_le<std::uint64_t>(in, pos);
  idx.fingerprint_ = get_bytes(in, pos, get_le<std::uint32_t>(in, pos));
  if (rows > in.size()) throw DataError(path + ": implausible row count");
  idx.ids_.reserve(rows);
  for (std::uint64_t r = 0; r < rows; ++r) idx.ids_.push_back(get_bytes(in, pos, get_le<std::uint32_t>(in, pos)));
  idx.matrix_.reserve(rows * idx.dim_);
  for (std::uint64_t i = 0; i < rows * idx.dim_; ++i)
    idx.matrix_.push_back(std::bit_cast<float>(get_le<std::uint32_t>(in, pos)));
  if (pos != in.size()) throw DataError(path + ": trailing bytes in dense index");
  return idx;
}

}  // namespace kbqa
