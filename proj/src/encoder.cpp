/*
 * Copyright 2026 The UCC Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <ucc/encoder.h>

#include <bit>
#include <cmath>
#include <fstream>
#include <random>

#include <ucc/error.h>

namespace ucc {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

EmbeddingTable init_embeddings(std::size_t num_users, std::size_t num_items,
                               std::size_t dim, std::uint64_t seed,
                               double scale) {
  require(num_users >= 1 && num_items >= 1 && dim >= 1,
          ErrorCode::kInvalidArgument, "embedding shape must be positive");
  require(scale > 0.0, ErrorCode::kInvalidArgument,
          "initialization scale must be positive");
  EmbeddingTable table(num_users, num_items, dim);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  for (auto& x : table.data.values()) x = normal(rng);
  return table;
}

Matrix spmm(const BipartiteGraph& g, const Matrix& x) {
  const std::size_t dim = x.cols();
  Matrix y(x.rows(), dim);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    auto out = y.row(v);
    const auto nbrs = g.neighbors(v);
    const auto coeffs = g.coefficients(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const auto in = x.row(nbrs[k]);
      const double c = coeffs[k];
      for (std::size_t d = 0; d < dim; ++d) out[d] += c * in[d];
    }
  }
  return y;
}

PropagationOutput propagate(const EmbeddingTable& e0, const BipartiteGraph& g,
                            std::size_t layers) {
  if (e0.num_users != g.num_users() || e0.num_items != g.num_items()) {
    fail(ErrorCode::kShapeMismatch, "embedding table and graph disagree");
  }
  PropagationOutput out;
  out.num_users = e0.num_users;
  out.layers.reserve(layers + 1);
  out.layers.push_back(e0.data);
  for (std::size_t l = 0; l < layers; ++l) {
    out.layers.push_back(spmm(g, out.layers.back()));
  }
  out.final = Matrix(e0.data.rows(), e0.data.cols());
  auto& acc = out.final.values();
  for (const auto& layer : out.layers) {
    const auto& v = layer.values();
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += v[k];
  }
  const double inv = 1.0 / static_cast<double>(layers + 1);
  for (auto& x : acc) x *= inv;
  return out;
}

Matrix propagate_backward(const Matrix& grad_final, const BipartiteGraph& g,
                          std::size_t layers) {
  Matrix acc = grad_final;
  Matrix cur = grad_final;
  for (std::size_t l = 0; l < layers; ++l) {
    cur = spmm(g, cur);
    const auto& v = cur.values();
    auto& a = acc.values();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += v[k];
  }
  const double inv = 1.0 / static_cast<double>(layers + 1);
  for (auto& x : acc.values()) x *= inv;
  return acc;
}

double score(const PropagationOutput& out, UserId user, ItemId item) {
  return dot(out.user(user), out.item(item));
}

std::vector<ItemId> top_k(const PropagationOutput& out, UserId user,
                          std::size_t k, std::span<const ItemId> exclude) {
  const std::size_t n = out.num_items();
  std::vector<std::pair<double, ItemId>> candidates;
  candidates.reserve(n);
  std::size_t ex = 0;
  const auto u = out.user(user);
  for (ItemId i = 0; i < n; ++i) {
    while (ex < exclude.size() && exclude[ex] < i) ++ex;
    if (ex < exclude.size() && exclude[ex] == i) continue;
    candidates.emplace_back(dot(u, out.item(i)), i);
  }
  const auto better = [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  };
  const std::size_t take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + take,
                    candidates.end(), better);
  std::vector<ItemId> ranked(take);
  for (std::size_t j = 0; j < take; ++j) ranked[j] = candidates[j].second;
  return ranked;
}

namespace {

constexpr char kMagic[] = "UCCEMB1\n";

void put_u64(std::ostream& out, std::uint64_t v) {
  char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<char>((v >> (8 * b)) & 0xff);
  out.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    fail(ErrorCode::kIo, "truncated checkpoint");
  }
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
  return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const EmbeddingTable& table) {
  out.write(kMagic, sizeof(kMagic) - 1);
  put_u64(out, table.num_users);
  put_u64(out, table.num_items);
  put_u64(out, table.dim());
  for (double x : table.data.values()) put_u64(out, std::bit_cast<std::uint64_t>(x));
}

EmbeddingTable read_checkpoint(std::istream& in) {
  char magic[sizeof(kMagic) - 1];
  if (!in.read(magic, sizeof(magic)) ||
      std::string_view(magic, sizeof(magic)) != std::string_view(kMagic)) {
    fail(ErrorCode::kIo, "not an embedding checkpoint (bad magic)");
  }
  const auto m = get_u64(in);
  const auto n = get_u64(in);
  const auto d = get_u64(in);
  if (m == 0 || n == 0 || d == 0 || (m + n) * d > (std::uint64_t{1} << 34)) {
    fail(ErrorCode::kIo, "implausible checkpoint shape");
  }
  EmbeddingTable table(m, n, d);
  for (auto& x : table.data.values()) {
    x = std::bit_cast<double>(get_u64(in));
    if (!std::isfinite(x)) fail(ErrorCode::kIo, "non-finite checkpoint entry");
  }
  return table;
}

void save_checkpoint(const EmbeddingTable& table,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  write_checkpoint(out, table);
}

EmbeddingTable load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace ucc
