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


#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <unordered_set>
#include <vector>

#include <ucc/graph.h>
#include <ucc/types.h>

namespace ucc {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  void fill(double value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

/// Layer-0 parameters: rows [0, M) are users, rows [M, M + N) are items.
struct EmbeddingTable {
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  Matrix data;

  EmbeddingTable() = default;
  EmbeddingTable(std::size_t users, std::size_t items, std::size_t dim)
      : num_users(users), num_items(items), data(users + items, dim) {}

  std::size_t dim() const { return data.cols(); }
  std::size_t num_nodes() const { return num_users + num_items; }
  std::span<const double> user(UserId u) const { return data.row(u); }
  std::span<const double> item(ItemId i) const { return data.row(num_users + i); }

  friend bool operator==(const EmbeddingTable&,
                         const EmbeddingTable&) = default;
};

/// d(loss)/d(layer-0 embeddings); same shape as EmbeddingTable.
using GradientTable = EmbeddingTable;

EmbeddingTable init_embeddings(std::size_t num_users, std::size_t num_items,
                               std::size_t dim, std::uint64_t seed,
                               double scale);

struct PropagationOutput {
  std::size_t num_users = 0;
  /// Mean of layers.
  Matrix final;
  /// layers[0] is the input; layers[l + 1] = A_hat * layers[l].
  std::vector<Matrix> layers;

  std::span<const double> user(UserId u) const { return final.row(u); }
  std::span<const double> item(ItemId i) const {
    return final.row(num_users + i);
  }
  std::size_t num_items() const { return final.rows() - num_users; }
};

/// y = A_hat * x over the graph's normalized adjacency.
Matrix spmm(const BipartiteGraph& g, const Matrix& x);

PropagationOutput propagate(const EmbeddingTable& e0, const BipartiteGraph& g,
                            std::size_t layers);

/// Pulls a gradient on the propagated (final) embeddings back to layer 0.
/// A_hat is symmetric, so the adjoint of the layer mean is
/// (1 / (L + 1)) * sum_l A_hat^l * grad.
Matrix propagate_backward(const Matrix& grad_final, const BipartiteGraph& g,
                          std::size_t layers);

double score(const PropagationOutput& out, UserId user, ItemId item);

/// The k best items for a user by score, skipping `exclude` (sorted
/// ascending); ties go to the smaller item id.
std::vector<ItemId> top_k(const PropagationOutput& out, UserId user,
                          std::size_t k, std::span<const ItemId> exclude);

// Checkpoint: "UCCEMB1\n", little-endian u64 M, N, D, then (M + N) * D
// little-endian doubles, row-major.
void write_checkpoint(std::ostream& out, const EmbeddingTable& table);
EmbeddingTable read_checkpoint(std::istream& in);
void save_checkpoint(const EmbeddingTable& table,
                     const std::filesystem::path& path);
EmbeddingTable load_checkpoint(const std::filesystem::path& path);

}  // namespace ucc
