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
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <ucc/dataset.h>
#include <ucc/encoder.h>
#include <ucc/graph.h>

namespace ucc::testing {

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ucc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Each (user, item) pair present independently with probability p.
inline InteractionSet random_bipartite(std::size_t users, std::size_t items,
                                       double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<std::string, std::string>> raw;
  for (std::size_t u = 0; u < users; ++u) {
    for (std::size_t i = 0; i < items; ++i) {
      if (coin(rng)) raw.emplace_back("u" + std::to_string(u), "i" + std::to_string(i));
    }
  }
  return from_raw(raw);
}

/// Training set view with every user and item of the given sizes in the id
/// space, whether or not they have interactions.
inline InteractionSet make_set(std::size_t users, std::size_t items,
                               std::vector<Interaction> pairs) {
  InteractionSet s;
  for (std::size_t u = 0; u < users; ++u) s.users.intern("u" + std::to_string(u));
  for (std::size_t i = 0; i < items; ++i) s.items.intern("i" + std::to_string(i));
  s.num_users = users;
  s.num_items = items;
  s.pairs = std::move(pairs);
  return s;
}

inline EmbeddingTable random_table(std::size_t users, std::size_t items,
                                   std::size_t dim, std::uint64_t seed,
                                   double lo = -1.0, double hi = 1.0) {
  EmbeddingTable t(users, items, dim);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(lo, hi);
  for (auto& x : t.data.values()) x = unit(rng);
  return t;
}

/// Dense normalized adjacency D^-1/2 A D^-1/2 over M + N nodes; rows of
/// isolated nodes are zero.
inline std::vector<std::vector<double>> dense_normalized_adjacency(
    std::size_t users, std::size_t items, const std::vector<Interaction>& edges) {
  const std::size_t n = users + items;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (const auto& e : edges) {
    a[e.user][users + e.item] = 1.0;
    a[users + e.item][e.user] = 1.0;
  }
  std::vector<double> deg(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) deg[r] += a[r][c];
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (a[r][c] != 0.0) a[r][c] /= std::sqrt(deg[r] * deg[c]);
    }
  }
  return a;
}

inline double max_relative_error(const std::vector<double>& got,
                                 const std::vector<double>& want) {
  double scale = 0.0;
  for (double w : want) scale = std::max(scale, std::abs(w));
  double worst = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) {
    worst = std::max(worst, std::abs(got[k] - want[k]) / std::max(scale, 1e-300));
  }
  return worst;
}

}  // namespace ucc::testing
