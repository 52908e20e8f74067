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


#include <ucc/graph.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <ucc/error.h>

namespace ucc {

BipartiteGraph BipartiteGraph::from_edges(std::size_t num_users,
                                          std::size_t num_items,
                                          std::vector<Interaction> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  BipartiteGraph g;
  g.num_users_ = num_users;
  g.num_items_ = num_items;
  const std::size_t n = num_users + num_items;

  std::vector<std::size_t> degree(n, 0);
  for (const auto& e : edges) {
    if (e.user >= num_users || e.item >= num_items) {
      fail(ErrorCode::kShapeMismatch, "edge endpoint outside the graph");
    }
    ++degree[e.user];
    ++degree[num_users + e.item];
  }
  g.row_ptr_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    g.row_ptr_[v + 1] = g.row_ptr_[v] + degree[v];
  }
  g.col_.resize(g.row_ptr_[n]);
  g.coeff_.resize(g.row_ptr_[n]);

  // Edges are sorted by (user, item), so user rows fill in ascending item
  // order and item rows fill in ascending user order.
  std::vector<std::size_t> cursor(g.row_ptr_.begin(), g.row_ptr_.end() - 1);
  for (const auto& e : edges) {
    const std::size_t item_node = num_users + e.item;
    const double c = 1.0 / std::sqrt(static_cast<double>(degree[e.user]) *
                                     static_cast<double>(degree[item_node]));
    g.col_[cursor[e.user]] = static_cast<std::uint32_t>(item_node);
    g.coeff_[cursor[e.user]++] = c;
    g.col_[cursor[item_node]] = e.user;
    g.coeff_[cursor[item_node]++] = c;
  }
  g.edges_ = std::move(edges);
  return g;
}

bool BipartiteGraph::has_edge(UserId user, ItemId item) const {
  if (user >= num_users_ || item >= num_items_) return false;
  const auto row = neighbors(user);
  return std::binary_search(row.begin(), row.end(),
                            static_cast<std::uint32_t>(num_users_ + item));
}

BipartiteGraph build_graph(const InteractionSet& train) {
  require(!train.empty(), ErrorCode::kEmptyDataset,
          "cannot build a graph from an empty training set");
  return BipartiteGraph::from_edges(train.num_users, train.num_items,
                                    train.pairs);
}

AugmentationMask sample_mask(std::size_t num_edges, double rho,
                             std::uint64_t seed) {
  require(rho >= 0.0 && rho < 1.0, ErrorCode::kInvalidArgument,
          "dropout ratio must lie in [0, 1)");
  AugmentationMask mask{std::vector<bool>(num_edges, true), rho, seed};
  if (rho == 0.0) return mask;
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution drop(rho);
  for (std::size_t e = 0; e < num_edges; ++e) {
    mask.keep[e] = !drop(rng);
  }
  return mask;
}

BipartiteGraph apply_mask(const BipartiteGraph& g,
                          const AugmentationMask& mask) {
  require(mask.keep.size() == g.num_edges(), ErrorCode::kShapeMismatch,
          "mask length differs from edge count");
  std::vector<Interaction> kept;
  kept.reserve(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    if (mask.keep[e]) kept.push_back(g.edges()[e]);
  }
  return BipartiteGraph::from_edges(g.num_users(), g.num_items(),
                                    std::move(kept));
}

BipartiteGraph weak_augment(const BipartiteGraph& g, double rho,
                            std::uint64_t seed) {
  return apply_mask(g, sample_mask(g.num_edges(), rho, seed));
}

BipartiteGraph strong_augment(const BipartiteGraph& g,
                              const PseudoInteractionSet& pseudo) {
  std::vector<Interaction> edges = g.edges();
  edges.reserve(edges.size() + pseudo.size());
  for (const auto& t : pseudo.triples) {
    if (t.user >= g.num_users() || t.item >= g.num_items()) {
      fail(ErrorCode::kShapeMismatch, "pseudo interaction outside the graph");
    }
    edges.push_back({t.user, t.item});
  }
  return BipartiteGraph::from_edges(g.num_users(), g.num_items(),
                                    std::move(edges));
}

void write_edge_list(std::ostream& out, const BipartiteGraph& g) {
  for (const auto& e : g.edges()) {
    out << e.user << '\t' << e.item << '\n';
  }
}

}  // namespace ucc
