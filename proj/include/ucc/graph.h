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

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include <ucc/dataset.h>
#include <ucc/types.h>

namespace ucc {

/// Symmetric user-item graph in CSR form over M + N nodes: users occupy node
/// ids [0, M), item i is node M + i. Each stored arc carries the LightGCN
/// coefficient 1 / sqrt(d_u * d_i). Immutable once built.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Duplicated edges are collapsed. Nodes without edges get empty rows.
  static BipartiteGraph from_edges(std::size_t num_users, std::size_t num_items,
                                   std::vector<Interaction> edges);

  std::size_t num_users() const { return num_users_; }
  std::size_t num_items() const { return num_items_; }
  std::size_t num_nodes() const { return num_users_ + num_items_; }
  /// Undirected edge count.
  std::size_t num_edges() const { return edges_.size(); }

  std::size_t item_node(ItemId item) const { return num_users_ + item; }

  std::size_t degree(std::size_t node) const {
    return row_ptr_[node + 1] - row_ptr_[node];
  }
  std::span<const std::uint32_t> neighbors(std::size_t node) const {
    return {col_.data() + row_ptr_[node], degree(node)};
  }
  std::span<const double> coefficients(std::size_t node) const {
    return {coeff_.data() + row_ptr_[node], degree(node)};
  }

  /// Sorted, unique (user, item) edges.
  const std::vector<Interaction>& edges() const { return edges_; }
  bool has_edge(UserId user, ItemId item) const;

  friend bool operator==(const BipartiteGraph&,
                         const BipartiteGraph&) = default;

 private:
  std::size_t num_users_ = 0;
  std::size_t num_items_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_;
  std::vector<double> coeff_;
  std::vector<Interaction> edges_;
};

BipartiteGraph build_graph(const InteractionSet& train);

/// Keep-bits over the undirected edges of a graph, in edges() order.
struct AugmentationMask {
  std::vector<bool> keep;
  double rho = 0.0;
  std::uint64_t seed = 0;
};

AugmentationMask sample_mask(std::size_t num_edges, double rho,
                             std::uint64_t seed);
BipartiteGraph apply_mask(const BipartiteGraph& g, const AugmentationMask& mask);

/// Edge dropout: each undirected edge survives independently with
/// probability 1 - rho. Coefficients are recomputed from surviving degrees.
BipartiteGraph weak_augment(const BipartiteGraph& g, double rho,
                            std::uint64_t seed);

/// Edge addition: union of g's edges with the pseudo interactions.
BipartiteGraph strong_augment(const BipartiteGraph& g,
                              const PseudoInteractionSet& pseudo);

/// "user<TAB>item" per undirected edge, in edges() order.
void write_edge_list(std::ostream& out, const BipartiteGraph& g);

}  // namespace ucc
