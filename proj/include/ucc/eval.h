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

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <ucc/dataset.h>
#include <ucc/encoder.h>

namespace ucc {

inline constexpr std::size_t kNumPopularityGroups = 10;

/// |top-k(ranked) ∩ relevant| / |relevant|. `relevant` is sorted ascending.
double recall_at_k(std::span<const ItemId> ranked,
                   std::span<const ItemId> relevant, std::size_t k);

/// Binary-gain NDCG@k with discount 1 / log2(rank + 1), rank from 1.
double ndcg_at_k(std::span<const ItemId> ranked,
                 std::span<const ItemId> relevant, std::size_t k);

/// Items bucketed by ascending training popularity so that every group holds
/// roughly total / G training interactions.
struct PopularityGroups {
  std::size_t num_groups = kNumPopularityGroups;
  std::vector<std::size_t> assignment;          // item -> group
  std::vector<std::size_t> item_popularity;     // item -> training count
  std::vector<std::size_t> group_items;         // group -> #items
  std::vector<std::size_t> group_interactions;  // group -> training count
};

PopularityGroups popularity_groups(const InteractionSet& train,
                                   std::size_t num_groups = kNumPopularityGroups);

/// The two least popular groups.
inline bool is_cold_group(std::size_t group) { return group < 2; }

struct GroupMetrics {
  std::size_t group_id = 0;
  std::size_t num_items = 0;
  std::size_t num_interactions = 0;  // training interactions in the group
  std::size_t num_users = 0;         // users with a test item in the group
  bool present = false;              // false when num_users == 0
  bool cold = false;
  double recall = 0.0;
  double ndcg = 0.0;
};

struct MetricsReport {
  std::size_t k = 20;
  std::size_t num_users = 0;
  double recall = 0.0;
  double ndcg = 0.0;
  std::vector<GroupMetrics> per_group;

  /// Mean recall over users of the cold groups' restricted relevance sets:
  /// users are pooled across both cold groups with their restricted sets
  /// merged.
  std::optional<double> cold_recall;
};

struct PerUserMetrics {
  std::vector<UserId> users;  // users with at least one test interaction
  std::vector<double> recall;
  std::vector<double> ndcg;
};

/// Ranks every item not in the user's training set and scores users with at
/// least one test interaction. Per-user work is spread over `threads`.
PerUserMetrics evaluate_users(const PropagationOutput& out,
                              const InteractionSet& test,
                              const InteractionSet& train, std::size_t k,
                              std::size_t threads = 1);

MetricsReport evaluate(const PropagationOutput& out, const InteractionSet& test,
                       const InteractionSet& train, std::size_t k,
                       std::size_t threads = 1);

/// Per-group metrics: each user's relevant set is restricted to the group's
/// items; users with an empty restricted set are skipped for that group.
std::vector<GroupMetrics> group_report(const PropagationOutput& out,
                                       const InteractionSet& test,
                                       const InteractionSet& train,
                                       const PopularityGroups& groups,
                                       std::size_t k, std::size_t threads = 1);

/// evaluate() plus group_report() and the pooled cold-group recall.
MetricsReport evaluate_with_groups(const PropagationOutput& out,
                                   const InteractionSet& test,
                                   const InteractionSet& train,
                                   const PopularityGroups& groups,
                                   std::size_t k, std::size_t threads = 1);

void write_report_json(std::ostream& out, const MetricsReport& report);
void write_report_csv(std::ostream& out, const MetricsReport& report);

}  // namespace ucc
