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


#include <ucc/eval.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "oracles.h"
#include "test_util.h"

namespace ucc {
namespace {

PropagationOutput as_output(const EmbeddingTable& t) {
  return propagate(t, BipartiteGraph::from_edges(t.num_users, t.num_items, {}), 0);
}

TEST(Recall, Examples) {
  const std::vector<ItemId> ranked = {4, 1, 7};
  const std::vector<ItemId> two = {1, 9};
  EXPECT_EQ(recall_at_k(ranked, two, 3), 0.5);
  const std::vector<ItemId> both = {1, 4};
  EXPECT_EQ(recall_at_k(ranked, both, 3), 1.0);
  EXPECT_EQ(recall_at_k(ranked, both, 1), 0.5);
}

TEST(Ndcg, Examples) {
  const std::vector<ItemId> ranked = {4, 1, 7};
  const std::vector<ItemId> first = {4}, second = {1}, none = {9};
  EXPECT_EQ(ndcg_at_k(ranked, first, 3), 1.0);
  EXPECT_NEAR(ndcg_at_k(ranked, second, 3), 1.0 / std::log2(3.0), 1e-15);
  EXPECT_NEAR(ndcg_at_k(ranked, second, 3), 0.63093, 1e-5);
  EXPECT_EQ(ndcg_at_k(ranked, none, 3), 0.0);
  const std::vector<ItemId> top2 = {1, 4};
  EXPECT_DOUBLE_EQ(ndcg_at_k(ranked, top2, 3), 1.0);
}

TEST(Metrics, MatchSetOracles) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ItemId> ranked(30);
    std::iota(ranked.begin(), ranked.end(), 0);
    std::shuffle(ranked.begin(), ranked.end(), rng);
    std::set<ItemId> rel;
    const std::size_t n = 1 + rng() % 8;
    while (rel.size() < n) rel.insert(static_cast<ItemId>(rng() % 40));
    const std::vector<ItemId> sorted(rel.begin(), rel.end());
    const std::size_t k = 1 + rng() % 25;
    const double r = recall_at_k(ranked, sorted, k);
    const double g = ndcg_at_k(ranked, sorted, k);
    EXPECT_EQ(r, testing::oracle_recall(ranked, rel, k));
    EXPECT_NEAR(g, testing::oracle_ndcg(ranked, rel, k), 1e-12);
    EXPECT_GE(g, 0.0);
    EXPECT_LE(g, 1.0 + 1e-15);
  }
}

TEST(Evaluate, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto all = testing::random_bipartite(10, 25, 0.3, seed);
    const auto parts = split(all, {}, seed);
    const auto out = as_output(testing::random_table(all.num_users, all.num_items, 4, seed));
    const auto got = evaluate(out, parts.test, parts.train, 5);
    const auto want = testing::oracle_evaluate(out, parts.test, parts.train, 5);
    EXPECT_EQ(got.num_users, want.users);
    EXPECT_NEAR(got.recall, want.recall, 1e-12);
    EXPECT_NEAR(got.ndcg, want.ndcg, 1e-12);
    // Aggregation is the plain mean of per-user values.
    const auto per = evaluate_users(out, parts.test, parts.train, 5);
    EXPECT_NEAR(std::accumulate(per.recall.begin(), per.recall.end(), 0.0) /
                    static_cast<double>(per.users.size()),
                got.recall, 1e-15);
    EXPECT_EQ(evaluate(out, parts.test, parts.train, 5, 3).recall, got.recall);
  }
}

TEST(Evaluate, TrainingItemsNeverRankAndTopTestScoresOne) {
  // User 0 likes item 2 most, then item 0; item 2 is a training item.
  EmbeddingTable t(1, 4, 1);
  t.data(0, 0) = 1.0;
  const double item_scores[4] = {3.0, 1.0, 9.0, 0.5};
  for (ItemId i = 0; i < 4; ++i) t.data(1 + i, 0) = item_scores[i];
  const auto train = testing::make_set(1, 4, {{0, 2}});
  const auto test = testing::make_set(1, 4, {{0, 0}});
  const auto r = evaluate(as_output(t), test, train, 1);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.ndcg, 1.0);
}

TEST(PopularityGroups, OneItemPerGroupWhenUniform) {
  std::vector<Interaction> pairs;
  for (ItemId i = 0; i < 10; ++i) pairs.push_back({i, i});
  const auto g = popularity_groups(testing::make_set(10, 10, pairs), 10);
  for (ItemId i = 0; i < 10; ++i) EXPECT_EQ(g.assignment[i], i);
}

TEST(PopularityGroups, HeavyItemSitsAloneAtTheTop) {
  // Items 0..8 once each, item 9 eleven times: total 20, share 2.
  std::vector<Interaction> pairs;
  for (ItemId i = 0; i < 9; ++i) pairs.push_back({0, i});
  for (UserId u = 0; u < 11; ++u) pairs.push_back({u, 9});
  const auto g = popularity_groups(testing::make_set(11, 10, pairs), 10);
  // Pairs of light items fill groups 0..3, the ninth opens group 4.
  EXPECT_EQ(g.assignment[0], 0u);
  EXPECT_EQ(g.assignment[1], 0u);
  EXPECT_EQ(g.assignment[8], 4u);
  EXPECT_EQ(g.assignment[9], 4u);
  EXPECT_EQ(g.group_items[5], 0u);
}

TEST(PopularityGroups, TotalsWithinOneItemOfShare) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::vector<Interaction> pairs;
    for (ItemId i = 0; i < 60; ++i) {
      const auto pop = static_cast<std::size_t>(40.0 / (i + 1)) + 1;
      for (UserId u = 0; u < pop; ++u) pairs.push_back({u, i});
    }
    const auto set = testing::make_set(41, 60, pairs);
    const auto g = popularity_groups(set, 10);
    const double share = static_cast<double>(pairs.size()) / 10.0;
    const auto max_pop = *std::max_element(g.item_popularity.begin(), g.item_popularity.end());
    std::size_t sum = 0;
    for (auto c : g.group_interactions) {
      EXPECT_LE(std::abs(static_cast<double>(c) - share), static_cast<double>(max_pop));
      sum += c;
    }
    EXPECT_EQ(sum, pairs.size());
    // Ascending popularity across groups.
    for (ItemId a = 0; a < 60; ++a) {
      for (ItemId b = 0; b < 60; ++b) {
        if (g.item_popularity[a] < g.item_popularity[b]) {
          EXPECT_LE(g.assignment[a], g.assignment[b]);
        }
      }
    }
  }
}

TEST(GroupReport, TwoGroupsMatchRestrictedOracle) {
  const auto all = testing::random_bipartite(20, 16, 0.35, 5);
  const auto parts = split(all, {}, 5);
  const auto out = as_output(testing::random_table(all.num_users, all.num_items, 3, 5));
  const auto groups = popularity_groups(parts.train, 2);
  const auto report = group_report(out, parts.test, parts.train, groups, 5);
  ASSERT_EQ(report.size(), 2u);
  for (std::size_t g = 0; g < 2; ++g) {
    std::vector<bool> keep(all.num_items);
    for (ItemId i = 0; i < all.num_items; ++i) keep[i] = groups.assignment[i] == g;
    const auto want = testing::oracle_evaluate(out, parts.test, parts.train, 5, keep);
    EXPECT_EQ(report[g].num_users, want.users);
    EXPECT_NEAR(report[g].recall, want.recall, 1e-12);
    EXPECT_NEAR(report[g].ndcg, want.ndcg, 1e-12);
  }
}

TEST(GroupReport, SingleGroupEqualsOverall) {
  const auto all = testing::random_bipartite(15, 12, 0.4, 6);
  const auto parts = split(all, {}, 6);
  const auto out = as_output(testing::random_table(all.num_users, all.num_items, 3, 6));
  const auto report = group_report(out, parts.test, parts.train,
                                   popularity_groups(parts.train, 1), 5);
  const auto overall = evaluate(out, parts.test, parts.train, 5);
  EXPECT_EQ(report[0].recall, overall.recall);
  EXPECT_EQ(report[0].ndcg, overall.ndcg);
}

TEST(GroupReport, AbsentGroupsWhenTestSitsInTopGroup) {
  std::vector<Interaction> train;
  for (ItemId i = 0; i < 10; ++i) train.push_back({i, i});
  const auto tr = testing::make_set(10, 10, train);
  const auto test = testing::make_set(10, 10, {{1, 9}, {2, 9}});
  const auto groups = popularity_groups(tr, 10);
  ASSERT_EQ(groups.assignment[9], 9u);
  const auto out = as_output(testing::random_table(10, 10, 2, 1));
  const auto report = evaluate_with_groups(out, test, tr, groups, 3);
  for (std::size_t g = 0; g < 9; ++g) EXPECT_FALSE(report.per_group[g].present);
  EXPECT_TRUE(report.per_group[9].present);
  EXPECT_TRUE(report.per_group[0].cold);
  EXPECT_TRUE(report.per_group[1].cold);
  EXPECT_FALSE(report.per_group[2].cold);
  EXPECT_FALSE(report.cold_recall.has_value());

  std::ostringstream json;
  write_report_json(json, report);
  const auto parsed = nlohmann::json::parse(json.str());
  EXPECT_EQ(parsed["groups"].size(), 10u);
  EXPECT_TRUE(parsed["groups"][0]["recall"].is_null());
}

}  // namespace
}  // namespace ucc
