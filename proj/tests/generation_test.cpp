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


#include <ucc/generation.h>

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <ucc/error.h>

#include "oracles.h"
#include "test_util.h"

namespace ucc {
namespace {

// Output whose final rows are exactly the table (no propagation).
PropagationOutput as_output(const EmbeddingTable& t) {
  return propagate(t, BipartiteGraph::from_edges(t.num_users, t.num_items, {}), 0);
}

TEST(Cosine, EdgeCases) {
  const std::vector<double> a = {1.0, 2.0}, neg = {-1.0, -2.0}, orth = {2.0, -1.0};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, neg), 1.0);
  EXPECT_EQ(cosine_similarity(a, orth), 0.0);
  const std::vector<double> zero = {0.0, 0.0};
  try {
    cosine_similarity(a, zero);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateRow);
  }
}

TEST(MeanScore, Examples) {
  EmbeddingTable t(3, 1, 1);
  t.data(0, 0) = 1.0;
  t.data(1, 0) = 2.0;
  t.data(2, 0) = 3.0;
  t.data(3, 0) = 1.0;
  EXPECT_DOUBLE_EQ(item_mean_score(as_output(t), 0), 2.0);

  EmbeddingTable z(4, 2, 3);
  z.data(4, 0) = 5.0;
  EXPECT_EQ(item_mean_score(as_output(z), 0), 0.0);

  const auto r = testing::random_table(7, 5, 4, 3);
  const auto out = as_output(r);
  for (ItemId i = 0; i < 5; ++i) {
    double want = 0.0;
    for (UserId u = 0; u < 7; ++u) want += testing::naive_dot(out, u, i);
    EXPECT_NEAR(item_mean_score(out, i), want / 7.0, 1e-12);
  }
}

TEST(Generate, CapKeepsMostConfident) {
  // Item 0 sits on (1, 0) with mean score 0.1; user 0 has |cos| 0.9 and
  // user 1 |cos| 0.7.
  EmbeddingTable t(2, 1, 2);
  t.data(0, 0) = 0.9;
  t.data(0, 1) = std::sqrt(1 - 0.81);
  t.data(1, 0) = -0.7;
  t.data(1, 1) = -std::sqrt(1 - 0.49);
  t.data(2, 0) = 1.0;
  const auto train = testing::make_set(2, 1, {});
  const auto out = as_output(t);
  const auto one = generate(out, train, 1.0, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.triples[0].user, 0u);
  EXPECT_NEAR(one.triples[0].similarity, 0.9, 1e-12);
  EXPECT_EQ(generate(out, train, 1.0, 2).size(), 2u);
}

TEST(Generate, LargeAlphaGivesNothing) {
  const auto t = testing::random_table(6, 5, 3, 8, 0.1, 1.0);  // positive scores
  const auto out = as_output(t);
  double min_mean = INFINITY;
  for (ItemId i = 0; i < 5; ++i) min_mean = std::min(min_mean, item_mean_score(out, i));
  ASSERT_GT(min_mean, 0.0);
  EXPECT_EQ(generate(out, testing::make_set(6, 5, {}), 1.01 / min_mean, 3).size(), 0u);
}

TEST(Generate, HandFixtureMatchesEnumeration) {
  // 5 users x 4 items in 2-D.
  const double rows[9][2] = {{1, 0},  {0, 1},   {1, 1},  {-1, 0.5}, {0.2, -1},
                             {1, 0.1}, {-0.5, 1}, {0, -1}, {0.3, 0.3}};
  EmbeddingTable t(5, 4, 2);
  for (std::size_t r = 0; r < 9; ++r) {
    t.data(r, 0) = rows[r][0];
    t.data(r, 1) = rows[r][1];
  }
  const auto train = testing::make_set(5, 4, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 0}});
  const auto out = as_output(t);
  for (double alpha : {0.1, 0.5, 1.0, 2.0}) {
    for (std::size_t k : {1u, 2u, 5u}) {
      const auto got = generate(out, train, alpha, k);
      const auto want = testing::oracle_generate(out, train, alpha, k);
      EXPECT_EQ(testing::pair_set(got.triples), testing::pair_set(want))
          << "alpha " << alpha << " k " << k;
    }
  }
}

TEST(Generate, PropertiesOnRandomFixtures) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto set = testing::random_bipartite(15, 12, 0.2, seed);
    const auto t = testing::random_table(set.num_users, set.num_items, 3, seed, 0.0, 1.0);
    const auto out = as_output(t);
    std::set<std::pair<UserId, ItemId>> observed;
    for (const auto& p : set.pairs) observed.emplace(p.user, p.item);

    const auto capped = generate(out, set, 0.5, 2);
    std::vector<std::size_t> per_item(set.num_items);
    for (const auto& tr : capped.triples) {
      ++per_item[tr.item];
      EXPECT_FALSE(observed.count({tr.user, tr.item}));
    }
    for (auto c : per_item) EXPECT_LE(c, 2u);
    EXPECT_EQ(capped.triples, generate(out, set, 0.5, 2).triples);

    // Without the cap binding, survivors shrink as alpha grows.
    const std::size_t all = set.num_users;
    auto prev = testing::pair_set(generate(out, set, 0.1, all).triples);
    for (double alpha : {0.3, 0.6, 1.0, 1.5}) {
      const auto cur = testing::pair_set(generate(out, set, alpha, all).triples);
      EXPECT_TRUE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
      prev = cur;
    }
  }
}

TEST(Generate, ThreadCountDoesNotMatter) {
  const auto set = testing::random_bipartite(40, 30, 0.1, 3);
  const auto out = as_output(testing::random_table(set.num_users, set.num_items, 4, 3));
  EXPECT_EQ(generate(out, set, 0.2, 3, 1).triples, generate(out, set, 0.2, 3, 4).triples);
}

TEST(PseudoFile, OrderAndRoundTrip) {
  PseudoInteractionSet p;
  p.triples = {{2, 1, 0.5}, {0, 0, 0.25}, {1, 1, 0.75}, {3, 1, 0.5}, {0, 1, 0.1}};
  std::ostringstream out;
  write_pseudo(out, p);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "0\t0\t0.25");
  std::istringstream in(text);
  const auto back = read_pseudo(in);
  const std::vector<std::pair<UserId, ItemId>> order = {{0, 0}, {1, 1}, {2, 1}, {3, 1}, {0, 1}};
  ASSERT_EQ(back.size(), order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    EXPECT_EQ(back.triples[k].user, order[k].first);
    EXPECT_EQ(back.triples[k].item, order[k].second);
  }

  PseudoInteractionSet exact;
  exact.triples = {{0, 0, 0.1 + 0.2}, {1, 0, 1.0 / 3.0}};
  std::ostringstream a;
  write_pseudo(a, exact);
  std::istringstream b(a.str());
  const auto reread = read_pseudo(b);
  EXPECT_EQ(reread.triples[0].similarity, 1.0 / 3.0);
  EXPECT_EQ(reread.triples[1].similarity, 0.1 + 0.2);
}

}  // namespace
}  // namespace ucc
