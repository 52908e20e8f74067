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


#include <ucc/dataset.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include <ucc/error.h>

#include "test_util.h"

namespace ucc {
namespace {

using KeyPair = std::pair<std::string, std::string>;

std::set<KeyPair> key_pairs(const InteractionSet& s) {
  std::set<KeyPair> out;
  for (const auto& p : s.pairs) out.emplace(s.users.key(p.user), s.items.key(p.item));
  return out;
}

// Naive peeling: drop every pair touching an under-degree node, repeat until
// nothing changes.
std::set<KeyPair> peel_oracle(std::set<KeyPair> pairs, std::size_t k) {
  for (bool changed = true; changed;) {
    changed = false;
    std::map<std::string, std::size_t> du, di;
    for (const auto& [u, i] : pairs) {
      ++du[u];
      ++di[i];
    }
    for (auto it = pairs.begin(); it != pairs.end();) {
      if (du[it->first] < k || di[it->second] < k) {
        it = pairs.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return pairs;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(LoadInteractions, DropsExactRepeats) {
  std::istringstream in("a\ti1\na\ti1\nb\ti2\n");
  const auto s = read_interactions(in, Format::kTsv);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.num_users, 2u);
  EXPECT_EQ(s.num_items, 2u);
}

TEST(LoadInteractions, EmptyFileIsEmptyDataset) {
  const auto dir = testing::scratch_dir("empty_file");
  std::ofstream(dir / "empty.tsv").close();
  EXPECT_EQ(code_of([&] { load_interactions(dir / "empty.tsv", Format::kTsv); }),
            ErrorCode::kEmptyDataset);
}

TEST(LoadInteractions, FixtureFileMatchesHandListing) {
  const auto dir = testing::scratch_dir("fixture_file");
  {
    std::ofstream out(dir / "five.csv");
    out << "alice,book,5,2020\n"
           "bob,film\n"
           "alice,film\n"
           "carol,book\n"
           "bob,film,extra\n";
  }
  const auto s = load_interactions(dir / "five.csv", Format::kCsv);
  // First-seen ids: alice=0 bob=1 carol=2; book=0 film=1.
  const std::vector<Interaction> expected = {{0, 0}, {1, 1}, {0, 1}, {2, 0}};
  EXPECT_EQ(s.pairs, expected);
  EXPECT_EQ(s.users.key(2), "carol");
  EXPECT_EQ(s.items.key(1), "film");
}

TEST(LoadInteractions, ReportsMalformedLine) {
  std::istringstream in("a\ti1\nno-separator\n");
  try {
    read_interactions(in, Format::kTsv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMalformedLine);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(KcoreFilter, KOneIsIdentity) {
  const auto s = testing::random_bipartite(20, 20, 0.2, 3);
  const auto f = kcore_filter(s, 1);
  EXPECT_EQ(key_pairs(f), key_pairs(s));
  EXPECT_EQ(f.size(), s.size());
}

TEST(KcoreFilter, StarGraphCollapses) {
  std::vector<std::pair<std::string, std::string>> raw;
  for (int i = 0; i < 10; ++i) raw.emplace_back("hub", "i" + std::to_string(i));
  EXPECT_EQ(code_of([&] { kcore_filter(from_raw(raw), 2); }),
            ErrorCode::kEmptyDataset);
}

TEST(KcoreFilter, MatchesPeelingOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = testing::random_bipartite(50, 50, 0.08, 100 + seed);
    const auto expected = peel_oracle(key_pairs(s), 3);
    if (expected.empty()) continue;
    const auto f = kcore_filter(s, 3);
    EXPECT_EQ(key_pairs(f), expected) << "seed " << seed;
  }
}

TEST(KcoreFilter, SurvivorsMeetDegreeAndIdsAreContiguous) {
  const auto s = testing::random_bipartite(60, 40, 0.1, 9);
  const auto f = kcore_filter(s, 4);
  std::vector<std::size_t> du(f.num_users), di(f.num_items);
  for (const auto& p : f.pairs) {
    ASSERT_LT(p.user, f.num_users);
    ASSERT_LT(p.item, f.num_items);
    ++du[p.user];
    ++di[p.item];
  }
  for (auto d : du) EXPECT_GE(d, 4u);
  for (auto d : di) EXPECT_GE(d, 4u);
  // Bijection between keys and indices.
  for (std::uint32_t u = 0; u < f.num_users; ++u) {
    EXPECT_EQ(f.users.find(f.users.key(u)), u);
  }
  EXPECT_EQ(f.users.size(), f.num_users);
  EXPECT_EQ(f.items.size(), f.num_items);
}

TEST(KcoreFilter, IdempotentAndOrderIndependent) {
  const auto s = testing::random_bipartite(40, 40, 0.12, 21);
  const auto once = kcore_filter(s, 3);
  EXPECT_EQ(kcore_filter(once, 3), once);

  const auto keyed = key_pairs(s);
  std::vector<KeyPair> raw(keyed.begin(), keyed.end());
  std::mt19937_64 rng(5);
  std::shuffle(raw.begin(), raw.end(), rng);
  EXPECT_EQ(key_pairs(kcore_filter(from_raw(raw), 3)), key_pairs(once));
}

TEST(Split, TenPairsGiveSevenOneTwo) {
  std::vector<std::pair<std::string, std::string>> raw;
  for (int i = 0; i < 10; ++i) raw.emplace_back("u", "i" + std::to_string(i));
  const auto parts = split(from_raw(raw), {}, 1);
  EXPECT_EQ(parts.train.size(), 7u);
  EXPECT_EQ(parts.validation.size(), 1u);
  EXPECT_EQ(parts.test.size(), 2u);
}

TEST(Split, SinglePairStaysInTraining) {
  const auto parts = split(from_raw({{"u", "i"}}), {}, 1);
  EXPECT_EQ(parts.train.size(), 1u);
  EXPECT_TRUE(parts.validation.empty());
  EXPECT_TRUE(parts.test.empty());
}

TEST(Split, DeterministicForSeed) {
  const auto s = testing::random_bipartite(30, 30, 0.3, 4);
  const auto a = split(s, {}, 77);
  const auto b = split(s, {}, 77);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.test, b.test);
}

TEST(Split, PartitionsInputForAnySeed) {
  const auto s = testing::random_bipartite(30, 25, 0.35, 8);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto parts = split(s, {}, seed);
    std::vector<Interaction> all;
    for (const auto* v : {&parts.train, &parts.validation, &parts.test}) {
      all.insert(all.end(), v->pairs.begin(), v->pairs.end());
    }
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
    auto input = s.pairs;
    std::sort(input.begin(), input.end());
    EXPECT_EQ(all, input);

    std::vector<std::size_t> n(s.num_users), tr(s.num_users);
    for (const auto& p : s.pairs) ++n[p.user];
    for (const auto& p : parts.train.pairs) ++tr[p.user];
    for (std::size_t u = 0; u < s.num_users; ++u) {
      EXPECT_GE(tr[u], 1u);
      if (n[u] >= 10) {
        EXPECT_NEAR(static_cast<double>(tr[u]), 0.7 * n[u], 1.0 + 1e-9);
      }
    }
  }
}

TEST(Split, SaveLoadKeepsIdSpace) {
  const auto s = kcore_filter(testing::random_bipartite(30, 30, 0.3, 12), 2);
  const auto parts = split(s, {}, 5);
  const auto dir = testing::scratch_dir("split_roundtrip");
  save_split(parts, dir);
  const auto back = load_split(dir);
  EXPECT_EQ(back.train, parts.train);
  EXPECT_EQ(back.validation, parts.validation);
  EXPECT_EQ(back.test, parts.test);
  EXPECT_EQ(back.seed, 5u);
}

}  // namespace
}  // namespace ucc
