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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include <ucc/error.h>
#include <ucc/parallel.h>

namespace ucc {

double recall_at_k(std::span<const ItemId> ranked,
                   std::span<const ItemId> relevant, std::size_t k) {
  require(!relevant.empty(), ErrorCode::kInvalidArgument,
          "recall needs a non-empty relevant set");
  const std::size_t depth = std::min(k, ranked.size());
  std::size_t hits = 0;
  for (std::size_t r = 0; r < depth; ++r) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked[r])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(relevant.size());
}

double ndcg_at_k(std::span<const ItemId> ranked,
                 std::span<const ItemId> relevant, std::size_t k) {
  require(!relevant.empty(), ErrorCode::kInvalidArgument,
          "ndcg needs a non-empty relevant set");
  const std::size_t depth = std::min(k, ranked.size());
  double dcg = 0.0;
  for (std::size_t r = 0; r < depth; ++r) {
    if (std::binary_search(relevant.begin(), relevant.end(), ranked[r])) {
      dcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
    }
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(k, relevant.size());
  for (std::size_t r = 0; r < ideal; ++r) {
    idcg += 1.0 / std::log2(static_cast<double>(r) + 2.0);
  }
  return dcg / idcg;
}

PopularityGroups popularity_groups(const InteractionSet& train,
                                   std::size_t num_groups) {
  require(!train.empty(), ErrorCode::kEmptyDataset,
          "popularity groups need training interactions");
  require(num_groups >= 1, ErrorCode::kInvalidArgument, "need >= 1 group");

  PopularityGroups groups;
  groups.num_groups = num_groups;
  groups.item_popularity.assign(train.num_items, 0);
  for (const auto& p : train.pairs) ++groups.item_popularity[p.item];

  std::vector<ItemId> order(train.num_items);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ItemId a, ItemId b) {
    return groups.item_popularity[a] < groups.item_popularity[b];
  });

  const double share =
      static_cast<double>(train.size()) / static_cast<double>(num_groups);
  groups.assignment.assign(train.num_items, 0);
  groups.group_items.assign(num_groups, 0);
  groups.group_interactions.assign(num_groups, 0);
  std::size_t group = 0;
  std::size_t cumulative = 0;
  for (ItemId item : order) {
    groups.assignment[item] = group;
    ++groups.group_items[group];
    groups.group_interactions[group] += groups.item_popularity[item];
    cumulative += groups.item_popularity[item];
    while (group + 1 < num_groups &&
           static_cast<double>(cumulative) >= share * static_cast<double>(group + 1)) {
      ++group;
    }
  }
  return groups;
}

namespace {

struct Rankings {
  std::vector<UserId> users;
  std::vector<std::vector<ItemId>> top;       // per evaluated user
  std::vector<std::vector<ItemId>> relevant;  // sorted test items
};

Rankings rank_test_users(const PropagationOutput& out,
                         const InteractionSet& test,
                         const InteractionSet& train, std::size_t k,
                         std::size_t threads) {
  require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  if (out.num_users != train.num_users || out.num_items() != train.num_items ||
      test.num_users != train.num_users || test.num_items != train.num_items) {
    fail(ErrorCode::kShapeMismatch, "evaluation inputs use different id spaces");
  }
  const auto train_items = train.items_by_user();
  auto test_items = test.items_by_user();

  Rankings r;
  for (UserId u = 0; u < test.num_users; ++u) {
    if (!test_items[u].empty()) r.users.push_back(u);
  }
  r.top.resize(r.users.size());
  r.relevant.resize(r.users.size());
  parallel_for(r.users.size(), threads, [&](std::size_t j) {
    const UserId u = r.users[j];
    r.top[j] = top_k(out, u, k, train_items[u]);
    r.relevant[j] = test_items[u];
  });
  return r;
}

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

std::vector<GroupMetrics> groups_from_rankings(const Rankings& r,
                                               const PopularityGroups& groups,
                                               std::size_t k) {
  std::vector<GroupMetrics> result(groups.num_groups);
  std::vector<std::vector<double>> recalls(groups.num_groups);
  std::vector<std::vector<double>> ndcgs(groups.num_groups);
  std::vector<ItemId> restricted;
  for (std::size_t j = 0; j < r.users.size(); ++j) {
    for (std::size_t g = 0; g < groups.num_groups; ++g) {
      restricted.clear();
      for (ItemId i : r.relevant[j]) {
        if (groups.assignment[i] == g) restricted.push_back(i);
      }
      if (restricted.empty()) continue;
      recalls[g].push_back(recall_at_k(r.top[j], restricted, k));
      ndcgs[g].push_back(ndcg_at_k(r.top[j], restricted, k));
    }
  }
  for (std::size_t g = 0; g < groups.num_groups; ++g) {
    auto& m = result[g];
    m.group_id = g;
    m.num_items = groups.group_items[g];
    m.num_interactions = groups.group_interactions[g];
    m.num_users = recalls[g].size();
    m.present = m.num_users > 0;
    m.cold = is_cold_group(g);
    m.recall = mean(recalls[g]);
    m.ndcg = mean(ndcgs[g]);
  }
  return result;
}

std::optional<double> cold_from_rankings(const Rankings& r,
                                         const PopularityGroups& groups,
                                         std::size_t k) {
  std::vector<double> recalls;
  std::vector<ItemId> restricted;
  for (std::size_t j = 0; j < r.users.size(); ++j) {
    restricted.clear();
    for (ItemId i : r.relevant[j]) {
      if (is_cold_group(groups.assignment[i])) restricted.push_back(i);
    }
    if (!restricted.empty()) recalls.push_back(recall_at_k(r.top[j], restricted, k));
  }
  if (recalls.empty()) return std::nullopt;
  return mean(recalls);
}

}  // namespace

PerUserMetrics evaluate_users(const PropagationOutput& out,
                              const InteractionSet& test,
                              const InteractionSet& train, std::size_t k,
                              std::size_t threads) {
  const Rankings r = rank_test_users(out, test, train, k, threads);
  PerUserMetrics m;
  m.users = r.users;
  m.recall.resize(r.users.size());
  m.ndcg.resize(r.users.size());
  for (std::size_t j = 0; j < r.users.size(); ++j) {
    m.recall[j] = recall_at_k(r.top[j], r.relevant[j], k);
    m.ndcg[j] = ndcg_at_k(r.top[j], r.relevant[j], k);
  }
  return m;
}

MetricsReport evaluate(const PropagationOutput& out, const InteractionSet& test,
                       const InteractionSet& train, std::size_t k,
                       std::size_t threads) {
  const auto per_user = evaluate_users(out, test, train, k, threads);
  MetricsReport report;
  report.k = k;
  report.num_users = per_user.users.size();
  report.recall = mean(per_user.recall);
  report.ndcg = mean(per_user.ndcg);
  return report;
}

std::vector<GroupMetrics> group_report(const PropagationOutput& out,
                                       const InteractionSet& test,
                                       const InteractionSet& train,
                                       const PopularityGroups& groups,
                                       std::size_t k, std::size_t threads) {
  return groups_from_rankings(rank_test_users(out, test, train, k, threads),
                              groups, k);
}

MetricsReport evaluate_with_groups(const PropagationOutput& out,
                                   const InteractionSet& test,
                                   const InteractionSet& train,
                                   const PopularityGroups& groups,
                                   std::size_t k, std::size_t threads) {
  const Rankings r = rank_test_users(out, test, train, k, threads);
  MetricsReport report;
  report.k = k;
  report.num_users = r.users.size();
  std::vector<double> recalls(r.users.size()), ndcgs(r.users.size());
  for (std::size_t j = 0; j < r.users.size(); ++j) {
    recalls[j] = recall_at_k(r.top[j], r.relevant[j], k);
    ndcgs[j] = ndcg_at_k(r.top[j], r.relevant[j], k);
  }
  report.recall = mean(recalls);
  report.ndcg = mean(ndcgs);
  report.per_group = groups_from_rankings(r, groups, k);
  report.cold_recall = cold_from_rankings(r, groups, k);
  return report;
}

void write_report_json(std::ostream& out, const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["k"] = report.k;
  j["num_users"] = report.num_users;
  j["recall"] = report.recall;
  j["ndcg"] = report.ndcg;
  if (report.cold_recall) {
    j["cold_recall"] = *report.cold_recall;
  } else {
    j["cold_recall"] = nullptr;
  }
  j["groups"] = nlohmann::ordered_json::array();
  for (const auto& g : report.per_group) {
    nlohmann::ordered_json row;
    row["group_id"] = g.group_id;
    row["num_items"] = g.num_items;
    row["num_interactions"] = g.num_interactions;
    row["num_users"] = g.num_users;
    row["cold"] = g.cold;
    if (g.present) {
      row["recall"] = g.recall;
      row["ndcg"] = g.ndcg;
    } else {
      row["recall"] = nullptr;
      row["ndcg"] = nullptr;
    }
    j["groups"].push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

void write_report_csv(std::ostream& out, const MetricsReport& report) {
  out << "group_id,num_items,num_interactions,num_users,recall,ndcg,cold\n";
  const auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
  };
  for (const auto& g : report.per_group) {
    out << g.group_id << ',' << g.num_items << ',' << g.num_interactions << ','
        << g.num_users << ',' << (g.present ? num(g.recall) : "") << ','
        << (g.present ? num(g.ndcg) : "") << ',' << (g.cold ? 1 : 0) << '\n';
  }
  out << "all,,," << report.num_users << ',' << num(report.recall) << ','
      << num(report.ndcg) << ",\n";
}

}  // namespace ucc
