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


#include <ucc/synthetic.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <ucc/error.h>

namespace ucc {

InteractionSet make_synthetic(const SyntheticConfig& config) {
  require(config.num_users >= 1 && config.num_items >= 1 && config.rank >= 1,
          ErrorCode::kInvalidArgument, "synthetic sizes must be positive");
  require(config.min_per_user <= config.num_items, ErrorCode::kInvalidArgument,
          "min_per_user exceeds the catalog");

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> factor(
      0.0, 1.0 / std::sqrt(static_cast<double>(config.rank)));

  const std::size_t r = config.rank;
  std::vector<double> user_factors(config.num_users * r);
  std::vector<double> item_factors(config.num_items * r);
  for (auto& x : user_factors) x = factor(rng);
  for (auto& x : item_factors) x = factor(rng);

  std::vector<std::size_t> popularity_rank(config.num_items);
  std::iota(popularity_rank.begin(), popularity_rank.end(), 0);
  std::shuffle(popularity_rank.begin(), popularity_rank.end(), rng);
  std::vector<double> log_popularity(config.num_items);
  for (std::size_t i = 0; i < config.num_items; ++i) {
    log_popularity[i] = -config.zipf_exponent *
                        std::log(static_cast<double>(popularity_rank[i] + 1));
  }

  std::geometric_distribution<std::size_t> extra(
      1.0 / (1.0 + static_cast<double>(config.mean_extra_per_user)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<std::pair<std::string, std::string>> raw;
  std::vector<std::pair<double, std::size_t>> keys(config.num_items);
  for (std::size_t u = 0; u < config.num_users; ++u) {
    const std::size_t count =
        std::min(config.num_items, config.min_per_user + extra(rng));
    // Weighted sampling without replacement via exponential keys:
    // key = log(U) / w, take the largest.
    for (std::size_t i = 0; i < config.num_items; ++i) {
      double affinity = 0.0;
      for (std::size_t f = 0; f < r; ++f) {
        affinity += user_factors[u * r + f] * item_factors[i * r + f];
      }
      const double log_weight = log_popularity[i] + config.sharpness * affinity;
      const double draw = std::max(unit(rng), 1e-300);
      keys[i] = {std::log(draw) * std::exp(-log_weight), i};
    }
    std::partial_sort(keys.begin(), keys.begin() + count, keys.end(),
                      [](const auto& a, const auto& b) {
                        return a.first > b.first ||
                               (a.first == b.first && a.second < b.second);
                      });
    for (std::size_t j = 0; j < count; ++j) {
      raw.emplace_back("u" + std::to_string(u),
                       "i" + std::to_string(keys[j].second));
    }
  }
  return from_raw(raw);
}

}  // namespace ucc
