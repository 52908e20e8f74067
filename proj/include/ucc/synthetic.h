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

#include <ucc/dataset.h>

namespace ucc {

/// Long-tail implicit feedback with planted low-rank preferences. Item i's
/// base popularity follows a Zipf law 1/(i+1)^zipf_exponent over a random
/// permutation of items; user u picks items without replacement with weight
/// popularity * exp(sharpness * <p_u, q_i>) where p, q are N(0, 1/rank)
/// factors.
struct SyntheticConfig {
  std::size_t num_users = 1000;
  std::size_t num_items = 500;
  std::size_t rank = 8;
  double zipf_exponent = 1.0;
  double sharpness = 3.0;
  std::size_t min_per_user = 10;
  std::size_t mean_extra_per_user = 15;
  std::uint64_t seed = 7;
};

InteractionSet make_synthetic(const SyntheticConfig& config);

}  // namespace ucc
