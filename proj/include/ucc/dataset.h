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
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <ucc/types.h>

namespace ucc {

/// Bidirectional map between opaque string keys and dense indices, assigned
/// in first-seen order.
class IdMap {
 public:
  std::uint32_t intern(std::string_view key);
  std::optional<std::uint32_t> find(std::string_view key) const;
  const std::string& key(std::uint32_t index) const { return keys_.at(index); }
  std::size_t size() const { return keys_.size(); }
  const std::vector<std::string>& keys() const { return keys_; }

  friend bool operator==(const IdMap& a, const IdMap& b) {
    return a.keys_ == b.keys_;
  }

 private:
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Deduplicated implicit-feedback pairs over a shared user/item id space.
struct InteractionSet {
  std::vector<Interaction> pairs;
  std::size_t num_users = 0;
  std::size_t num_items = 0;
  IdMap users;
  IdMap items;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }

  /// Items of each user, sorted ascending. Outer size is num_users.
  std::vector<std::vector<ItemId>> items_by_user() const;

  friend bool operator==(const InteractionSet&,
                         const InteractionSet&) = default;
};

enum class Format { kTsv, kCsv };

Format parse_format(std::string_view name);

/// Builds a set from raw string pairs: duplicates dropped, ids assigned in
/// first-seen order.
InteractionSet from_raw(
    const std::vector<std::pair<std::string, std::string>>& raw);

InteractionSet read_interactions(std::istream& in, Format format);
InteractionSet load_interactions(const std::filesystem::path& path,
                                 Format format);

/// Writes "user_key<SEP>item_key" lines in pair order.
void write_interactions(std::ostream& out, const InteractionSet& set,
                        Format format);

/// Iteratively removes users and items with fewer than k interactions until
/// no more can be removed; survivors are remapped to contiguous ids in
/// first-seen order of the input.
InteractionSet kcore_filter(const InteractionSet& set, std::size_t k);

struct SplitRatios {
  double train = 0.7;
  double validation = 0.1;
  double test = 0.2;
};

/// Three views over one id space (num_users/num_items and key maps are the
/// same in each).
struct SplitSet {
  InteractionSet train;
  InteractionSet validation;
  InteractionSet test;
  std::uint64_t seed = 0;
  SplitRatios ratios;
};

/// Per-user random partition. Validation and test counts are floored; the
/// remainder goes to training, so every user keeps at least one training
/// pair.
SplitSet split(const InteractionSet& set, SplitRatios ratios,
               std::uint64_t seed);

/// Writes train/validation/test files plus a meta.json sidecar into dir.
void save_split(const SplitSet& split, const std::filesystem::path& dir,
                Format format = Format::kTsv);
SplitSet load_split(const std::filesystem::path& dir);

}  // namespace ucc
