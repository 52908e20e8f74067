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
#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <set>

#include <json.hpp>

#include <ucc/error.h>

namespace ucc {

std::uint32_t IdMap::intern(std::string_view key) {
  auto it = index_.find(std::string(key));
  if (it != index_.end()) {
    return it->second;
  }
  const auto id = static_cast<std::uint32_t>(keys_.size());
  keys_.emplace_back(key);
  index_.emplace(keys_.back(), id);
  return id;
}

std::optional<std::uint32_t> IdMap::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<std::vector<ItemId>> InteractionSet::items_by_user() const {
  std::vector<std::vector<ItemId>> out(num_users);
  for (const auto& p : pairs) {
    out[p.user].push_back(p.item);
  }
  for (auto& items : out) {
    std::sort(items.begin(), items.end());
  }
  return out;
}

Format parse_format(std::string_view name) {
  if (name == "tsv") return Format::kTsv;
  if (name == "csv") return Format::kCsv;
  fail(ErrorCode::kInvalidArgument,
       "unknown format '" + std::string(name) + "' (expected tsv or csv)");
}

namespace {

char separator(Format format) { return format == Format::kCsv ? ',' : '\t'; }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

InteractionSet from_raw(
    const std::vector<std::pair<std::string, std::string>>& raw) {
  InteractionSet set;
  std::set<Interaction> seen;
  for (const auto& [user_key, item_key] : raw) {
    if (user_key.empty() || item_key.empty()) {
      fail(ErrorCode::kInvalidArgument, "empty user or item key");
    }
    Interaction p{set.users.intern(user_key), set.items.intern(item_key)};
    if (seen.insert(p).second) {
      set.pairs.push_back(p);
    }
  }
  set.num_users = set.users.size();
  set.num_items = set.items.size();
  return set;
}

InteractionSet read_interactions(std::istream& in, Format format) {
  const char sep = separator(format);
  std::vector<std::pair<std::string, std::string>> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (view.empty()) {
      continue;
    }
    const auto first = view.find(sep);
    if (first == std::string_view::npos) {
      fail(ErrorCode::kMalformedLine,
           "line " + std::to_string(line_no) + ": expected at least 2 fields");
    }
    const auto second = view.find(sep, first + 1);
    auto user_key = trim(view.substr(0, first));
    auto item_key = trim(view.substr(
        first + 1, second == std::string_view::npos ? std::string_view::npos
                                                    : second - first - 1));
    if (user_key.empty() || item_key.empty()) {
      fail(ErrorCode::kMalformedLine,
           "line " + std::to_string(line_no) + ": empty key");
    }
    raw.emplace_back(user_key, item_key);
  }
  if (raw.empty()) {
    fail(ErrorCode::kEmptyDataset, "no interactions in input");
  }
  return from_raw(raw);
}

InteractionSet load_interactions(const std::filesystem::path& path,
                                 Format format) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorCode::kIo, "cannot open " + path.string());
  }
  return read_interactions(in, format);
}

void write_interactions(std::ostream& out, const InteractionSet& set,
                        Format format) {
  const char sep = separator(format);
  for (const auto& p : set.pairs) {
    out << set.users.key(p.user) << sep << set.items.key(p.item) << '\n';
  }
}

InteractionSet kcore_filter(const InteractionSet& set, std::size_t k) {
  require(k >= 1, ErrorCode::kInvalidArgument, "k-core requires k >= 1");

  std::vector<std::size_t> user_degree(set.num_users, 0);
  std::vector<std::size_t> item_degree(set.num_items, 0);
  std::vector<std::vector<std::size_t>> user_edges(set.num_users);
  std::vector<std::vector<std::size_t>> item_edges(set.num_items);
  for (std::size_t e = 0; e < set.pairs.size(); ++e) {
    const auto& p = set.pairs[e];
    ++user_degree[p.user];
    ++item_degree[p.item];
    user_edges[p.user].push_back(e);
    item_edges[p.item].push_back(e);
  }

  std::vector<bool> edge_alive(set.pairs.size(), true);
  std::vector<bool> user_gone(set.num_users, false);
  std::vector<bool> item_gone(set.num_items, false);
  // Node ids: users are [0, M), items are offset by M.
  std::deque<std::size_t> queue;
  for (std::size_t u = 0; u < set.num_users; ++u) {
    if (user_degree[u] < k) queue.push_back(u);
  }
  for (std::size_t i = 0; i < set.num_items; ++i) {
    if (item_degree[i] < k) queue.push_back(set.num_users + i);
  }

  while (!queue.empty()) {
    const std::size_t node = queue.front();
    queue.pop_front();
    const bool is_user = node < set.num_users;
    const std::size_t id = is_user ? node : node - set.num_users;
    auto gone = is_user ? user_gone.begin() + id : item_gone.begin() + id;
    if (*gone) continue;
    *gone = true;
    for (std::size_t e : is_user ? user_edges[id] : item_edges[id]) {
      if (!edge_alive[e]) continue;
      edge_alive[e] = false;
      const auto& p = set.pairs[e];
      if (is_user) {
        if (--item_degree[p.item] < k && !item_gone[p.item]) {
          queue.push_back(set.num_users + p.item);
        }
      } else {
        if (--user_degree[p.user] < k && !user_gone[p.user]) {
          queue.push_back(p.user);
        }
      }
    }
  }

  InteractionSet out;
  for (std::size_t e = 0; e < set.pairs.size(); ++e) {
    if (!edge_alive[e]) continue;
    const auto& p = set.pairs[e];
    out.pairs.push_back({out.users.intern(set.users.key(p.user)),
                         out.items.intern(set.items.key(p.item))});
  }
  if (out.pairs.empty()) {
    fail(ErrorCode::kEmptyDataset,
         "k-core filter with k=" + std::to_string(k) + " removed everything");
  }
  out.num_users = out.users.size();
  out.num_items = out.items.size();
  return out;
}

namespace {

InteractionSet view_with(const InteractionSet& base,
                         std::vector<Interaction> pairs) {
  std::sort(pairs.begin(), pairs.end());
  InteractionSet view;
  view.pairs = std::move(pairs);
  view.num_users = base.num_users;
  view.num_items = base.num_items;
  view.users = base.users;
  view.items = base.items;
  return view;
}

}  // namespace

SplitSet split(const InteractionSet& set, SplitRatios ratios,
               std::uint64_t seed) {
  const double sum = ratios.train + ratios.validation + ratios.test;
  require(std::abs(sum - 1.0) < 1e-9 && ratios.train > 0.0 &&
              ratios.validation >= 0.0 && ratios.test >= 0.0,
          ErrorCode::kInvalidArgument, "split ratios must be >= 0 and sum to 1");

  std::vector<std::vector<ItemId>> by_user(set.num_users);
  for (const auto& p : set.pairs) {
    by_user[p.user].push_back(p.item);
  }

  std::mt19937_64 rng(seed);
  std::vector<Interaction> train, validation, test;
  for (UserId u = 0; u < set.num_users; ++u) {
    auto& items = by_user[u];
    require(!items.empty(), ErrorCode::kInvalidArgument,
            "every user needs at least one interaction to split");
    std::shuffle(items.begin(), items.end(), rng);
    const auto n = static_cast<double>(items.size());
    // Cumulative boundaries keep the training share within one pair of its
    // ratio. Small epsilon so 10 * 0.1 floors to 1 rather than 0.
    const auto n_val = static_cast<std::size_t>(std::floor(n * ratios.validation + 1e-9));
    const auto n_held = static_cast<std::size_t>(
        std::floor(n * (ratios.validation + ratios.test) + 1e-9));
    const auto n_test = n_held - n_val;
    std::size_t pos = 0;
    for (; pos < n_val; ++pos) validation.push_back({u, items[pos]});
    for (; pos < n_val + n_test; ++pos) test.push_back({u, items[pos]});
    for (; pos < items.size(); ++pos) train.push_back({u, items[pos]});
  }

  SplitSet out;
  out.train = view_with(set, std::move(train));
  out.validation = view_with(set, std::move(validation));
  out.test = view_with(set, std::move(test));
  out.seed = seed;
  out.ratios = ratios;
  return out;
}

namespace {

void write_keys(const std::filesystem::path& path, const IdMap& map) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& key : map.keys()) out << key << '\n';
}

IdMap read_keys(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  IdMap map;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) map.intern(line);
  }
  return map;
}

InteractionSet read_view(const std::filesystem::path& path, Format format,
                         const IdMap& users, const IdMap& items) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  const char sep = separator(format);
  InteractionSet view;
  view.users = users;
  view.items = items;
  view.num_users = users.size();
  view.num_items = items.size();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view v = trim(line);
    if (v.empty()) continue;
    const auto first = v.find(sep);
    const auto second = first == std::string_view::npos ? first : v.find(sep, first + 1);
    if (first == std::string_view::npos) {
      fail(ErrorCode::kMalformedLine,
           path.string() + ":" + std::to_string(line_no) + ": expected 2 fields");
    }
    const auto u = users.find(v.substr(0, first));
    const auto i = items.find(v.substr(
        first + 1,
        second == std::string_view::npos ? second : second - first - 1));
    if (!u || !i) {
      fail(ErrorCode::kMalformedLine, path.string() + ":" +
                                          std::to_string(line_no) +
                                          ": key outside the split id space");
    }
    view.pairs.push_back({*u, *i});
  }
  return view;
}

}  // namespace

void save_split(const SplitSet& split, const std::filesystem::path& dir,
                Format format) {
  std::filesystem::create_directories(dir);
  const std::string ext = format == Format::kCsv ? ".csv" : ".tsv";
  const auto write_view = [&](const InteractionSet& view, const char* name) {
    std::ofstream out(dir / (std::string(name) + ext));
    if (!out) fail(ErrorCode::kIo, "cannot write into " + dir.string());
    write_interactions(out, view, format);
  };
  write_view(split.train, "train");
  write_view(split.validation, "validation");
  write_view(split.test, "test");
  write_keys(dir / "users.txt", split.train.users);
  write_keys(dir / "items.txt", split.train.items);

  nlohmann::ordered_json meta;
  meta["num_users"] = split.train.num_users;
  meta["num_items"] = split.train.num_items;
  meta["seed"] = split.seed;
  meta["ratios"] = {split.ratios.train, split.ratios.validation,
                    split.ratios.test};
  meta["format"] = format == Format::kCsv ? "csv" : "tsv";
  std::ofstream out(dir / "meta.json");
  out << meta.dump(2) << '\n';
}

SplitSet load_split(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in) fail(ErrorCode::kIo, "missing meta.json in " + dir.string());
  nlohmann::json meta;
  try {
    meta_in >> meta;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kMalformedLine, "meta.json: " + std::string(e.what()));
  }
  const std::string fmt_name = meta.value("format", "tsv");
  const Format format = parse_format(fmt_name);
  const std::string ext = "." + fmt_name;

  const IdMap users = read_keys(dir / "users.txt");
  const IdMap items = read_keys(dir / "items.txt");
  if (users.size() != meta.at("num_users").get<std::size_t>() ||
      items.size() != meta.at("num_items").get<std::size_t>()) {
    fail(ErrorCode::kShapeMismatch, "key lists disagree with meta.json");
  }

  SplitSet out;
  out.train = read_view(dir / ("train" + ext), format, users, items);
  out.validation = read_view(dir / ("validation" + ext), format, users, items);
  out.test = read_view(dir / ("test" + ext), format, users, items);
  out.seed = meta.at("seed").get<std::uint64_t>();
  const auto& r = meta.at("ratios");
  out.ratios = {r.at(0).get<double>(), r.at(1).get<double>(),
                r.at(2).get<double>()};
  if (out.train.empty()) {
    fail(ErrorCode::kEmptyDataset, "empty training split in " + dir.string());
  }
  return out;
}

}  // namespace ucc
