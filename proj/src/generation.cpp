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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <ucc/error.h>
#include <ucc/parallel.h>

namespace ucc {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(squared_norm(a));
  const double nb = std::sqrt(squared_norm(b));
  if (!(na > 0.0) || !(nb > 0.0)) {
    fail(ErrorCode::kDegenerateRow, "cosine of a zero-norm vector");
  }
  return std::min(1.0, std::abs(dot(a, b)) / (na * nb));
}

double item_mean_score(const PropagationOutput& out, ItemId item) {
  require(out.num_users >= 1, ErrorCode::kInvalidArgument, "no users");
  const auto e = out.item(item);
  double sum = 0.0;
  for (UserId u = 0; u < out.num_users; ++u) sum += dot(out.user(u), e);
  return sum / static_cast<double>(out.num_users);
}

PseudoInteractionSet generate(const PropagationOutput& teacher,
                              const InteractionSet& train, double alpha,
                              std::size_t k_cap, std::size_t threads,
                              Confidence confidence) {
  require(alpha > 0.0, ErrorCode::kInvalidArgument, "alpha must be > 0");
  require(k_cap >= 1, ErrorCode::kInvalidArgument, "k_cap must be >= 1");
  if (teacher.num_users != train.num_users ||
      teacher.num_items() != train.num_items) {
    fail(ErrorCode::kShapeMismatch, "teacher output and training set disagree");
  }
  const std::size_t m = train.num_users;
  const std::size_t n = train.num_items;

  std::vector<std::vector<UserId>> observed(n);
  for (const auto& p : train.pairs) observed[p.item].push_back(p.user);
  for (auto& users : observed) std::sort(users.begin(), users.end());

  std::vector<double> user_norm(m);
  for (UserId u = 0; u < m; ++u) {
    user_norm[u] = std::sqrt(squared_norm(teacher.user(u)));
    if (!(user_norm[u] > 0.0)) {
      fail(ErrorCode::kDegenerateRow, "user " + std::to_string(u) + " has zero norm");
    }
  }

  std::vector<std::vector<PseudoInteraction>> per_item(n);
  parallel_for(n, threads, [&](std::size_t item) {
    const auto e = teacher.item(static_cast<ItemId>(item));
    const double item_norm = std::sqrt(squared_norm(e));
    if (!(item_norm > 0.0)) {
      fail(ErrorCode::kDegenerateRow,
           "item " + std::to_string(item) + " has zero norm");
    }
    double sum = 0.0;
    std::vector<double> scores(m);
    for (UserId u = 0; u < m; ++u) {
      scores[u] = dot(teacher.user(u), e);
      sum += scores[u];
    }
    const double threshold = alpha * (sum / static_cast<double>(m));

    auto& kept = per_item[item];
    const auto& seen = observed[item];
    std::size_t cursor = 0;
    for (UserId u = 0; u < m; ++u) {
      while (cursor < seen.size() && seen[cursor] < u) ++cursor;
      if (cursor < seen.size() && seen[cursor] == u) continue;
      const double s = confidence == Confidence::kAbsolute ? std::abs(scores[u])
                                                           : scores[u];
      const double d = std::clamp(s / (user_norm[u] * item_norm), -1.0, 1.0);
      if (d > threshold) {
        kept.push_back({u, static_cast<ItemId>(item), d});
      }
    }
    const auto better = [](const PseudoInteraction& a, const PseudoInteraction& b) {
      return a.similarity > b.similarity ||
             (a.similarity == b.similarity && a.user < b.user);
    };
    if (kept.size() > k_cap) {
      std::partial_sort(kept.begin(), kept.begin() + k_cap, kept.end(), better);
      kept.resize(k_cap);
    } else {
      std::sort(kept.begin(), kept.end(), better);
    }
  });

  PseudoInteractionSet result;
  result.alpha = alpha;
  result.k_cap = k_cap;
  for (auto& items : per_item) {
    result.triples.insert(result.triples.end(), items.begin(), items.end());
  }
  return result;
}

void write_pseudo(std::ostream& out, const PseudoInteractionSet& pseudo) {
  auto sorted = pseudo.triples;
  std::sort(sorted.begin(), sorted.end(),
            [](const PseudoInteraction& a, const PseudoInteraction& b) {
              if (a.item != b.item) return a.item < b.item;
              if (a.similarity != b.similarity) return a.similarity > b.similarity;
              return a.user < b.user;
            });
  char buf[64];
  for (const auto& t : sorted) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), t.similarity,
                                   std::chars_format::general, 17);
    out << t.user << '\t' << t.item << '\t'
        << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

PseudoInteractionSet read_pseudo(std::istream& in) {
  PseudoInteractionSet pseudo;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string user, item, sim;
    if (!std::getline(fields, user, '\t') || !std::getline(fields, item, '\t') ||
        !std::getline(fields, sim, '\t')) {
      fail(ErrorCode::kMalformedLine,
           "pseudo line " + std::to_string(line_no) + ": expected 3 fields");
    }
    PseudoInteraction t;
    const auto parse = [&](const std::string& s, auto& value) {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        fail(ErrorCode::kMalformedLine,
             "pseudo line " + std::to_string(line_no) + ": bad field '" + s + "'");
      }
    };
    parse(user, t.user);
    parse(item, t.item);
    parse(sim, t.similarity);
    pseudo.triples.push_back(t);
  }
  return pseudo;
}

void save_pseudo(const PseudoInteractionSet& pseudo,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  write_pseudo(out, pseudo);
}

PseudoInteractionSet load_pseudo(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return read_pseudo(in);
}

}  // namespace ucc
