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


#include <ucc/trainer.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include <json.hpp>

#include <ucc/error.h>
#include <ucc/eval.h>

namespace ucc {

void validate(const TrainConfig& c) {
  require(c.lr > 0.0, ErrorCode::kInvalidArgument, "lr must be > 0");
  require(c.lambda >= 0.0, ErrorCode::kInvalidArgument, "lambda must be >= 0");
  require(c.mu >= 0.0, ErrorCode::kInvalidArgument, "mu must be >= 0");
  require(c.tau > 0.0, ErrorCode::kInvalidArgument, "tau must be > 0");
  require(c.rho >= 0.0 && c.rho < 1.0, ErrorCode::kInvalidArgument,
          "rho must lie in [0, 1)");
  require(c.dim >= 1, ErrorCode::kInvalidArgument, "dim must be >= 1");
  require(c.batch_size >= 1, ErrorCode::kInvalidArgument,
          "batch_size must be >= 1");
  require(c.init_scale > 0.0, ErrorCode::kInvalidArgument,
          "init_scale must be > 0");
  require(c.eval_k >= 1, ErrorCode::kInvalidArgument, "eval_k must be >= 1");
}

LossConfig loss_config(const TrainConfig& c) {
  LossConfig lc;
  lc.lambda = c.lambda;
  lc.mu = c.mu;
  lc.tau = c.tau;
  lc.layers = c.layers;
  lc.negatives = c.negatives;
  return lc;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ stream) ^ index);
}

TripleSampler::TripleSampler(std::vector<Interaction> positives,
                             std::size_t num_users, std::size_t num_items,
                             std::uint64_t seed)
    : positives_(std::move(positives)),
      num_items_(num_items),
      by_user_(num_users),
      rng_(seed) {
  require(!positives_.empty(), ErrorCode::kEmptyDataset,
          "no positive pairs to sample from");
  for (const auto& p : positives_) {
    if (p.user >= num_users || p.item >= num_items) {
      fail(ErrorCode::kShapeMismatch, "positive pair outside the id space");
    }
    by_user_[p.user].push_back(p.item);
  }
  for (auto& items : by_user_) {
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
  }
}

bool TripleSampler::is_positive(UserId user, ItemId item) const {
  const auto& items = by_user_[user];
  return std::binary_search(items.begin(), items.end(), item);
}

TripleBatch TripleSampler::sample(std::size_t batch_size, GraphTag tag) {
  std::uniform_int_distribution<std::size_t> pick_pair(0, positives_.size() - 1);
  std::uniform_int_distribution<ItemId> pick_item(
      0, static_cast<ItemId>(num_items_ - 1));
  TripleBatch batch;
  batch.source = tag;
  batch.triples.reserve(batch_size);
  for (std::size_t b = 0; b < batch_size; ++b) {
    const auto& p = positives_[pick_pair(rng_)];
    if (by_user_[p.user].size() >= num_items_) {
      fail(ErrorCode::kNegativeSamplingStall,
           "user " + std::to_string(p.user) + " has interacted with every item");
    }
    ItemId neg = pick_item(rng_);
    while (is_positive(p.user, neg)) neg = pick_item(rng_);
    batch.triples.push_back({p.user, p.item, neg});
  }
  return batch;
}

TripleBatch sample_batch(const InteractionSet& train, std::size_t batch_size,
                         std::mt19937_64& rng) {
  TripleSampler sampler(train.pairs, train.num_users, train.num_items, rng());
  return sampler.sample(batch_size);
}

void adam_step(EmbeddingTable& table, const GradientTable& grad,
               AdamState& st, double lr) {
  if (grad.data.rows() != table.data.rows() ||
      grad.data.cols() != table.data.cols() ||
      st.m.rows() != table.data.rows() || st.m.cols() != table.data.cols()) {
    fail(ErrorCode::kShapeMismatch, "Adam shapes disagree");
  }
  ++st.t;
  const double t = static_cast<double>(st.t);
  const double c1 = 1.0 - std::pow(st.beta1, t);
  const double c2 = 1.0 - std::pow(st.beta2, t);
  const std::size_t dim = table.dim();
  for (std::size_t r = 0; r < table.data.rows(); ++r) {
    const auto g = grad.data.row(r);
    if (std::all_of(g.begin(), g.end(), [](double x) { return x == 0.0; })) {
      continue;
    }
    auto x = table.data.row(r);
    auto m = st.m.row(r);
    auto v = st.v.row(r);
    for (std::size_t d = 0; d < dim; ++d) {
      m[d] = st.beta1 * m[d] + (1.0 - st.beta1) * g[d];
      v[d] = st.beta2 * v[d] + (1.0 - st.beta2) * g[d] * g[d];
      x[d] -= lr * (m[d] / c1) / (std::sqrt(v[d] / c2) + st.eps);
    }
  }
}

void write_history_line(std::ostream& out, const EpochRecord& r) {
  nlohmann::ordered_json j;
  j["epoch"] = r.epoch;
  j["rec_loss"] = r.rec_loss;
  j["cr_loss"] = r.cr_loss;
  j["val_recall"] = r.val_recall;
  j["val_ndcg"] = r.val_ndcg;
  j["seconds"] = r.seconds;
  out << j.dump() << '\n';
}

TrainResult train(const TrainingPlan& plan, const TrainConfig& config,
                  EmbeddingTable initial, const InteractionSet& validation,
                  const InteractionSet& exclude,
                  const std::function<void(const EpochRecord&)>& on_epoch) {
  validate(config);
  require(plan.rec_graph != nullptr && plan.eval_graph != nullptr,
          ErrorCode::kInvalidArgument, "training plan needs graphs");

  TrainResult result;
  result.best = initial;
  if (config.max_epochs == 0) return result;

  const LossConfig lc = loss_config(config);
  const bool with_cr = config.mu != 0.0;
  require(!with_cr || static_cast<bool>(plan.views), ErrorCode::kInvalidArgument,
          "consistency loss enabled but no view provider");

  EmbeddingTable table = std::move(initial);
  AdamState adam(table);
  TripleSampler sampler(plan.positives, table.num_users, table.num_items,
                        derive_seed(config.seed, 1, 0));
  const std::size_t batches =
      (sampler.num_positives() + config.batch_size - 1) / config.batch_size;

  double best_recall = -1.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    EpochRecord record;
    record.epoch = epoch;

    ConsistencyViews views;
    LossGraphs graphs{plan.rec_graph, nullptr, nullptr};
    if (with_cr) {
      views = plan.views(epoch);
      graphs.anchor_view = &views.anchor;
      graphs.positive_view = &views.positive;
    }

    for (std::size_t b = 0; b < batches; ++b) {
      const TripleBatch batch = sampler.sample(config.batch_size, plan.tag);
      const auto step = total_loss_and_grad(table, batch, graphs, lc);
      record.rec_loss += step.report.rec;
      record.cr_loss += step.report.cr_item + step.report.cr_user;
      adam_step(table, step.grad, adam, config.lr);
      if (plan.after_batch) plan.after_batch(table);
    }
    if (plan.after_epoch) plan.after_epoch(table);

    const auto out = propagate(table, *plan.eval_graph, config.layers);
    const auto metrics =
        evaluate(out, validation, exclude, config.eval_k, config.threads);
    record.val_recall = metrics.recall;
    record.val_ndcg = metrics.ndcg;
    record.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    result.history.push_back(record);
    result.epochs_run = epoch;
    if (on_epoch) on_epoch(record);

    if (metrics.recall > best_recall) {
      best_recall = metrics.recall;
      result.best = table;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  result.best_recall = std::max(best_recall, 0.0);
  return result;
}

}  // namespace ucc
