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
#include <functional>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include <ucc/dataset.h>
#include <ucc/encoder.h>
#include <ucc/graph.h>
#include <ucc/losses.h>

namespace ucc {

struct TrainConfig {
  double lr = 1e-4;
  double lambda = 1e-4;
  double mu = 0.1;
  double tau = 0.2;
  double rho = 0.1;  // weak-augmentation edge dropout
  std::size_t dim = 64;
  std::size_t layers = 3;
  std::size_t batch_size = 2048;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  std::uint64_t seed = 2024;
  double init_scale = 0.1;
  NegativeMode negatives = NegativeMode::kFull;
  std::size_t eval_k = 20;
  std::size_t threads = 1;
};

/// Throws InvalidArgument when a field is out of range.
void validate(const TrainConfig& config);

LossConfig loss_config(const TrainConfig& config);

/// splitmix64 mix of (base, stream, index); used to give every epoch and
/// every random stream its own seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                          std::uint64_t index);

/// Draws (user, positive, negative) triples: the positive pair uniformly
/// from `positives`, the negative uniformly from items the user has no
/// positive with (rejection sampling).
class TripleSampler {
 public:
  TripleSampler(std::vector<Interaction> positives, std::size_t num_users,
                std::size_t num_items, std::uint64_t seed);

  TripleBatch sample(std::size_t batch_size, GraphTag tag = GraphTag::kOriginal);

  bool is_positive(UserId user, ItemId item) const;
  std::size_t num_positives() const { return positives_.size(); }

 private:
  std::vector<Interaction> positives_;
  std::size_t num_items_;
  std::vector<std::vector<ItemId>> by_user_;
  std::mt19937_64 rng_;
};

/// One batch from the training pairs with the caller's generator.
TripleBatch sample_batch(const InteractionSet& train, std::size_t batch_size,
                         std::mt19937_64& rng);

struct AdamState {
  Matrix m;
  Matrix v;
  std::uint64_t t = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  explicit AdamState(const EmbeddingTable& like)
      : m(like.data.rows(), like.data.cols()),
        v(like.data.rows(), like.data.cols()) {}
};

/// Bias-corrected Adam. The step counter always advances; moments and
/// parameters change only for rows with a nonzero gradient.
void adam_step(EmbeddingTable& table, const GradientTable& grad,
               AdamState& state, double lr);

struct EpochRecord {
  std::size_t epoch = 0;
  double rec_loss = 0.0;
  double cr_loss = 0.0;
  double val_recall = 0.0;
  double val_ndcg = 0.0;
  double seconds = 0.0;
};

/// One JSON object per line.
void write_history_line(std::ostream& out, const EpochRecord& record);

struct ConsistencyViews {
  BipartiteGraph anchor;    // z'
  BipartiteGraph positive;  // z''
};

/// What differs between the teacher and student phases.
struct TrainingPlan {
  /// BPR scores propagate over this graph.
  const BipartiteGraph* rec_graph = nullptr;
  /// Validation propagates over this graph.
  const BipartiteGraph* eval_graph = nullptr;
  /// BPR positive pairs; negatives avoid all of them.
  std::vector<Interaction> positives;
  GraphTag tag = GraphTag::kOriginal;
  /// Consistency views for an epoch (called once per epoch when mu != 0).
  std::function<ConsistencyViews(std::size_t epoch)> views;
  std::function<void(EmbeddingTable&)> after_batch;
  std::function<void(EmbeddingTable&)> after_epoch;
};

struct TrainResult {
  EmbeddingTable best;
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  double best_recall = 0.0;
  std::size_t epochs_run = 0;
};

/// Epoch loop with Adam and early stopping on validation Recall@k. Returns
/// the table of the best validation epoch. `exclude` holds the pairs that
/// validation ranking must skip (the training set).
TrainResult train(const TrainingPlan& plan, const TrainConfig& config,
                  EmbeddingTable initial, const InteractionSet& validation,
                  const InteractionSet& exclude,
                  const std::function<void(const EpochRecord&)>& on_epoch = {});

}  // namespace ucc
