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

#include <span>
#include <vector>

#include <ucc/encoder.h>
#include <ucc/graph.h>
#include <ucc/types.h>

namespace ucc {

/// ln(1 + e^x) without overflow; -ln(sigmoid(x)) == softplus(-x).
double softplus(double x);
double sigmoid(double x);

/// Sum over pairs of -ln sigmoid(pos - neg), plus lambda * params_l2.
double bpr_loss(std::span<const double> scores_pos,
                std::span<const double> scores_neg, double params_l2,
                double lambda);

enum class NegativeMode {
  kFull,     // denominator over every row of the view
  kInBatch,  // denominator over the anchor rows only
};

struct InfoNceResult {
  double loss = 0.0;
  Matrix grad_anchor;    // d loss / d anchor-view rows
  Matrix grad_positive;  // d loss / d positive-view rows
};

/// Cosine-similarity InfoNCE. For each anchor row i of `anchor_view`, the
/// positive is row i of `positive_view`; negatives are the candidate rows
/// [begin, end) of `positive_view` (or the anchors themselves in
/// kInBatch mode). Gradients are accumulated into full-size matrices when
/// `with_grad` is set. Throws DegenerateRow on a zero-norm row.
InfoNceResult info_nce(const Matrix& anchor_view, const Matrix& positive_view,
                       std::span<const std::size_t> anchors, std::size_t begin,
                       std::size_t end, double tau, NegativeMode mode,
                       bool with_grad);

/// Every row is an anchor; candidates are all rows.
double info_nce(const Matrix& anchor_view, const Matrix& positive_view,
                double tau);

struct Triple {
  UserId user = 0;
  ItemId pos = 0;
  ItemId neg = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

enum class GraphTag { kOriginal, kStrong };

struct TripleBatch {
  std::vector<Triple> triples;
  GraphTag source = GraphTag::kOriginal;
};

struct LossReport {
  double rec = 0.0;      // BPR sum + lambda * l2
  double cr_item = 0.0;
  double cr_user = 0.0;
  double l2 = 0.0;       // squared norm of the batch's layer-0 rows
  double total = 0.0;    // rec + mu * (cr_item + cr_user)
};

struct LossConfig {
  double lambda = 1e-4;
  double mu = 0.1;
  double tau = 0.2;
  std::size_t layers = 3;
  NegativeMode negatives = NegativeMode::kFull;
  // Component switches, used to check each term's gradient in isolation.
  bool use_rec = true;
  bool use_cr_item = true;
  bool use_cr_user = true;
};

/// Graphs that one loss evaluation propagates over. BPR scores come from
/// `rec`; consistency contrasts `anchor_view` (z') against
/// `positive_view` (z'').
struct LossGraphs {
  const BipartiteGraph* rec = nullptr;
  const BipartiteGraph* anchor_view = nullptr;
  const BipartiteGraph* positive_view = nullptr;
};

struct LossAndGrad {
  LossReport report;
  GradientTable grad;
};

/// Loss of one mini-batch and its exact gradient with respect to the
/// layer-0 embeddings. Consistency anchors are the distinct users and the
/// distinct (positive and negative) items of the batch.
LossAndGrad total_loss_and_grad(const EmbeddingTable& e0,
                                const TripleBatch& batch,
                                const LossGraphs& graphs,
                                const LossConfig& config);

}  // namespace ucc
