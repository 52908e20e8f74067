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


#include <ucc/losses.h>

#include <algorithm>
#include <cmath>

#include <ucc/error.h>

namespace ucc {

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double bpr_loss(std::span<const double> scores_pos,
                std::span<const double> scores_neg, double params_l2,
                double lambda) {
  require(scores_pos.size() == scores_neg.size(), ErrorCode::kShapeMismatch,
          "positive and negative score lists differ in length");
  double sum = 0.0;
  for (std::size_t k = 0; k < scores_pos.size(); ++k) {
    sum += softplus(scores_neg[k] - scores_pos[k]);
  }
  return sum + lambda * params_l2;
}

namespace {

struct Normalized {
  Matrix unit;               // row-normalized copy (only filled rows)
  std::vector<double> norm;  // per-row norm (0 for rows not requested)
};

void normalize_row(const Matrix& x, std::size_t r, Normalized& out) {
  const auto src = x.row(r);
  const double n = std::sqrt(squared_norm(src));
  if (!(n > 0.0) || !std::isfinite(n)) {
    fail(ErrorCode::kDegenerateRow,
         "row " + std::to_string(r) + " has zero norm");
  }
  out.norm[r] = n;
  auto dst = out.unit.row(r);
  for (std::size_t d = 0; d < src.size(); ++d) dst[d] = src[d] / n;
}

// d/dx of a loss given its gradient g on x / ||x||.
void unnormalize_grad(std::span<const double> g, std::span<const double> unit,
                      double norm, std::span<double> out) {
  const double proj = dot(g, unit);
  for (std::size_t d = 0; d < g.size(); ++d) {
    out[d] += (g[d] - proj * unit[d]) / norm;
  }
}

}  // namespace

InfoNceResult info_nce(const Matrix& anchor_view, const Matrix& positive_view,
                       std::span<const std::size_t> anchors, std::size_t begin,
                       std::size_t end, double tau, NegativeMode mode,
                       bool with_grad) {
  require(tau > 0.0, ErrorCode::kInvalidArgument, "temperature must be > 0");
  require(anchor_view.rows() == positive_view.rows() &&
              anchor_view.cols() == positive_view.cols(),
          ErrorCode::kShapeMismatch, "views differ in shape");
  const std::size_t dim = anchor_view.cols();

  std::vector<std::size_t> candidates;
  if (mode == NegativeMode::kInBatch) {
    candidates.assign(anchors.begin(), anchors.end());
  } else {
    for (std::size_t j = begin; j < end; ++j) candidates.push_back(j);
  }

  Normalized a{Matrix(anchor_view.rows(), dim),
               std::vector<double>(anchor_view.rows(), 0.0)};
  Normalized b{Matrix(positive_view.rows(), dim),
               std::vector<double>(positive_view.rows(), 0.0)};
  for (std::size_t i : anchors) normalize_row(anchor_view, i, a);
  for (std::size_t j : candidates) normalize_row(positive_view, j, b);

  InfoNceResult result;
  Matrix g_unit_a, g_unit_b;
  if (with_grad) {
    g_unit_a = Matrix(anchor_view.rows(), dim);
    g_unit_b = Matrix(positive_view.rows(), dim);
  }

  const double inv_tau = 1.0 / tau;
  std::vector<double> logits(candidates.size());
  for (std::size_t i : anchors) {
    const auto ai = a.unit.row(i);
    double max_logit = -INFINITY;
    double positive_logit = 0.0;
    bool positive_seen = false;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      logits[c] = dot(ai, b.unit.row(candidates[c])) * inv_tau;
      max_logit = std::max(max_logit, logits[c]);
      if (candidates[c] == i) {
        positive_logit = logits[c];
        positive_seen = true;
      }
    }
    require(positive_seen, ErrorCode::kInvalidArgument,
            "anchor outside the candidate range");
    double denom = 0.0;
    for (double l : logits) denom += std::exp(l - max_logit);
    const double log_denom = max_logit + std::log(denom);
    result.loss += log_denom - positive_logit;

    if (!with_grad) continue;
    auto ga = g_unit_a.row(i);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const std::size_t j = candidates[c];
      double w = std::exp(logits[c] - log_denom);
      if (j == i) w -= 1.0;
      w *= inv_tau;
      const auto bj = b.unit.row(j);
      auto gb = g_unit_b.row(j);
      for (std::size_t d = 0; d < dim; ++d) {
        ga[d] += w * bj[d];
        gb[d] += w * ai[d];
      }
    }
  }

  if (with_grad) {
    result.grad_anchor = Matrix(anchor_view.rows(), dim);
    result.grad_positive = Matrix(positive_view.rows(), dim);
    for (std::size_t i : anchors) {
      unnormalize_grad(g_unit_a.row(i), a.unit.row(i), a.norm[i],
                       result.grad_anchor.row(i));
    }
    for (std::size_t j : candidates) {
      unnormalize_grad(g_unit_b.row(j), b.unit.row(j), b.norm[j],
                       result.grad_positive.row(j));
    }
  }
  return result;
}

double info_nce(const Matrix& anchor_view, const Matrix& positive_view,
                double tau) {
  std::vector<std::size_t> all(anchor_view.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return info_nce(anchor_view, positive_view, all, 0, anchor_view.rows(), tau,
                  NegativeMode::kFull, false)
      .loss;
}

namespace {

void add_into(Matrix& acc, const Matrix& x, double scale) {
  auto& a = acc.values();
  const auto& v = x.values();
  for (std::size_t k = 0; k < a.size(); ++k) a[k] += scale * v[k];
}

}  // namespace

LossAndGrad total_loss_and_grad(const EmbeddingTable& e0,
                                const TripleBatch& batch,
                                const LossGraphs& graphs,
                                const LossConfig& config) {
  const std::size_t m = e0.num_users;
  const std::size_t dim = e0.dim();
  LossAndGrad out;
  out.grad = GradientTable(e0.num_users, e0.num_items, dim);

  // Distinct batch rows, as absolute node ids.
  std::vector<std::size_t> user_rows, item_rows;
  for (const auto& t : batch.triples) {
    user_rows.push_back(t.user);
    item_rows.push_back(m + t.pos);
    item_rows.push_back(m + t.neg);
  }
  for (auto* rows : {&user_rows, &item_rows}) {
    std::sort(rows->begin(), rows->end());
    rows->erase(std::unique(rows->begin(), rows->end()), rows->end());
  }

  for (auto* rows : {&user_rows, &item_rows}) {
    for (std::size_t r : *rows) out.report.l2 += squared_norm(e0.data.row(r));
  }

  if (config.use_rec) {
    require(graphs.rec != nullptr, ErrorCode::kInvalidArgument,
            "recommendation graph missing");
    const auto prop = propagate(e0, *graphs.rec, config.layers);
    Matrix g_final(e0.num_nodes(), dim);
    double bpr = 0.0;
    for (const auto& t : batch.triples) {
      const auto fu = prop.final.row(t.user);
      const auto fp = prop.final.row(m + t.pos);
      const auto fn = prop.final.row(m + t.neg);
      const double x = dot(fu, fp) - dot(fu, fn);
      bpr += softplus(-x);
      const double c = -sigmoid(-x);
      auto gu = g_final.row(t.user);
      auto gp = g_final.row(m + t.pos);
      auto gn = g_final.row(m + t.neg);
      for (std::size_t d = 0; d < dim; ++d) {
        gu[d] += c * (fp[d] - fn[d]);
        gp[d] += c * fu[d];
        gn[d] -= c * fu[d];
      }
    }
    out.report.rec = bpr + config.lambda * out.report.l2;
    add_into(out.grad.data, propagate_backward(g_final, *graphs.rec, config.layers), 1.0);
    for (auto* rows : {&user_rows, &item_rows}) {
      for (std::size_t r : *rows) {
        const auto src = e0.data.row(r);
        auto dst = out.grad.data.row(r);
        for (std::size_t d = 0; d < dim; ++d) dst[d] += 2.0 * config.lambda * src[d];
      }
    }
  }

  const bool want_cr = config.mu != 0.0 && (config.use_cr_item || config.use_cr_user);
  if (want_cr) {
    require(graphs.anchor_view != nullptr && graphs.positive_view != nullptr,
            ErrorCode::kInvalidArgument, "consistency views missing");
    const auto za = propagate(e0, *graphs.anchor_view, config.layers);
    const auto zb = propagate(e0, *graphs.positive_view, config.layers);
    Matrix g_a(e0.num_nodes(), dim);
    Matrix g_b(e0.num_nodes(), dim);
    const auto side = [&](const std::vector<std::size_t>& anchors,
                          std::size_t begin, std::size_t end) {
      auto r = info_nce(za.final, zb.final, anchors, begin, end, config.tau,
                        config.negatives, true);
      add_into(g_a, r.grad_anchor, config.mu);
      add_into(g_b, r.grad_positive, config.mu);
      return r.loss;
    };
    if (config.use_cr_user) {
      out.report.cr_user = side(user_rows, 0, m);
    }
    if (config.use_cr_item) {
      out.report.cr_item = side(item_rows, m, e0.num_nodes());
    }
    add_into(out.grad.data,
             propagate_backward(g_a, *graphs.anchor_view, config.layers), 1.0);
    add_into(out.grad.data,
             propagate_backward(g_b, *graphs.positive_view, config.layers), 1.0);
  }

  out.report.total =
      out.report.rec + config.mu * (out.report.cr_item + out.report.cr_user);
  return out;
}

}  // namespace ucc
