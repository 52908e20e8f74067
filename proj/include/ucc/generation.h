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

#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include <ucc/dataset.h>
#include <ucc/encoder.h>
#include <ucc/types.h>

namespace ucc {

/// |a . b| / (|a| |b|), in [0, 1]. Throws DegenerateRow on a zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Mean of the dot-product scores of `item` over all users.
double item_mean_score(const PropagationOutput& out, ItemId item);

/// How a candidate's confidence is measured: |cos| as published, or the
/// signed cosine, which ranks anti-aligned users last instead of first.
enum class Confidence { kAbsolute, kSigned };

/// Pseudo interactions from a trained teacher. For every item n, each user m
/// without a training interaction on n is a candidate with confidence
/// d_mn = |cos(e_m, e_n)|; candidates with d_mn > alpha * mean_score(n)
/// survive, and the k_cap most confident survivors are kept (ties to the
/// smaller user id).
PseudoInteractionSet generate(const PropagationOutput& teacher,
                              const InteractionSet& train, double alpha,
                              std::size_t k_cap, std::size_t threads = 1,
                              Confidence confidence = Confidence::kAbsolute);

/// "user<TAB>item<TAB>similarity" lines, similarity with 17 significant
/// digits, ordered by (item, -similarity, user).
void write_pseudo(std::ostream& out, const PseudoInteractionSet& pseudo);
PseudoInteractionSet read_pseudo(std::istream& in);
void save_pseudo(const PseudoInteractionSet& pseudo,
                 const std::filesystem::path& path);
PseudoInteractionSet load_pseudo(const std::filesystem::path& path);

}  // namespace ucc
