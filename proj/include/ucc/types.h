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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ucc {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

struct Interaction {
  UserId user = 0;
  ItemId item = 0;

  friend auto operator<=>(const Interaction&, const Interaction&) = default;
};

struct PseudoInteraction {
  UserId user = 0;
  ItemId item = 0;
  // Teacher confidence: |cosine| (signed cosine when so configured).
  double similarity = 0.0;

  friend bool operator==(const PseudoInteraction&,
                         const PseudoInteraction&) = default;
};

/// Generated interactions for the strong-augmentation graph. Triples are kept
/// in export order: by item, then descending similarity, then user.
struct PseudoInteractionSet {
  std::vector<PseudoInteraction> triples;
  double alpha = 0.0;
  std::size_t k_cap = 0;

  std::size_t size() const { return triples.size(); }
  bool empty() const { return triples.empty(); }

  friend bool operator==(const PseudoInteractionSet&,
                         const PseudoInteractionSet&) = default;
};

}  // namespace ucc
