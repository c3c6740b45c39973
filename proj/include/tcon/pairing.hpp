/*
 * Copyright 2026 The TCoN Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TCON_PAIRING_HPP
#define TCON_PAIRING_HPP

#include <cstdint>
#include <vector>

namespace tcon {

/// Source/target pairs admitted for co-attention in one batch.  Indices are
/// positions within the batch, not video ids.
struct PairSet {
  struct Pair {
    size_t src = 0;  // index into the source batch
    size_t tgt = 0;  // index into the target batch
    double similarity = 0.0;
    bool fallback = false;  // admitted by top-m fallback, not threshold
  };

  std::vector<Pair> pairs;            // ordered by (src, tgt)
  std::vector<size_t> m_source;       // M_i^s per source batch index
  std::vector<size_t> m_target;       // M_i'^t per target batch index
  uint64_t batch_id = 0;

  size_t size() const { return pairs.size(); }
};

/// Cosine similarity of two class-probability vectors, negatives clamped to
/// zero so the result lies in [0, 1].  Throws on zero vectors (unreachable
/// from a softmax).
double soft_label_similarity(const std::vector<double>& p,
                             const std::vector<double>& q);

/// All cross pairs with similarity >= threshold; any target left unpaired is
/// given its top_m most similar source videos (ties broken by ascending
/// source index).  soft_labels_* hold one C-dim probability row per video.
PairSet select_pairs(const std::vector<std::vector<double>>& soft_labels_src,
                     const std::vector<std::vector<double>>& soft_labels_tgt,
                     double threshold, size_t top_m, uint64_t batch_id = 0);

}  // namespace tcon

#endif  // TCON_PAIRING_HPP
