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

#ifndef TCON_COATTENTION_HPP
#define TCON_COATTENTION_HPP

#include <cstdint>
#include <vector>

#include "tcon/tape.hpp"
#include "tcon/tensor.hpp"

namespace tcon {

/// Positive attention mass at or below this collapses to the uniform
/// fallback when renormalizing ground-truth attention.
constexpr double kMassEps = 1e-12;

enum class Domain : uint8_t { kSource = 0, kTarget = 1 };

/// One video's ordered segment features (K rows of dimension d).
struct FeatureSequence {
  uint32_t id = 0;
  Domain domain = Domain::kSource;
  int32_t label = -1;  // -1 = unlabeled
  Tensor feats;        // K x d

  size_t k() const { return feats.rows(); }
  size_t d() const { return feats.cols(); }

  /// Counted accessor.  Code that consumes features for training or
  /// evaluation goes through this, so tests can assert which sequences a
  /// code path actually touched.
  const Tensor& features() const {
    ++access_count;
    return feats;
  }

  mutable uint64_t access_count = 0;
};

struct AttentionVector {
  enum class Kind : uint8_t {
    kSS,
    kTT,
    kGroundTruthSource,
    kGroundTruthTarget,
    kPredictedTarget,
  };
  Kind kind = Kind::kSS;
  std::vector<double> weights;
  bool degenerate = false;  // K == 1 forced singleton
};

/// Everything computed for one source/target video pair.
struct CoAttentionMatrix {
  int64_t pair_id = -1;  // i * num_target_videos + i'
  uint32_t src_id = 0;
  uint32_t tgt_id = 0;
  size_t ks = 0, kt = 0;
  std::vector<double> a_ss;          // length ks, softmax-normalized
  std::vector<double> a_tt;          // length kt, softmax-normalized
  std::vector<double> a_st;          // ks*kt row-major
  std::vector<double> a_co_raw;      // ks*kt
  std::vector<double> a_co_colnorm;  // ks*kt, columns sum to 1
};

/// Target-aligned source segment features for one pair.
struct AlignedSequence {
  int64_t pair_id = -1;
  size_t kt = 0, d = 0;
  // kt rows of dimension d; the concatenated video feature is the same
  // buffer read as one row of length kt*d (segments are stored in temporal
  // order, so joining them is the identity on this layout).
  Tensor segments;

  const double* concatenated() const { return segments.data(); }
};

// -- pure operations ---------------------------------------------------------

/// Leave-one-out mean inner-product scores, length K.  Requires K >= 2.
std::vector<double> self_attention_raw_scores(const FeatureSequence& seq);

/// Raw scores passed through softmax.  K == 1 yields weight 1.0 with the
/// degenerate flag set.
AttentionVector self_attention(const FeatureSequence& seq);

/// Entry (j, j') = <f_j_src, f_j'_tgt>; ks x kt row-major.
std::vector<double> cross_similarity(const FeatureSequence& src,
                                     const FeatureSequence& tgt);

CoAttentionMatrix coattention_matrix(const FeatureSequence& src,
                                     const FeatureSequence& tgt);

/// Assembles a CoAttentionMatrix from externally supplied factors
/// (a_ss/a_tt already normalized).
CoAttentionMatrix coattention_from_factors(const std::vector<double>& a_ss,
                                           const std::vector<double>& a_tt,
                                           const std::vector<double>& a_st);

/// Aggregates a video's pair matrices into its ground-truth attention:
/// row-sum averages for a source video, column-sum averages for a target
/// video, then relu + renormalize to sum 1 (uniform fallback when the
/// positive mass vanishes).  Throws no_pairs_error on an empty list.
AttentionVector ground_truth_attention(
    const std::vector<const CoAttentionMatrix*>& pairs, Domain side);

AlignedSequence target_aligned_features(const CoAttentionMatrix& pair,
                                        const FeatureSequence& src);

/// Segments joined in temporal order: length K*d.
std::vector<double> concat_video_feature(const FeatureSequence& seq);

/// Returns a copy with every segment L2-normalized (zero segments kept).
FeatureSequence l2_normalized(const FeatureSequence& seq);

// -- tape builders (same math with gradients) --------------------------------

struct CoattnVars {
  Var a_ss;          // 1 x ks
  Var a_tt;          // 1 x kt
  Var a_st;          // ks x kt
  Var a_co_raw;      // ks x kt
  Var a_co_colnorm;  // ks x kt
  size_t ks = 0, kt = 0;
};

/// Softmaxed self-attention as a 1 x K row.  f is K x d.
Var build_self_attention(Tape& t, Var f);

/// Full pair computation from feature vars; a_ss/a_tt may be passed in when
/// already built for the videos (invalid Vars mean "build here").
CoattnVars build_coattention(Tape& t, Var fs, Var ft, Var a_ss = {},
                             Var a_tt = {});

/// Target-aligned source segments, kt x d.
Var build_aligned_rows(Tape& t, const CoattnVars& co, Var fs);

/// Aligned segments concatenated to 1 x (kt*d).
Var build_aligned_concat(Tape& t, const CoattnVars& co, Var fs);

}  // namespace tcon

#endif  // TCON_COATTENTION_HPP
