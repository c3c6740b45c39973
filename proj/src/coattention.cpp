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

#include "tcon/coattention.hpp"

#include <cmath>
#include <cstring>

#include "tcon/errors.hpp"
#include "tcon/kernels.hpp"

namespace tcon {

std::vector<double> self_attention_raw_scores(const FeatureSequence& seq) {
  const Tensor& f = seq.features();
  size_t k = f.rows(), d = f.cols();
  if (k < 2) throw shape_error("self-attention raw scores need K >= 2");
  // Gram matrix row sums minus the diagonal give the leave-one-out totals.
  std::vector<double> gram(k * k);
  kernels::gemm_nt(f.data(), f.data(), gram.data(), k, d, k);
  std::vector<double> scores(k);
  for (size_t j = 0; j < k; ++j) {
    double total = 0.0;
    for (size_t j2 = 0; j2 < k; ++j2) total += gram[j * k + j2];
    scores[j] = (total - gram[j * k + j]) / static_cast<double>(k - 1);
  }
  return scores;
}

AttentionVector self_attention(const FeatureSequence& seq) {
  AttentionVector out;
  out.kind = seq.domain == Domain::kSource ? AttentionVector::Kind::kSS
                                           : AttentionVector::Kind::kTT;
  if (seq.k() == 1) {
    out.weights = {1.0};
    out.degenerate = true;
    return out;
  }
  std::vector<double> raw = self_attention_raw_scores(seq);
  out.weights.resize(raw.size());
  kernels::softmax_rows(raw.data(), out.weights.data(), 1, raw.size());
  return out;
}

std::vector<double> cross_similarity(const FeatureSequence& src,
                                     const FeatureSequence& tgt) {
  const Tensor& fs = src.features();
  const Tensor& ft = tgt.features();
  if (fs.cols() != ft.cols())
    throw dimension_error("cross_similarity dimension mismatch: d=" +
                          std::to_string(fs.cols()) + " vs d=" +
                          std::to_string(ft.cols()));
  std::vector<double> out(fs.rows() * ft.rows());
  kernels::gemm_nt(fs.data(), ft.data(), out.data(), fs.rows(), fs.cols(),
                   ft.rows());
  return out;
}

CoAttentionMatrix coattention_from_factors(const std::vector<double>& a_ss,
                                           const std::vector<double>& a_tt,
                                           const std::vector<double>& a_st) {
  CoAttentionMatrix m;
  m.ks = a_ss.size();
  m.kt = a_tt.size();
  if (a_st.size() != m.ks * m.kt)
    throw shape_error("a_st size does not match |a_ss| x |a_tt|");
  m.a_ss = a_ss;
  m.a_tt = a_tt;
  m.a_st = a_st;
  m.a_co_raw.resize(m.ks * m.kt);
  for (size_t j = 0; j < m.ks; ++j)
    for (size_t j2 = 0; j2 < m.kt; ++j2)
      m.a_co_raw[j * m.kt + j2] = a_ss[j] * a_tt[j2] * a_st[j * m.kt + j2];
  m.a_co_colnorm.resize(m.ks * m.kt);
  kernels::softmax_cols(m.a_co_raw.data(), m.a_co_colnorm.data(), m.ks, m.kt);
  return m;
}

CoAttentionMatrix coattention_matrix(const FeatureSequence& src,
                                     const FeatureSequence& tgt) {
  CoAttentionMatrix m = coattention_from_factors(
      self_attention(src).weights, self_attention(tgt).weights,
      cross_similarity(src, tgt));
  m.src_id = src.id;
  m.tgt_id = tgt.id;
  return m;
}

AttentionVector ground_truth_attention(
    const std::vector<const CoAttentionMatrix*>& pairs, Domain side) {
  if (pairs.empty())
    throw no_pairs_error(
        "ground_truth_attention: video has no co-attention pairs; fall back "
        "to uniform attention");
  size_t k = side == Domain::kSource ? pairs[0]->ks : pairs[0]->kt;
  std::vector<double> agg(k, 0.0);
  for (const CoAttentionMatrix* m : pairs) {
    if ((side == Domain::kSource ? m->ks : m->kt) != k)
      throw shape_error("ground_truth_attention: inconsistent K across pairs");
    if (side == Domain::kSource) {
      for (size_t j = 0; j < m->ks; ++j)
        for (size_t j2 = 0; j2 < m->kt; ++j2) agg[j] += m->a_co_raw[j * m->kt + j2];
    } else {
      for (size_t j = 0; j < m->ks; ++j)
        for (size_t j2 = 0; j2 < m->kt; ++j2) agg[j2] += m->a_co_raw[j * m->kt + j2];
    }
  }
  double inv_pairs = 1.0 / static_cast<double>(pairs.size());
  double mass = 0.0;
  for (double& v : agg) {
    v *= inv_pairs;
    if (v < 0.0) v = 0.0;
    mass += v;
  }
  AttentionVector out;
  out.kind = side == Domain::kSource ? AttentionVector::Kind::kGroundTruthSource
                                     : AttentionVector::Kind::kGroundTruthTarget;
  out.weights.resize(k);
  if (mass <= kMassEps) {
    std::fill(out.weights.begin(), out.weights.end(), 1.0 / static_cast<double>(k));
  } else {
    for (size_t j = 0; j < k; ++j) out.weights[j] = agg[j] / mass;
  }
  return out;
}

AlignedSequence target_aligned_features(const CoAttentionMatrix& pair,
                                        const FeatureSequence& src) {
  const Tensor& fs = src.features();
  if (fs.rows() != pair.ks)
    throw shape_error("target_aligned_features: pair Ks != source K");
  AlignedSequence out;
  out.pair_id = pair.pair_id;
  out.kt = pair.kt;
  out.d = fs.cols();
  out.segments = Tensor(pair.kt, fs.cols());
  // f_hat = colnorm^T . F_s
  kernels::gemm_tn(pair.a_co_colnorm.data(), fs.data(), out.segments.data(),
                   pair.kt, pair.ks, fs.cols());
  return out;
}

std::vector<double> concat_video_feature(const FeatureSequence& seq) {
  const Tensor& f = seq.features();
  return f.vec();
}

FeatureSequence l2_normalized(const FeatureSequence& seq) {
  FeatureSequence out = seq;
  out.access_count = 0;
  for (size_t r = 0; r < out.feats.rows(); ++r) {
    double n2 = 0.0;
    for (size_t c = 0; c < out.feats.cols(); ++c)
      n2 += out.feats.at(r, c) * out.feats.at(r, c);
    if (n2 > 0.0) {
      double inv = 1.0 / std::sqrt(n2);
      for (size_t c = 0; c < out.feats.cols(); ++c) out.feats.at(r, c) *= inv;
    }
  }
  return out;
}

Var build_self_attention(Tape& t, Var f) {
  Shape s = t.shape(f);
  if (s.rows == 1) {
    Tensor one(1, 1);
    one[0] = 1.0;
    return t.constant(one);
  }
  Var gram = t.matmul(f, t.transpose(f));          // K x K
  Var totals = t.transpose(t.row_sums(gram));      // 1 x K
  Var diag = t.diag_part(gram);                    // 1 x K
  Var raw = t.scale(t.sub(totals, diag), 1.0 / static_cast<double>(s.rows - 1));
  return t.softmax_rows(raw);
}

CoattnVars build_coattention(Tape& t, Var fs, Var ft, Var a_ss, Var a_tt) {
  CoattnVars co;
  co.ks = t.shape(fs).rows;
  co.kt = t.shape(ft).rows;
  co.a_ss = a_ss.valid() ? a_ss : build_self_attention(t, fs);
  co.a_tt = a_tt.valid() ? a_tt : build_self_attention(t, ft);
  co.a_st = t.matmul(fs, t.transpose(ft));  // ks x kt
  Var outer = t.matmul(t.transpose(co.a_ss), co.a_tt);
  co.a_co_raw = t.mul(outer, co.a_st);
  co.a_co_colnorm = t.softmax_cols(co.a_co_raw);
  return co;
}

Var build_aligned_rows(Tape& t, const CoattnVars& co, Var fs) {
  return t.matmul(t.transpose(co.a_co_colnorm), fs);  // kt x d
}

Var build_aligned_concat(Tape& t, const CoattnVars& co, Var fs) {
  Var rows = build_aligned_rows(t, co, fs);
  Shape s = t.shape(rows);
  return t.reshape(rows, 1, s.rows * s.cols);
}

}  // namespace tcon
