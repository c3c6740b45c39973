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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "tcon/coattention.hpp"
#include "tcon/errors.hpp"
#include "tcon/rng.hpp"
#include "tcon/tape.hpp"
#include "tcon/tensor.hpp"

using namespace tcon;

namespace {

FeatureSequence make_seq(size_t k, size_t d, const std::vector<double>& vals,
                         Domain dom = Domain::kSource) {
  FeatureSequence s;
  s.domain = dom;
  s.feats = Tensor(k, d);
  REQUIRE(vals.size() == k * d);
  std::copy(vals.begin(), vals.end(), s.feats.data());
  return s;
}

FeatureSequence random_seq(Rng& rng, size_t k, size_t d, Domain dom) {
  FeatureSequence s;
  s.domain = dom;
  s.feats = Tensor(k, d);
  for (size_t i = 0; i < k * d; ++i) s.feats[i] = rng.uniform(-2.0, 2.0);
  return s;
}

// Straight-line re-statement of the pair computation with explicit loops;
// no shared code with the library version.
CoAttentionMatrix naive_pair(const FeatureSequence& src,
                             const FeatureSequence& tgt) {
  auto self_attn = [](const Tensor& f) {
    size_t k = f.rows(), d = f.cols();
    std::vector<double> w(k);
    if (k == 1) {
      w[0] = 1.0;
      return w;
    }
    std::vector<double> raw(k, 0.0);
    for (size_t j = 0; j < k; ++j) {
      for (size_t j2 = 0; j2 < k; ++j2) {
        if (j2 == j) continue;
        double dot = 0.0;
        for (size_t i = 0; i < d; ++i) dot += f.at(j, i) * f.at(j2, i);
        raw[j] += dot;
      }
      raw[j] /= static_cast<double>(k - 1);
    }
    double mx = *std::max_element(raw.begin(), raw.end());
    double z = 0.0;
    for (size_t j = 0; j < k; ++j) z += std::exp(raw[j] - mx);
    for (size_t j = 0; j < k; ++j) w[j] = std::exp(raw[j] - mx) / z;
    return w;
  };
  CoAttentionMatrix m;
  m.ks = src.feats.rows();
  m.kt = tgt.feats.rows();
  m.a_ss = self_attn(src.feats);
  m.a_tt = self_attn(tgt.feats);
  m.a_st.assign(m.ks * m.kt, 0.0);
  for (size_t j = 0; j < m.ks; ++j)
    for (size_t j2 = 0; j2 < m.kt; ++j2)
      for (size_t i = 0; i < src.feats.cols(); ++i)
        m.a_st[j * m.kt + j2] += src.feats.at(j, i) * tgt.feats.at(j2, i);
  m.a_co_raw.resize(m.ks * m.kt);
  for (size_t j = 0; j < m.ks; ++j)
    for (size_t j2 = 0; j2 < m.kt; ++j2)
      m.a_co_raw[j * m.kt + j2] =
          m.a_ss[j] * m.a_tt[j2] * m.a_st[j * m.kt + j2];
  m.a_co_colnorm.resize(m.ks * m.kt);
  for (size_t j2 = 0; j2 < m.kt; ++j2) {
    double mx = -1e300;
    for (size_t j = 0; j < m.ks; ++j)
      mx = std::max(mx, m.a_co_raw[j * m.kt + j2]);
    double z = 0.0;
    for (size_t j = 0; j < m.ks; ++j)
      z += std::exp(m.a_co_raw[j * m.kt + j2] - mx);
    for (size_t j = 0; j < m.ks; ++j)
      m.a_co_colnorm[j * m.kt + j2] =
          std::exp(m.a_co_raw[j * m.kt + j2] - mx) / z;
  }
  return m;
}

}  // namespace

TEST_CASE("self-attention matches hand-computed example") {
  // f = [(1,0),(1,0),(0,1)]: leave-one-out mean scores [0.5, 0.5, 0.0].
  FeatureSequence s = make_seq(3, 2, {1, 0, 1, 0, 0, 1});
  std::vector<double> raw = self_attention_raw_scores(s);
  CHECK(raw[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(raw[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(raw[2] == doctest::Approx(0.0).epsilon(1e-12));

  AttentionVector a = self_attention(s);
  CHECK(a.kind == AttentionVector::Kind::kSS);
  CHECK(!a.degenerate);
  const double e5 = std::exp(0.5), z = 2.0 * e5 + 1.0;
  CHECK(a.weights[0] == doctest::Approx(e5 / z).epsilon(1e-14));
  CHECK(a.weights[1] == doctest::Approx(e5 / z).epsilon(1e-14));
  CHECK(a.weights[2] == doctest::Approx(1.0 / z).epsilon(1e-14));
  // 5 d.p. anchors so a regression cannot hide behind the closed form.
  CHECK(a.weights[0] == doctest::Approx(0.38365).epsilon(1e-4));
  CHECK(a.weights[2] == doctest::Approx(0.23269).epsilon(1e-4));

  double sum = std::accumulate(a.weights.begin(), a.weights.end(), 0.0);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("self-attention K=1 degenerates to a flagged singleton") {
  FeatureSequence s = make_seq(1, 3, {4, 5, 6}, Domain::kTarget);
  AttentionVector a = self_attention(s);
  CHECK(a.kind == AttentionVector::Kind::kTT);
  CHECK(a.degenerate);
  REQUIRE(a.weights.size() == 1);
  CHECK(a.weights[0] == 1.0);
  CHECK_THROWS_AS((void)self_attention_raw_scores(s), shape_error);
}

TEST_CASE("cross similarity is the inner-product table") {
  FeatureSequence src = make_seq(2, 2, {1, 2, 3, 4});
  FeatureSequence tgt = make_seq(3, 2, {1, 0, 0, 1, 1, 1}, Domain::kTarget);
  std::vector<double> s = cross_similarity(src, tgt);
  REQUIRE(s.size() == 6);
  CHECK(s[0] == doctest::Approx(1.0));   // <(1,2),(1,0)>
  CHECK(s[1] == doctest::Approx(2.0));   // <(1,2),(0,1)>
  CHECK(s[2] == doctest::Approx(3.0));   // <(1,2),(1,1)>
  CHECK(s[3] == doctest::Approx(3.0));   // <(3,4),(1,0)>
  CHECK(s[4] == doctest::Approx(4.0));   // <(3,4),(0,1)>
  CHECK(s[5] == doctest::Approx(7.0));   // <(3,4),(1,1)>

  FeatureSequence bad = make_seq(2, 3, {1, 2, 3, 4, 5, 6}, Domain::kTarget);
  CHECK_THROWS_AS((void)cross_similarity(src, bad), dimension_error);
}

TEST_CASE("colnorm matches hand-computed single-column example") {
  // raw column [1.0, 2.0] -> softmax -> [0.2689, 0.7311].
  CoAttentionMatrix m =
      coattention_from_factors({0.5, 0.5}, {1.0}, {2.0, 4.0});
  CHECK(m.a_co_raw[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.a_co_raw[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m.a_co_colnorm[0] == doctest::Approx(0.2689).epsilon(1e-3));
  CHECK(m.a_co_colnorm[1] == doctest::Approx(0.7311).epsilon(1e-3));
  CHECK(m.a_co_colnorm[0] + m.a_co_colnorm[1] ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      (void)coattention_from_factors({0.5, 0.5}, {1.0}, {2.0, 4.0, 8.0}),
      shape_error);
}

TEST_CASE("coattention matches the naive oracle on random instances") {
  Rng rng(2026);
  for (int trial = 0; trial < 100; ++trial) {
    size_t ks = static_cast<size_t>(rng.uniform_int(1, 4));
    size_t kt = static_cast<size_t>(rng.uniform_int(1, 4));
    size_t d = static_cast<size_t>(rng.uniform_int(1, 3));
    FeatureSequence src = random_seq(rng, ks, d, Domain::kSource);
    FeatureSequence tgt = random_seq(rng, kt, d, Domain::kTarget);
    CoAttentionMatrix got = coattention_matrix(src, tgt);
    CoAttentionMatrix want = naive_pair(src, tgt);
    REQUIRE(got.ks == want.ks);
    REQUIRE(got.kt == want.kt);
    for (size_t j = 0; j < ks; ++j)
      CHECK(got.a_ss[j] == doctest::Approx(want.a_ss[j]).epsilon(1e-10));
    for (size_t j = 0; j < kt; ++j)
      CHECK(got.a_tt[j] == doctest::Approx(want.a_tt[j]).epsilon(1e-10));
    for (size_t i = 0; i < ks * kt; ++i) {
      CHECK(got.a_st[i] == doctest::Approx(want.a_st[i]).epsilon(1e-10));
      CHECK(got.a_co_raw[i] ==
            doctest::Approx(want.a_co_raw[i]).epsilon(1e-10));
      CHECK(got.a_co_colnorm[i] ==
            doctest::Approx(want.a_co_colnorm[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("colnorm columns are stochastic and scale leaves argmax fixed") {
  Rng rng(11);
  FeatureSequence src = random_seq(rng, 4, 3, Domain::kSource);
  FeatureSequence tgt = random_seq(rng, 3, 3, Domain::kTarget);
  CoAttentionMatrix m = coattention_matrix(src, tgt);

  for (size_t j2 = 0; j2 < m.kt; ++j2) {
    double col = 0.0;
    for (size_t j = 0; j < m.ks; ++j) {
      double v = m.a_co_colnorm[j * m.kt + j2];
      CHECK(v >= 0.0);
      col += v;
    }
    CHECK(std::fabs(col - 1.0) <= 1e-9);
  }

  // Positive rescaling of the raw factors moves every colnorm value but
  // never the per-column argmax.
  std::vector<double> scaled = m.a_st;
  for (double& v : scaled) v *= 3.5;
  CoAttentionMatrix ms = coattention_from_factors(m.a_ss, m.a_tt, scaled);
  for (size_t j2 = 0; j2 < m.kt; ++j2) {
    size_t arg = 0, args = 0;
    for (size_t j = 1; j < m.ks; ++j) {
      if (m.a_co_colnorm[j * m.kt + j2] >
          m.a_co_colnorm[arg * m.kt + j2])
        arg = j;
      if (ms.a_co_colnorm[j * m.kt + j2] >
          ms.a_co_colnorm[args * m.kt + j2])
        args = j;
    }
    CHECK(arg == args);
  }
}

TEST_CASE("coattention is equivariant under segment permutation") {
  Rng rng(12);
  FeatureSequence src = random_seq(rng, 4, 3, Domain::kSource);
  FeatureSequence tgt = random_seq(rng, 3, 3, Domain::kTarget);
  CoAttentionMatrix base = coattention_matrix(src, tgt);

  // Permute source segments.
  const std::vector<size_t> perm = {2, 0, 3, 1};  // new row r = old row perm[r]
  FeatureSequence src_p = src;
  for (size_t r = 0; r < 4; ++r)
    for (size_t c = 0; c < 3; ++c)
      src_p.feats.at(r, c) = src.feats.at(perm[r], c);
  CoAttentionMatrix got = coattention_matrix(src_p, tgt);

  for (size_t r = 0; r < 4; ++r) {
    CHECK(got.a_ss[r] == doctest::Approx(base.a_ss[perm[r]]).epsilon(1e-12));
    for (size_t c = 0; c < 3; ++c) {
      CHECK(got.a_st[r * 3 + c] ==
            doctest::Approx(base.a_st[perm[r] * 3 + c]).epsilon(1e-12));
      CHECK(got.a_co_colnorm[r * 3 + c] ==
            doctest::Approx(base.a_co_colnorm[perm[r] * 3 + c])
                .epsilon(1e-12));
    }
  }
  // Target self-attention is untouched by a source permutation.
  for (size_t c = 0; c < 3; ++c)
    CHECK(got.a_tt[c] == doctest::Approx(base.a_tt[c]).epsilon(1e-15));
}

TEST_CASE("aligned features are convex combinations of source segments") {
  Rng rng(13);
  FeatureSequence src = random_seq(rng, 5, 4, Domain::kSource);
  FeatureSequence tgt = random_seq(rng, 3, 4, Domain::kTarget);
  CoAttentionMatrix m = coattention_matrix(src, tgt);
  AlignedSequence al = target_aligned_features(m, src);
  REQUIRE(al.kt == 3);
  REQUIRE(al.d == 4);

  for (size_t j2 = 0; j2 < al.kt; ++j2) {
    for (size_t i = 0; i < al.d; ++i) {
      // Explicit weighted sum with the colnorm column.
      double want = 0.0, lo = 1e300, hi = -1e300;
      for (size_t j = 0; j < m.ks; ++j) {
        want += m.a_co_colnorm[j * m.kt + j2] * src.feats.at(j, i);
        lo = std::min(lo, src.feats.at(j, i));
        hi = std::max(hi, src.feats.at(j, i));
      }
      double got = al.segments.at(j2, i);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
      CHECK(got >= lo - 1e-12);
      CHECK(got <= hi + 1e-12);
    }
  }
  // Concatenated view is the row-major segment buffer.
  CHECK(al.concatenated() == al.segments.data());

  FeatureSequence wrong = random_seq(rng, 4, 4, Domain::kSource);
  CHECK_THROWS_AS((void)target_aligned_features(m, wrong), shape_error);
}

TEST_CASE("ground-truth attention relu-renormalizes the pair average") {
  // Single pair whose source row sums are [4, 6] -> [0.4, 0.6].
  CoAttentionMatrix m;
  m.ks = 2;
  m.kt = 2;
  m.a_co_raw = {1.0, 3.0, 2.0, 4.0};
  AttentionVector gs = ground_truth_attention({&m}, Domain::kSource);
  CHECK(gs.kind == AttentionVector::Kind::kGroundTruthSource);
  CHECK(gs.weights[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(gs.weights[1] == doctest::Approx(0.6).epsilon(1e-12));

  // Column sums are [3, 7] -> [0.3, 0.7].
  AttentionVector gt = ground_truth_attention({&m}, Domain::kTarget);
  CHECK(gt.kind == AttentionVector::Kind::kGroundTruthTarget);
  CHECK(gt.weights[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(gt.weights[1] == doctest::Approx(0.7).epsilon(1e-12));

  // Negative mass is clipped before renormalizing: rows [-1, 2] -> [0, 1].
  CoAttentionMatrix neg = m;
  neg.a_co_raw = {-2.0, 1.0, 1.0, 1.0};
  AttentionVector gn = ground_truth_attention({&neg}, Domain::kSource);
  CHECK(gn.weights[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(gn.weights[1] == doctest::Approx(1.0).epsilon(1e-12));

  // Averaging across two pairs: mean row sums [5, 4] -> [5/9, 4/9].
  CoAttentionMatrix m2 = m;
  m2.a_co_raw = {3.0, 3.0, 1.0, 1.0};  // row sums [6, 2]
  AttentionVector g2 = ground_truth_attention({&m, &m2}, Domain::kSource);
  CHECK(g2.weights[0] == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
  CHECK(g2.weights[1] == doctest::Approx(4.0 / 9.0).epsilon(1e-12));

  // All-nonpositive mass falls back to uniform.
  CoAttentionMatrix z = m;
  z.a_co_raw = {-1.0, -2.0, 0.0, -0.5};
  AttentionVector gu = ground_truth_attention({&z}, Domain::kSource);
  CHECK(gu.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gu.weights[1] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS((void)ground_truth_attention({}, Domain::kSource),
                  no_pairs_error);

  CoAttentionMatrix kk = m;
  kk.ks = 3;
  kk.a_co_raw = {1, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS((void)ground_truth_attention({&m, &kk}, Domain::kSource),
                  shape_error);
}

TEST_CASE("concat and l2 normalization behave") {
  FeatureSequence s = make_seq(2, 3, {1, 2, 3, 4, 5, 6});
  std::vector<double> cat = concat_video_feature(s);
  REQUIRE(cat.size() == 6);
  for (size_t i = 0; i < 6; ++i)
    CHECK(cat[i] == doctest::Approx(static_cast<double>(i + 1)));

  FeatureSequence z = make_seq(2, 2, {3, 4, 0, 0});
  FeatureSequence n = l2_normalized(z);
  CHECK(n.feats.at(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(n.feats.at(0, 1) == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(n.feats.at(1, 0) == 0.0);  // zero row kept
  CHECK(n.feats.at(1, 1) == 0.0);
  CHECK(n.access_count == 0);
}

TEST_CASE("feature access counter increments through features()") {
  FeatureSequence s = make_seq(2, 2, {1, 0, 0, 1});
  CHECK(s.access_count == 0);
  (void)s.features();
  (void)s.features();
  CHECK(s.access_count == 2);
  (void)self_attention(s);
  CHECK(s.access_count == 3);
}

TEST_CASE("tape builders reproduce the plain computation") {
  Rng rng(14);
  FeatureSequence src = random_seq(rng, 4, 3, Domain::kSource);
  FeatureSequence tgt = random_seq(rng, 3, 3, Domain::kTarget);
  CoAttentionMatrix want = coattention_matrix(src, tgt);

  Tape t;
  Var fs = t.constant(src.feats);
  Var ft = t.constant(tgt.feats);
  CoattnVars co = build_coattention(t, fs, ft);
  REQUIRE(co.ks == 4);
  REQUIRE(co.kt == 3);

  const double* ass = t.values(co.a_ss);
  const double* att = t.values(co.a_tt);
  const double* araw = t.values(co.a_co_raw);
  const double* acol = t.values(co.a_co_colnorm);
  for (size_t j = 0; j < 4; ++j)
    CHECK(ass[j] == doctest::Approx(want.a_ss[j]).epsilon(1e-12));
  for (size_t j = 0; j < 3; ++j)
    CHECK(att[j] == doctest::Approx(want.a_tt[j]).epsilon(1e-12));
  for (size_t i = 0; i < 12; ++i) {
    CHECK(araw[i] == doctest::Approx(want.a_co_raw[i]).epsilon(1e-12));
    CHECK(acol[i] == doctest::Approx(want.a_co_colnorm[i]).epsilon(1e-12));
  }

  AlignedSequence al = target_aligned_features(want, src);
  Var rows = build_aligned_rows(t, co, fs);
  Shape rs = t.shape(rows);
  REQUIRE(rs.rows == 3);
  REQUIRE(rs.cols == 3);
  const double* rv = t.values(rows);
  for (size_t i = 0; i < 9; ++i)
    CHECK(rv[i] == doctest::Approx(al.segments[i]).epsilon(1e-12));

  Var cat = build_aligned_concat(t, co, fs);
  Shape cs = t.shape(cat);
  CHECK(cs.rows == 1);
  CHECK(cs.cols == 9);
  const double* cv = t.values(cat);
  for (size_t i = 0; i < 9; ++i)
    CHECK(cv[i] == doctest::Approx(al.segments[i]).epsilon(1e-15));

  // K=1 tape self-attention is the constant 1.
  Tensor one_row(1, 3);
  one_row[0] = 1.0;
  one_row[1] = -1.0;
  one_row[2] = 2.0;
  Tape t2;
  Var a1 = build_self_attention(t2, t2.constant(one_row));
  Shape s1 = t2.shape(a1);
  CHECK(s1.rows == 1);
  CHECK(s1.cols == 1);
  CHECK(t2.values(a1)[0] == 1.0);
}
