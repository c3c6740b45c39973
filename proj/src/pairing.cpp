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

#include "tcon/pairing.hpp"

#include <algorithm>
#include <cmath>

#include "tcon/errors.hpp"

namespace tcon {

double soft_label_similarity(const std::vector<double>& p,
                             const std::vector<double>& q) {
  if (p.size() != q.size())
    throw shape_error("soft_label_similarity: length mismatch");
  double np = 0.0, nq = 0.0, dot = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    np += p[i] * p[i];
    nq += q[i] * q[i];
    dot += p[i] * q[i];
  }
  if (np == 0.0 || nq == 0.0)
    throw config_error("soft_label_similarity: zero probability vector");
  double cosine = dot / (std::sqrt(np) * std::sqrt(nq));
  return cosine < 0.0 ? 0.0 : cosine;
}

PairSet select_pairs(const std::vector<std::vector<double>>& soft_labels_src,
                     const std::vector<std::vector<double>>& soft_labels_tgt,
                     double threshold, size_t top_m, uint64_t batch_id) {
  size_t ns = soft_labels_src.size();
  size_t nt = soft_labels_tgt.size();
  if (ns == 0 || nt == 0) throw config_error("select_pairs: empty batch");
  if (top_m < 1) throw config_error("select_pairs: top_m must be >= 1");

  std::vector<double> sim(ns * nt);
  for (size_t i = 0; i < ns; ++i)
    for (size_t j = 0; j < nt; ++j)
      sim[i * nt + j] = soft_label_similarity(soft_labels_src[i], soft_labels_tgt[j]);

  PairSet out;
  out.batch_id = batch_id;
  out.m_source.assign(ns, 0);
  out.m_target.assign(nt, 0);

  std::vector<char> admitted(ns * nt, 0);
  for (size_t i = 0; i < ns; ++i)
    for (size_t j = 0; j < nt; ++j)
      if (sim[i * nt + j] >= threshold) admitted[i * nt + j] = 1;

  // Fallback: any target with no admitted source gets its top_m most similar
  // sources, ties by ascending source index.
  size_t m = std::min(top_m, ns);
  std::vector<size_t> order(ns);
  for (size_t j = 0; j < nt; ++j) {
    bool paired = false;
    for (size_t i = 0; i < ns && !paired; ++i) paired = admitted[i * nt + j] != 0;
    if (paired) continue;
    for (size_t i = 0; i < ns; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return sim[a * nt + j] > sim[b * nt + j];
    });
    for (size_t r = 0; r < m; ++r) admitted[order[r] * nt + j] = 2;
  }

  for (size_t i = 0; i < ns; ++i)
    for (size_t j = 0; j < nt; ++j)
      if (admitted[i * nt + j]) {
        out.pairs.push_back({i, j, sim[i * nt + j], admitted[i * nt + j] == 2});
        ++out.m_source[i];
        ++out.m_target[j];
      }
  return out;
}

}  // namespace tcon
