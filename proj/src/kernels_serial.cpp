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

#include "tcon/kernels.hpp"

namespace tcon::kernels::serial {

void gemm(const double* a, const double* b, double* c, size_t m, size_t k,
          size_t n, bool accumulate) {
  for (size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    if (!accumulate) std::fill(crow, crow + n, 0.0);
    const double* arow = a + i * k;
    for (size_t p = 0; p < k; ++p) {
      double aip = arow[p];
      if (aip == 0.0) continue;
      const double* brow = b + p * n;
      for (size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

void gemm_nt(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate) {
  for (size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (size_t j = 0; j < n; ++j) {
      const double* brow = b + j * k;
      double acc = 0.0;
      for (size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
      crow[j] = accumulate ? crow[j] + acc : acc;
    }
  }
}

void gemm_tn(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate) {
  // a is k x m, b is k x n, c is m x n.
  for (size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    if (!accumulate) std::fill(crow, crow + n, 0.0);
    for (size_t p = 0; p < k; ++p) {
      double api = a[p * m + i];
      if (api == 0.0) continue;
      const double* brow = b + p * n;
      for (size_t j = 0; j < n; ++j) crow[j] += api * brow[j];
    }
  }
}

void softmax_rows(const double* x, double* y, size_t rows, size_t cols) {
  for (size_t r = 0; r < rows; ++r) {
    const double* xr = x + r * cols;
    double* yr = y + r * cols;
    double mx = xr[0];
    for (size_t c = 1; c < cols; ++c) mx = std::max(mx, xr[c]);
    double sum = 0.0;
    for (size_t c = 0; c < cols; ++c) {
      yr[c] = std::exp(xr[c] - mx);
      sum += yr[c];
    }
    double inv = 1.0 / sum;
    for (size_t c = 0; c < cols; ++c) yr[c] *= inv;
  }
}

void softmax_cols(const double* x, double* y, size_t rows, size_t cols) {
  for (size_t c = 0; c < cols; ++c) {
    double mx = x[c];
    for (size_t r = 1; r < rows; ++r) mx = std::max(mx, x[r * cols + c]);
    double sum = 0.0;
    for (size_t r = 0; r < rows; ++r) {
      double e = std::exp(x[r * cols + c] - mx);
      y[r * cols + c] = e;
      sum += e;
    }
    double inv = 1.0 / sum;
    for (size_t r = 0; r < rows; ++r) y[r * cols + c] *= inv;
  }
}

void cosine_matrix(const double* u, const double* v, double* s, size_t m,
                   size_t n, size_t d) {
  for (size_t i = 0; i < m; ++i) {
    const double* ui = u + i * d;
    double nu = 0.0;
    for (size_t p = 0; p < d; ++p) nu += ui[p] * ui[p];
    nu = std::sqrt(nu);
    for (size_t j = 0; j < n; ++j) {
      const double* vj = v + j * d;
      double nv = 0.0, dot = 0.0;
      for (size_t p = 0; p < d; ++p) {
        nv += vj[p] * vj[p];
        dot += ui[p] * vj[p];
      }
      nv = std::sqrt(nv);
      s[i * n + j] = (nu > 0.0 && nv > 0.0) ? dot / (nu * nv) : 0.0;
    }
  }
}

}  // namespace tcon::kernels::serial
