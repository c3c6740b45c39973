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

#include "tcon/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace tcon::kernels {

namespace {

int env_threads() {
#ifdef TCON_HAVE_OPENMP
  const char* s = std::getenv("TCON_THREADS");
  if (s == nullptr || *s == '\0') return 1;
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0' || v < 1) return 1;
  if (v > 256) v = 256;
  return static_cast<int>(v);
#else
  return 1;
#endif
}

std::atomic<int> g_override{0};

// Below this many output elements the fork/join overhead dominates.
constexpr size_t kParallelCutoff = 4096;

bool use_parallel(size_t out_elems) {
  return max_threads() > 1 && out_elems >= kParallelCutoff;
}

}  // namespace

bool openmp_available() {
#ifdef TCON_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
  int ov = g_override.load(std::memory_order_relaxed);
  if (ov > 0) return openmp_available() ? ov : 1;
  static const int from_env = env_threads();
  return from_env;
}

void set_threads_override(int n) {
  if (n < 0) n = 0;
  if (n > 256) n = 256;
  g_override.store(n, std::memory_order_relaxed);
}

void gemm(const double* a, const double* b, double* c, size_t m, size_t k,
          size_t n, bool accumulate) {
  if (use_parallel(m * n))
    par::gemm(a, b, c, m, k, n, accumulate);
  else
    serial::gemm(a, b, c, m, k, n, accumulate);
}

void gemm_nt(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate) {
  if (use_parallel(m * n))
    par::gemm_nt(a, b, c, m, k, n, accumulate);
  else
    serial::gemm_nt(a, b, c, m, k, n, accumulate);
}

void gemm_tn(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate) {
  if (use_parallel(m * n))
    par::gemm_tn(a, b, c, m, k, n, accumulate);
  else
    serial::gemm_tn(a, b, c, m, k, n, accumulate);
}

void softmax_rows(const double* x, double* y, size_t rows, size_t cols) {
  if (use_parallel(rows * cols))
    par::softmax_rows(x, y, rows, cols);
  else
    serial::softmax_rows(x, y, rows, cols);
}

void softmax_cols(const double* x, double* y, size_t rows, size_t cols) {
  if (use_parallel(rows * cols))
    par::softmax_cols(x, y, rows, cols);
  else
    serial::softmax_cols(x, y, rows, cols);
}

void cosine_matrix(const double* u, const double* v, double* s, size_t m,
                   size_t n, size_t d) {
  if (use_parallel(m * n * d))
    par::cosine_matrix(u, v, s, m, n, d);
  else
    serial::cosine_matrix(u, v, s, m, n, d);
}

}  // namespace tcon::kernels
