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

#ifndef TCON_KERNELS_HPP
#define TCON_KERNELS_HPP

#include <cstddef>

// Dense compute kernels.  Every kernel has a serial reference implementation
// and (when built with OpenMP) a parallel one that partitions work over
// independent output elements only, so the two produce bit-identical results.
// The public entry points dispatch at runtime: serial unless the TCON_THREADS
// environment variable requests more than one thread.

namespace tcon::kernels {

/// Threads the dispatcher may use.  Reads TCON_THREADS on first call:
/// absent, empty, or unparsable means 1 (serial).  Values are clamped to
/// [1, 256].  Without OpenMP support compiled in this is always 1.
int max_threads();

/// Test/bench override; pass 0 to restore the environment-derived value.
void set_threads_override(int n);

/// True when the binary was compiled with OpenMP.
bool openmp_available();

// ---------------------------------------------------------------------------
// Kernel signatures.  Raw pointers + explicit dims keep these reusable from
// both the tape and plain Tensor code.  All matrices are row-major.
// ---------------------------------------------------------------------------

// C[m x n] = A[m x k] . B[k x n]; accumulate adds into C instead of storing.
void gemm(const double* a, const double* b, double* c, size_t m, size_t k,
          size_t n, bool accumulate = false);

// C[m x n] = A[m x k] . B[n x k]^T
void gemm_nt(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate = false);

// C[m x n] = A[k x m]^T . B[k x n]
void gemm_tn(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate = false);

// Row-wise softmax with max subtraction: Y[r,:] = softmax(X[r,:]).
void softmax_rows(const double* x, double* y, size_t rows, size_t cols);

// Column-wise softmax: Y[:,c] = softmax(X[:,c]).
void softmax_cols(const double* x, double* y, size_t rows, size_t cols);

// S[i,j] = cos(U[i,:], V[j,:]) for U[m x d], V[n x d].  Zero vectors map to 0.
void cosine_matrix(const double* u, const double* v, double* s, size_t m,
                   size_t n, size_t d);

// Serial reference implementations (always available; used by parity tests
// and the benchmark).
namespace serial {
void gemm(const double* a, const double* b, double* c, size_t m, size_t k,
          size_t n, bool accumulate);
void gemm_nt(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate);
void gemm_tn(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate);
void softmax_rows(const double* x, double* y, size_t rows, size_t cols);
void softmax_cols(const double* x, double* y, size_t rows, size_t cols);
void cosine_matrix(const double* u, const double* v, double* s, size_t m,
                   size_t n, size_t d);
}  // namespace serial

// Parallel implementations.  Valid to call only when openmp_available(); they
// run with the thread count from max_threads().
namespace par {
void gemm(const double* a, const double* b, double* c, size_t m, size_t k,
          size_t n, bool accumulate);
void gemm_nt(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate);
void gemm_tn(const double* a, const double* b, double* c, size_t m, size_t k,
             size_t n, bool accumulate);
void softmax_rows(const double* x, double* y, size_t rows, size_t cols);
void softmax_cols(const double* x, double* y, size_t rows, size_t cols);
void cosine_matrix(const double* u, const double* v, double* s, size_t m,
                   size_t n, size_t d);
}  // namespace par

}  // namespace tcon::kernels

#endif  // TCON_KERNELS_HPP
