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

// Compares the serial reference kernels against the OpenMP variants: checks
// bit-identical outputs, then reports wall time per call at a few sizes.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "tcon/kernels.hpp"
#include "tcon/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
  const auto start = Clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto end = Clock::now();
  return std::chrono::duration<double, std::milli>(end - start).count() /
         reps;
}

std::vector<double> random_vec(size_t n, tcon::Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--threads" && i + 1 < argc) threads = std::atoi(argv[++i]);
  }
  namespace k = tcon::kernels;
  if (!k::openmp_available()) {
    std::printf("built without OpenMP: parallel variants unavailable, "
                "timing serial only\n");
  }
  if (threads > 0) k::set_threads_override(threads);
  std::printf("threads: %d\n", k::max_threads());

  tcon::Rng rng(99);
  const size_t sizes[] = {64, 256, 512};
  std::printf("%-14s %6s %12s %12s %8s %s\n", "kernel", "n", "serial_ms",
              "parallel_ms", "speedup", "bitwise");
  bool all_equal = true;
  for (size_t n : sizes) {
    const auto a = random_vec(n * n, rng);
    const auto b = random_vec(n * n, rng);
    std::vector<double> out_s(n * n), out_p(n * n);
    const int reps = n <= 256 ? 10 : 3;

    struct Entry {
      const char* name;
      std::function<void(const double*, const double*, double*)> serial;
      std::function<void(const double*, const double*, double*)> parallel;
    };
    const Entry entries[] = {
        {"gemm",
         [n](const double* x, const double* y, double* z) {
           k::serial::gemm(x, y, z, n, n, n, false);
         },
         [n](const double* x, const double* y, double* z) {
           k::par::gemm(x, y, z, n, n, n, false);
         }},
        {"gemm_nt",
         [n](const double* x, const double* y, double* z) {
           k::serial::gemm_nt(x, y, z, n, n, n, false);
         },
         [n](const double* x, const double* y, double* z) {
           k::par::gemm_nt(x, y, z, n, n, n, false);
         }},
        {"gemm_tn",
         [n](const double* x, const double* y, double* z) {
           k::serial::gemm_tn(x, y, z, n, n, n, false);
         },
         [n](const double* x, const double* y, double* z) {
           k::par::gemm_tn(x, y, z, n, n, n, false);
         }},
        {"softmax_rows",
         [n](const double* x, const double*, double* z) {
           k::serial::softmax_rows(x, z, n, n);
         },
         [n](const double* x, const double*, double* z) {
           k::par::softmax_rows(x, z, n, n);
         }},
        {"softmax_cols",
         [n](const double* x, const double*, double* z) {
           k::serial::softmax_cols(x, z, n, n);
         },
         [n](const double* x, const double*, double* z) {
           k::par::softmax_cols(x, z, n, n);
         }},
        {"cosine_matrix",
         [n](const double* x, const double* y, double* z) {
           k::serial::cosine_matrix(x, y, z, n, n, n);
         },
         [n](const double* x, const double* y, double* z) {
           k::par::cosine_matrix(x, y, z, n, n, n);
         }},
    };

    for (const auto& e : entries) {
      const double ms_s =
          time_ms([&] { e.serial(a.data(), b.data(), out_s.data()); }, reps);
      if (!k::openmp_available()) {
        std::printf("%-14s %6zu %12.3f %12s %8s %s\n", e.name, n, ms_s, "-",
                    "-", "-");
        continue;
      }
      const double ms_p =
          time_ms([&] { e.parallel(a.data(), b.data(), out_p.data()); }, reps);
      const bool eq = bits_equal(out_s, out_p);
      all_equal = all_equal && eq;
      std::printf("%-14s %6zu %12.3f %12.3f %8.2f %s\n", e.name, n, ms_s,
                  ms_p, ms_s / ms_p, eq ? "ok" : "MISMATCH");
    }
  }
  if (!all_equal) {
    std::printf("bitwise mismatch between serial and parallel kernels\n");
    return 1;
  }
  return 0;
}
