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

#ifndef TCON_GRADCHECK_HPP
#define TCON_GRADCHECK_HPP

#include <string>
#include <vector>

#include "tcon/data.hpp"
#include "tcon/losses.hpp"
#include "tcon/networks.hpp"

namespace tcon {

/// Central-difference comparison for one loss term: relative error is
/// |ad - fd| / max(|ad|, |fd|, 0.1), reported as the max over every checked
/// parameter element.
struct GradCheckResult {
  std::string name;
  size_t elements = 0;
  double max_rel_err = 0.0;
  bool passed = false;
};

struct GradCheckReport {
  double eps = 0.0;
  double tol = 0.0;
  std::vector<GradCheckResult> results;

  bool all_passed() const {
    for (const auto& r : results)
      if (!r.passed) return false;
    return !results.empty();
  }
};

/// Micro instance for derivative checks: C=3, d=4, K_s=K_t=3, batch 2+2,
/// every network head randomized so no gradient path is trivially zero.
struct MicroFixture {
  NetworkSet nets;
  Dataset source;
  Dataset target;
  StepDecisions decisions;  // all 4 pairs admitted, both targets pseudo-labeled

  StepInputs inputs() const;
};

MicroFixture make_micro_fixture(uint64_t seed);

/// Runs the finite-difference suite over every loss term and both combined
/// objectives (plus the detached-attention routing case).
GradCheckReport run_gradcheck(uint64_t seed = 5, double eps = 1e-3,
                              double tol = 1e-4);

}  // namespace tcon

#endif  // TCON_GRADCHECK_HPP
