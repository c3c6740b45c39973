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

#ifndef TCON_OPTIMIZER_HPP
#define TCON_OPTIMIZER_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tcon/tensor.hpp"

namespace tcon {

enum class OptKind { kSgd, kAdam };

struct OptimizerConfig {
  OptKind kind = OptKind::kAdam;
  double lr = 3e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

OptKind opt_kind_from_string(const std::string& s);

/// Applies SGD or Adam updates to registered parameters from their
/// accumulated grad buffers.  Parameters join groups with a per-group
/// learning-rate multiplier (effective lr = lr * mult).
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}

  void add_param(Parameter* p, double lr_mult = 1.0);
  void add_params(const std::vector<Parameter*>& ps, double lr_mult = 1.0);

  /// One update from current grads; increments the step counter.
  void step();

  void zero_grad();

  size_t step_count() const { return t_; }
  const OptimizerConfig& config() const { return cfg_; }

  /// Base learning rate for subsequent steps (per-group multipliers still
  /// apply); used by trainers implementing lr schedules.
  void set_lr(double lr) { cfg_.lr = lr; }

 private:
  struct Slot {
    Parameter* p;
    double lr_mult;
    Tensor m;  // first moment (adam only)
    Tensor v;  // second moment (adam only)
  };

  OptimizerConfig cfg_;
  std::vector<Slot> slots_;
  size_t t_ = 0;
};

}  // namespace tcon

#endif  // TCON_OPTIMIZER_HPP
