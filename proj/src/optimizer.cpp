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

#include "tcon/optimizer.hpp"

#include <cmath>

#include "tcon/errors.hpp"

namespace tcon {

OptKind opt_kind_from_string(const std::string& s) {
  if (s == "sgd") return OptKind::kSgd;
  if (s == "adam") return OptKind::kAdam;
  throw config_error("unknown optimizer kind: " + s);
}

void Optimizer::add_param(Parameter* p, double lr_mult) {
  Slot slot;
  slot.p = p;
  slot.lr_mult = lr_mult;
  if (cfg_.kind == OptKind::kAdam) {
    slot.m = Tensor(p->value.rows(), p->value.cols());
    slot.v = Tensor(p->value.rows(), p->value.cols());
  }
  slots_.push_back(std::move(slot));
}

void Optimizer::add_params(const std::vector<Parameter*>& ps, double lr_mult) {
  for (Parameter* p : ps) add_param(p, lr_mult);
}

void Optimizer::step() {
  ++t_;
  if (cfg_.kind == OptKind::kSgd) {
    for (Slot& s : slots_) {
      double lr = cfg_.lr * s.lr_mult;
      double* w = s.p->value.data();
      const double* g = s.p->grad.data();
      for (size_t i = 0, n = s.p->value.size(); i < n; ++i) w[i] -= lr * g[i];
    }
    return;
  }
  // Adam with bias correction.
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (Slot& s : slots_) {
    double lr = cfg_.lr * s.lr_mult;
    double* w = s.p->value.data();
    const double* g = s.p->grad.data();
    double* m = s.m.data();
    double* v = s.v.data();
    for (size_t i = 0, n = s.p->value.size(); i < n; ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      double mhat = m[i] / bc1;
      double vhat = v[i] / bc2;
      w[i] -= lr * mhat / (std::sqrt(vhat) + cfg_.eps);
    }
  }
}

void Optimizer::zero_grad() {
  for (Slot& s : slots_) s.p->zero_grad();
}

}  // namespace tcon
