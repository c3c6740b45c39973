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

#include "tcon/networks.hpp"

#include <cmath>

#include "tcon/errors.hpp"
#include "tcon/kernels.hpp"

namespace tcon {

void MlpSpec::validate() const {
  if (widths.size() < 2)
    throw config_error("MlpSpec needs at least input and output widths");
  for (size_t w : widths)
    if (w < 1) throw config_error("MlpSpec widths must be >= 1");
}

size_t MlpSpec::param_count() const {
  size_t n = 0;
  for (size_t i = 0; i + 1 < widths.size(); ++i)
    n += widths[i] * widths[i + 1] + widths[i + 1];
  return n;
}

std::string out_act_name(MlpSpec::OutAct a) {
  switch (a) {
    case MlpSpec::OutAct::kNone: return "none";
    case MlpSpec::OutAct::kSoftmax: return "softmax";
    case MlpSpec::OutAct::kSigmoid: return "sigmoid";
    case MlpSpec::OutAct::kRelu: return "relu";
  }
  return "none";
}

MlpSpec::OutAct out_act_from_string(const std::string& s) {
  if (s == "none") return MlpSpec::OutAct::kNone;
  if (s == "softmax") return MlpSpec::OutAct::kSoftmax;
  if (s == "sigmoid") return MlpSpec::OutAct::kSigmoid;
  if (s == "relu") return MlpSpec::OutAct::kRelu;
  throw config_error("unknown output activation: " + s);
}

Mlp::Mlp(std::string role, MlpSpec spec) : role_(std::move(role)), spec_(std::move(spec)) {
  spec_.validate();
  for (size_t i = 0; i + 1 < spec_.widths.size(); ++i) {
    weights_.emplace_back(role_ + ".w" + std::to_string(i), spec_.widths[i],
                          spec_.widths[i + 1]);
    biases_.emplace_back(role_ + ".b" + std::to_string(i), 1, spec_.widths[i + 1]);
  }
}

void Mlp::init(Rng& rng, bool zero_final) {
  for (size_t i = 0; i < weights_.size(); ++i) {
    bool final_layer = i + 1 == weights_.size();
    Parameter& w = weights_[i];
    if (final_layer && zero_final) {
      w.value.fill(0.0);
    } else {
      double bound = std::sqrt(6.0 / static_cast<double>(spec_.widths[i] +
                                                         spec_.widths[i + 1]));
      for (size_t j = 0; j < w.value.size(); ++j)
        w.value[j] = rng.uniform(-bound, bound);
    }
    biases_[i].value.fill(0.0);
  }
}

Var Mlp::forward(Tape& t, Var x) {
  Shape s = t.shape(x);
  if (s.cols != spec_.widths.front())
    throw shape_error("mlp " + role_ + " input width " + std::to_string(s.cols) +
                      " != " + std::to_string(spec_.widths.front()));
  Var h = x;
  for (size_t i = 0; i < weights_.size(); ++i) {
    h = t.add_row_vec(t.matmul(h, t.leaf(weights_[i])), t.leaf(biases_[i]));
    if (i + 1 < weights_.size()) h = t.relu(h);
  }
  switch (spec_.out_act) {
    case MlpSpec::OutAct::kNone: return h;
    case MlpSpec::OutAct::kSoftmax: return t.softmax_rows(h);
    case MlpSpec::OutAct::kSigmoid: return t.sigmoid(h);
    case MlpSpec::OutAct::kRelu: return t.relu(h);
  }
  return h;
}

Tensor Mlp::forward_values(const Tensor& x) const {
  if (x.cols() != spec_.widths.front())
    throw shape_error("mlp " + role_ + " input width " + std::to_string(x.cols()) +
                      " != " + std::to_string(spec_.widths.front()));
  Tensor h = x;
  for (size_t i = 0; i < weights_.size(); ++i) {
    Tensor next(h.rows(), spec_.widths[i + 1]);
    kernels::gemm(h.data(), weights_[i].value.data(), next.data(), h.rows(),
                  spec_.widths[i], spec_.widths[i + 1]);
    const double* b = biases_[i].value.data();
    for (size_t r = 0; r < next.rows(); ++r)
      for (size_t c = 0; c < next.cols(); ++c) next.at(r, c) += b[c];
    if (i + 1 < weights_.size())
      for (size_t j = 0; j < next.size(); ++j)
        if (next[j] < 0.0) next[j] = 0.0;
    h = std::move(next);
  }
  switch (spec_.out_act) {
    case MlpSpec::OutAct::kNone:
      break;
    case MlpSpec::OutAct::kSoftmax: {
      Tensor out(h.rows(), h.cols());
      kernels::softmax_rows(h.data(), out.data(), h.rows(), h.cols());
      h = std::move(out);
      break;
    }
    case MlpSpec::OutAct::kSigmoid:
      for (size_t j = 0; j < h.size(); ++j) {
        double z = h[j];
        h[j] = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                        : std::exp(z) / (1.0 + std::exp(z));
      }
      break;
    case MlpSpec::OutAct::kRelu:
      for (size_t j = 0; j < h.size(); ++j)
        if (h[j] < 0.0) h[j] = 0.0;
      break;
  }
  return h;
}

std::vector<Parameter*> Mlp::params() {
  std::vector<Parameter*> out;
  for (size_t i = 0; i < weights_.size(); ++i) {
    out.push_back(&weights_[i]);
    out.push_back(&biases_[i]);
  }
  return out;
}

NetworkSet NetworkSet::make(size_t d, size_t num_classes, size_t ks, size_t kt,
                            bool projector_enabled, const Widths& widths,
                            uint64_t seed) {
  NetworkSet nets;
  nets.d = d;
  nets.num_classes = num_classes;
  nets.ks = ks;
  nets.kt = kt;
  nets.projector_enabled = projector_enabled;

  nets.projector = Mlp("projector", {{d, d, d}, MlpSpec::OutAct::kNone});
  nets.attention = Mlp("attention", {{d, widths.attention, 1}, MlpSpec::OutAct::kSigmoid});
  nets.classifier =
      Mlp("classifier", {{d, widths.classifier, num_classes}, MlpSpec::OutAct::kSoftmax});
  nets.disc_segment =
      Mlp("disc_segment", {{d, widths.disc_segment, 1}, MlpSpec::OutAct::kSigmoid});
  nets.disc_video =
      Mlp("disc_video", {{kt * d, widths.disc_video, 1}, MlpSpec::OutAct::kSigmoid});

  // Independent init streams per network: adding or skipping one network's
  // initialization can never shift another's draws.
  Rng r_proj(derive_seed(seed, "init/projector"));
  Rng r_attn(derive_seed(seed, "init/attention"));
  Rng r_clf(derive_seed(seed, "init/classifier"));
  Rng r_ds(derive_seed(seed, "init/disc_segment"));
  Rng r_dv(derive_seed(seed, "init/disc_video"));
  nets.projector.init(r_proj, /*zero_final=*/false);
  nets.attention.init(r_attn, /*zero_final=*/true);
  nets.classifier.init(r_clf, /*zero_final=*/false);
  nets.disc_segment.init(r_ds, /*zero_final=*/true);
  nets.disc_video.init(r_dv, /*zero_final=*/true);
  return nets;
}

std::vector<Parameter*> NetworkSet::generator_params() {
  std::vector<Parameter*> out;
  if (projector_enabled)
    for (Parameter* p : projector.params()) out.push_back(p);
  for (Parameter* p : attention.params()) out.push_back(p);
  for (Parameter* p : classifier.params()) out.push_back(p);
  return out;
}

std::vector<Parameter*> NetworkSet::discriminator_params() {
  std::vector<Parameter*> out;
  for (Parameter* p : disc_video.params()) out.push_back(p);
  for (Parameter* p : disc_segment.params()) out.push_back(p);
  return out;
}

std::vector<Parameter*> NetworkSet::all_params() {
  std::vector<Parameter*> out = generator_params();
  for (Parameter* p : discriminator_params()) out.push_back(p);
  return out;
}

}  // namespace tcon
