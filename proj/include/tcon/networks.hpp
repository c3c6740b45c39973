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

#ifndef TCON_NETWORKS_HPP
#define TCON_NETWORKS_HPP

#include <string>
#include <vector>

#include "tcon/rng.hpp"
#include "tcon/tape.hpp"
#include "tcon/tensor.hpp"

namespace tcon {

struct MlpSpec {
  enum class OutAct : uint8_t { kNone, kSoftmax, kSigmoid, kRelu };

  std::vector<size_t> widths;  // input, hidden..., output
  OutAct out_act = OutAct::kNone;

  void validate() const;
  size_t param_count() const;  // sum of w_i*w_{i+1} + w_{i+1}
};

std::string out_act_name(MlpSpec::OutAct a);
MlpSpec::OutAct out_act_from_string(const std::string& s);

/// Fully-connected network with relu hidden activations.  Parameters are
/// named "<role>.w<i>" / "<role>.b<i>".
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::string role, MlpSpec spec);

  /// Glorot-uniform weights, zero biases; zero_final zeroes the last layer's
  /// weights and bias so the net starts at its neutral output.
  void init(Rng& rng, bool zero_final);

  /// x is rows x widths.front(); returns rows x widths.back().
  Var forward(Tape& t, Var x);

  /// Tape-free forward for evaluation / detached decisions.
  Tensor forward_values(const Tensor& x) const;

  std::vector<Parameter*> params();
  const std::string& role() const { return role_; }
  const MlpSpec& spec() const { return spec_; }
  size_t num_layers() const { return spec_.widths.size() - 1; }

  Parameter& weight(size_t layer) { return weights_[layer]; }
  Parameter& bias(size_t layer) { return biases_[layer]; }

 private:
  std::string role_;
  MlpSpec spec_;
  std::vector<Parameter> weights_;  // layer i: widths[i] x widths[i+1]
  std::vector<Parameter> biases_;   // 1 x widths[i+1]
};

/// The five TCoN networks.  Widths follow the configured hidden sizes; the
/// projector keeps dimension d, G_a and the discriminators end in sigmoid
/// heads, G_y ends in a softmax over classes.
struct NetworkSet {
  size_t d = 0;
  size_t num_classes = 0;
  size_t ks = 0, kt = 0;
  bool projector_enabled = true;

  Mlp projector;     // d -> d (hidden d)
  Mlp attention;     // d -> hidden -> 1, sigmoid
  Mlp classifier;    // d -> hidden -> C, softmax
  Mlp disc_segment;  // d -> hidden -> 1, sigmoid
  Mlp disc_video;    // kt*d -> hidden -> 1, sigmoid

  struct Widths {
    size_t attention = 64;
    size_t classifier = 64;
    size_t disc_segment = 64;
    size_t disc_video = 128;
  };

  static NetworkSet make(size_t d, size_t num_classes, size_t ks, size_t kt,
                         bool projector_enabled, const Widths& widths,
                         uint64_t seed);

  std::vector<Parameter*> generator_params();      // projector + attention + classifier
  std::vector<Parameter*> discriminator_params();  // both discriminators
  std::vector<Parameter*> all_params();
};

}  // namespace tcon

#endif  // TCON_NETWORKS_HPP
