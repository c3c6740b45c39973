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

#ifndef TCON_LOSSES_HPP
#define TCON_LOSSES_HPP

#include <optional>
#include <string>
#include <vector>

#include "tcon/coattention.hpp"
#include "tcon/networks.hpp"
#include "tcon/pairing.hpp"

namespace tcon {

/// Probabilities entering log() are clamped to [kProbEps, 1 - kProbEps].
constexpr double kProbEps = 1e-12;

/// Sign convention for the generator objective's segment-domain term.  The
/// source formula subtracts C_ds inside -lambda_d*(C_dv - C_ds), i.e. the
/// generator cooperates with the segment discriminator; `symmetric` treats
/// both discriminators adversarially.
enum class SignMode : uint8_t { kPaper, kSymmetric };

SignMode sign_mode_from_string(const std::string& s);
std::string sign_mode_name(SignMode m);

struct LossBundle {
  double c_y = 0.0;   // classification
  double c_a = 0.0;   // attention regression
  double c_dv = 0.0;  // video-level domain
  double c_ds = 0.0;  // segment-level domain
  double generator_objective = 0.0;
  double discriminator_objective = 0.0;
  size_t n_s = 0;         // source videos in batch
  size_t n_t_pseudo = 0;  // pseudo-labeled target videos in batch
  size_t n_st = 0;        // co-attention pairs in batch
  bool domain_loss_empty_warning = false;
};

// -- pure scalar ops ----------------------------------------------------------

double clamp_prob(double p);

/// Binary cross-entropy of probability p against label in {0, 1}.
double bce(double p, int label);

/// Mean squared error between two attention vectors of equal length.
double attention_loss(const AttentionVector& predicted,
                      const AttentionVector& ground_truth);

/// Average of attention_loss over videos.
double attention_loss_batch(const std::vector<AttentionVector>& predicted,
                            const std::vector<AttentionVector>& ground_truth);

/// Argmax class when max probability >= threshold (ties to the lowest class
/// index), nullopt otherwise.
std::optional<int> pseudo_label(const std::vector<double>& probs,
                                double threshold);

struct Objectives {
  double generator = 0.0;
  double discriminator = 0.0;
};

/// Generator/discriminator objective arithmetic on already-computed loss
/// values.
Objectives objectives(double c_y, double c_a, double c_dv, double c_ds,
                      double lambda_a, double lambda_d, SignMode mode);

/// One video's classification inputs: per-segment class probabilities and
/// the attention weights used to mix them.
struct VideoClassificationItem {
  Tensor probs;                   // K x C
  std::vector<double> attention;  // length K, sums to 1
  int label = 0;
};

/// Mean CE over source items plus mean CE over pseudo-labeled target items;
/// an empty list contributes 0.
double classification_loss(const std::vector<VideoClassificationItem>& source_items,
                           const std::vector<VideoClassificationItem>& pseudo_items);

/// Mean BCE of the video discriminator on target features (label 1) plus
/// mean BCE on aligned features (label 0).  Rows of each tensor are feature
/// vectors of length kt*d.  An empty side contributes 0 and sets the flag.
double video_domain_loss(const Mlp& disc_video, const Tensor& target_feats,
                         const Tensor& aligned_feats,
                         bool* empty_warning = nullptr);

/// Mean BCE of the segment discriminator on source segments (label 1) plus
/// aligned segments (label 0).
double segment_domain_loss(const Mlp& disc_segment, const Tensor& source_segs,
                           const Tensor& aligned_segs,
                           bool* empty_warning = nullptr);

// -- full step graph ------------------------------------------------------------

struct StepInputs {
  std::vector<const FeatureSequence*> source;
  std::vector<const FeatureSequence*> target;
};

struct StepOptions {
  double lambda_a = 1.0;
  double lambda_d = 0.0;
  SignMode sign_mode = SignMode::kPaper;
  bool use_predicted_attention = false;  // warm-up gate state
  double pseudo_threshold = 0.9;
  double pair_threshold = 0.5;
  size_t pair_top_m = 2;
  // Ablation switches.
  bool disable_segment_disc = false;
  bool disable_aligned_features = false;
  bool self_attention_only = false;
  bool uniform_attention_classifier = false;
  // Gradient routing.
  bool coattn_stop_gradient = false;
  bool attn_loss_into_features = false;
  // How the min-max is realized on the tape.
  enum class Realization : uint8_t { kGradReverse, kTwoPhase };
  Realization realization = Realization::kGradReverse;

  bool trains_attention_net() const {
    return !self_attention_only && !uniform_attention_classifier;
  }
  bool needs_pairs() const {
    if (self_attention_only) return false;
    if (uniform_attention_classifier)
      return lambda_d > 0.0 && !disable_aligned_features;
    return true;
  }
};

/// Discrete choices frozen before graph construction so the loss is a smooth
/// function of the parameters (finite differences stay valid).  gt_t holds
/// the attention-regression targets, which training derives from current
/// values but which must be pinned alongside the other decisions.
struct StepDecisions {
  PairSet pairs;
  std::vector<int> pseudo;    // per target batch index; -1 = rejected
  std::vector<Tensor> gt_t;   // 1 x kt rows; empty = derive from values
};

struct StepGraph {
  // kGradReverse: backward(total) yields both the generator and the
  // discriminator updates in one pass (discriminator inputs are wrapped in
  // grad_scale).  kTwoPhase: use gen_loss for generator parameters and
  // disc_loss for discriminator parameters instead; total is not built.
  Var total;
  Var gen_loss;
  Var disc_loss;
  // Unweighted loss terms (valid only when that pathway was built).
  Var c_y, c_a, c_dv, c_ds;
  LossBundle bundle;
  StepDecisions decisions;
  std::vector<int> source_pred;  // per source batch index
  double disc_video_accuracy = 0.5;
  double disc_segment_accuracy = 0.5;
};

/// Assembles the per-step loss graph.  When `frozen` is non-null its
/// decisions are used instead of being recomputed from current values.
StepGraph build_step_graph(Tape& t, NetworkSet& nets, const StepInputs& in,
                           const StepOptions& opt,
                           const StepDecisions* frozen = nullptr);

}  // namespace tcon

#endif  // TCON_LOSSES_HPP
