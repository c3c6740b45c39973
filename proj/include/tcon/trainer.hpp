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

#ifndef TCON_TRAINER_HPP
#define TCON_TRAINER_HPP

#include <deque>
#include <string>
#include <vector>

#include "json.hpp"
#include "tcon/checkpoint.hpp"
#include "tcon/data.hpp"
#include "tcon/losses.hpp"
#include "tcon/networks.hpp"
#include "tcon/optimizer.hpp"

namespace tcon {

/// How the classifier mixes per-segment probabilities at evaluation time.
enum class AttentionMode : uint8_t { kPredicted, kSelf, kUniform };

AttentionMode attention_mode_from_string(const std::string& s);
std::string attention_mode_name(AttentionMode m);

struct TrainConfig {
  uint64_t seed = 7;
  size_t epochs = 100;
  size_t batch_size = 16;  // per domain
  std::string optimizer = "adam";
  double lr_generator = 3e-4;
  double lr_discriminator = 3e-4;
  size_t lr_decay_every = 30;    // epochs between decays; 0 disables
  double lr_decay_factor = 0.1;  // multiplier applied at each decay
  double lambda_a = 1.0;
  double lambda_d_max = 1.0;
  double lambda_ramp_gamma = 10.0;
  double warmup_threshold = 0.005;
  size_t warmup_window = 20;
  double pseudo_threshold = 0.9;
  double pair_threshold = 0.5;
  size_t pair_top_m = 2;
  size_t num_classes = 4;
  size_t k_s = 8;
  size_t k_t = 8;
  std::string sign_mode = "paper";
  bool projector_enabled = true;
  bool l2_normalize_features = false;
  bool coattn_stop_gradient = false;
  bool attn_loss_into_features = false;
  NetworkSet::Widths widths;
  // Ablation switches (CLI variant names: sadnet, tadnet, coattn, attn).
  bool disable_segment_disc = false;
  bool disable_aligned_features = false;
  bool self_attention_only = false;
  bool uniform_attention_classifier = false;

  void validate() const;
  static TrainConfig from_json(const nlohmann::ordered_json& j);
  nlohmann::ordered_json to_json() const;

  SignMode parsed_sign_mode() const { return sign_mode_from_string(sign_mode); }
  /// Attention the classifier uses at evaluation time under this config.
  AttentionMode eval_attention_mode() const;
};

struct MetricsRecord {
  size_t epoch = 0;
  size_t steps = 0;
  double c_y = 0.0, c_a = 0.0, c_dv = 0.0, c_ds = 0.0;
  double generator_objective = 0.0;
  double discriminator_objective = 0.0;
  double source_accuracy = 0.0;
  double target_accuracy = 0.0;
  double pseudo_accept_rate = 0.0;
  double disc_video_accuracy = 0.5;  // 0.5 placeholder while disabled
  double disc_segment_accuracy = 0.5;
  double lambda_d = 0.0;
  double pairs_per_step = 0.0;
  bool warmup_open = false;

  nlohmann::ordered_json to_json() const;
  static MetricsRecord from_json(const nlohmann::ordered_json& j);
};

/// DANN ramp: 2/(1+exp(-gamma*p)) - 1.
double lambda_schedule(double p, double gamma = 10.0);

struct EvalResult {
  double accuracy = 0.0;
  size_t correct = 0;
  size_t total = 0;                // labeled videos only
  std::vector<int> predictions;    // per video, unlabeled included
};

/// Per-video argmax prediction (ties to the lowest class index) with the
/// given attention mode.  Sequences are used as-is: callers repartition /
/// normalize first.  Throws config_error when no video carries a label.
EvalResult evaluate_dataset(const NetworkSet& nets, const Dataset& ds,
                            AttentionMode mode);

/// Applies the trainer's input preprocessing: optional per-segment L2
/// normalization, then repartition to k segments when a sequence's native
/// count differs.
Dataset prepare_dataset(const Dataset& ds, size_t k, bool l2_normalize);

class Trainer {
 public:
  /// Datasets are copied and preprocessed (see prepare_dataset).  The
  /// target's labels are never read by training; they exist for evaluation.
  Trainer(TrainConfig cfg, const Dataset& source, const Dataset& target);

  /// Runs the configured number of epochs.  When out_dir is non-empty,
  /// appends one metrics line per record to out_dir/metrics.jsonl, rewrites
  /// out_dir/checkpoint.tcon every epoch, and maintains
  /// out_dir/checkpoint_best.tcon at the best target accuracy.  The first
  /// record (epoch 0) is the initial evaluation.
  std::vector<MetricsRecord> run(const std::string& out_dir = "");

  /// One optimizer step on the given batch indices; exposed for tests.
  LossBundle train_step(const std::vector<size_t>& src_idx,
                        const std::vector<size_t>& tgt_idx);

  EvalResult evaluate(Domain which) const;

  NetworkSet& nets() { return nets_; }
  const TrainConfig& config() const { return cfg_; }
  const Dataset& source() const { return source_; }
  const Dataset& target() const { return target_; }
  size_t global_step() const { return global_step_; }
  size_t total_steps() const { return total_steps_; }
  size_t steps_per_epoch() const { return steps_per_epoch_; }
  bool warmup_open() const { return warmup_open_; }
  double current_lambda_d() const;
  CheckpointMeta checkpoint_meta() const;

 private:
  StepOptions step_options(double lambda_d) const;
  void update_warmup(const LossBundle& b);

  TrainConfig cfg_;
  Dataset source_, target_;
  NetworkSet nets_;
  Optimizer gen_opt_, disc_opt_;
  size_t steps_per_epoch_ = 0;
  size_t total_steps_ = 0;
  size_t global_step_ = 0;
  bool warmup_open_ = false;
  std::deque<double> ca_window_;
  // Per-epoch accumulators.
  double acc_disc_video_ = 0.0, acc_disc_segment_ = 0.0;
  size_t disc_steps_ = 0;
};

}  // namespace tcon

#endif  // TCON_TRAINER_HPP
