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

#include "tcon/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "tcon/errors.hpp"
#include "tcon/rng.hpp"

namespace tcon {

AttentionMode attention_mode_from_string(const std::string& s) {
  if (s == "predicted") return AttentionMode::kPredicted;
  if (s == "self") return AttentionMode::kSelf;
  if (s == "uniform") return AttentionMode::kUniform;
  throw config_error("unknown attention mode: " + s);
}

std::string attention_mode_name(AttentionMode m) {
  switch (m) {
    case AttentionMode::kPredicted: return "predicted";
    case AttentionMode::kSelf: return "self";
    case AttentionMode::kUniform: return "uniform";
  }
  throw config_error("unknown attention mode value");
}

void TrainConfig::validate() const {
  if (batch_size == 0) throw config_error("batch_size must be >= 1");
  if (lr_generator <= 0.0 || lr_discriminator <= 0.0)
    throw config_error("learning rates must be > 0");
  if (lr_decay_factor <= 0.0 || lr_decay_factor > 1.0)
    throw config_error("lr_decay_factor must lie in (0, 1]");
  opt_kind_from_string(optimizer);
  sign_mode_from_string(sign_mode);
  if (lambda_a < 0.0) throw config_error("lambda_a must be >= 0");
  if (lambda_d_max < 0.0) throw config_error("lambda_d_max must be >= 0");
  if (lambda_ramp_gamma <= 0.0)
    throw config_error("lambda_ramp_gamma must be > 0");
  if (warmup_threshold <= 0.0)
    throw config_error("warmup_threshold must be > 0");
  if (warmup_window == 0) throw config_error("warmup_window must be >= 1");
  if (num_classes < 2) throw config_error("num_classes must be >= 2");
  if (pseudo_threshold <= 1.0 / static_cast<double>(num_classes) ||
      pseudo_threshold > 1.0)
    throw config_error("pseudo_threshold must lie in (1/num_classes, 1]");
  if (pair_threshold < 0.0 || pair_threshold > 1.0)
    throw config_error("pair_threshold must lie in [0, 1]");
  if (pair_top_m == 0) throw config_error("pair_top_m must be >= 1");
  if (k_s == 0 || k_t == 0) throw config_error("k_s and k_t must be >= 1");
  if (widths.attention == 0 || widths.classifier == 0 ||
      widths.disc_segment == 0 || widths.disc_video == 0)
    throw config_error("hidden widths must be >= 1");
  if (self_attention_only && uniform_attention_classifier)
    throw config_error(
        "self_attention_only and uniform_attention_classifier are mutually "
        "exclusive");
  if ((self_attention_only || disable_aligned_features) && k_s != k_t)
    throw config_error(
        "variants feeding raw source sequences to the video discriminator "
        "require k_s == k_t");
}

namespace {

template <typename T>
void read_key(const nlohmann::ordered_json& j, const std::string& key, T* out) {
  if (!j.contains(key)) return;
  try {
    *out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config key '" + key + "': " + e.what());
  }
}

const char* const kConfigKeys[] = {
    "seed", "epochs", "batch_size", "optimizer", "lr_generator",
    "lr_discriminator", "lr_decay_every", "lr_decay_factor", "lambda_a",
    "lambda_d_max", "lambda_ramp_gamma",
    "warmup_threshold", "warmup_window", "pseudo_threshold", "pair_threshold",
    "pair_top_m", "num_classes", "k_s", "k_t", "sign_mode",
    "projector_enabled", "l2_normalize_features", "coattn_stop_gradient",
    "attn_loss_into_features", "attention_hidden", "classifier_hidden",
    "disc_segment_hidden", "disc_video_hidden", "disable_segment_disc",
    "disable_aligned_features", "self_attention_only",
    "uniform_attention_classifier"};

}  // namespace

TrainConfig TrainConfig::from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw config_error("train config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : kConfigKeys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) throw config_error("unknown train config key: " + it.key());
  }
  TrainConfig c;
  read_key(j, "seed", &c.seed);
  read_key(j, "epochs", &c.epochs);
  read_key(j, "batch_size", &c.batch_size);
  read_key(j, "optimizer", &c.optimizer);
  read_key(j, "lr_generator", &c.lr_generator);
  read_key(j, "lr_discriminator", &c.lr_discriminator);
  read_key(j, "lr_decay_every", &c.lr_decay_every);
  read_key(j, "lr_decay_factor", &c.lr_decay_factor);
  read_key(j, "lambda_a", &c.lambda_a);
  read_key(j, "lambda_d_max", &c.lambda_d_max);
  read_key(j, "lambda_ramp_gamma", &c.lambda_ramp_gamma);
  read_key(j, "warmup_threshold", &c.warmup_threshold);
  read_key(j, "warmup_window", &c.warmup_window);
  read_key(j, "pseudo_threshold", &c.pseudo_threshold);
  read_key(j, "pair_threshold", &c.pair_threshold);
  read_key(j, "pair_top_m", &c.pair_top_m);
  read_key(j, "num_classes", &c.num_classes);
  read_key(j, "k_s", &c.k_s);
  read_key(j, "k_t", &c.k_t);
  read_key(j, "sign_mode", &c.sign_mode);
  read_key(j, "projector_enabled", &c.projector_enabled);
  read_key(j, "l2_normalize_features", &c.l2_normalize_features);
  read_key(j, "coattn_stop_gradient", &c.coattn_stop_gradient);
  read_key(j, "attn_loss_into_features", &c.attn_loss_into_features);
  read_key(j, "attention_hidden", &c.widths.attention);
  read_key(j, "classifier_hidden", &c.widths.classifier);
  read_key(j, "disc_segment_hidden", &c.widths.disc_segment);
  read_key(j, "disc_video_hidden", &c.widths.disc_video);
  read_key(j, "disable_segment_disc", &c.disable_segment_disc);
  read_key(j, "disable_aligned_features", &c.disable_aligned_features);
  read_key(j, "self_attention_only", &c.self_attention_only);
  read_key(j, "uniform_attention_classifier", &c.uniform_attention_classifier);
  c.validate();
  return c;
}

nlohmann::ordered_json TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["epochs"] = epochs;
  j["batch_size"] = batch_size;
  j["optimizer"] = optimizer;
  j["lr_generator"] = lr_generator;
  j["lr_discriminator"] = lr_discriminator;
  j["lr_decay_every"] = lr_decay_every;
  j["lr_decay_factor"] = lr_decay_factor;
  j["lambda_a"] = lambda_a;
  j["lambda_d_max"] = lambda_d_max;
  j["lambda_ramp_gamma"] = lambda_ramp_gamma;
  j["warmup_threshold"] = warmup_threshold;
  j["warmup_window"] = warmup_window;
  j["pseudo_threshold"] = pseudo_threshold;
  j["pair_threshold"] = pair_threshold;
  j["pair_top_m"] = pair_top_m;
  j["num_classes"] = num_classes;
  j["k_s"] = k_s;
  j["k_t"] = k_t;
  j["sign_mode"] = sign_mode;
  j["projector_enabled"] = projector_enabled;
  j["l2_normalize_features"] = l2_normalize_features;
  j["coattn_stop_gradient"] = coattn_stop_gradient;
  j["attn_loss_into_features"] = attn_loss_into_features;
  j["attention_hidden"] = widths.attention;
  j["classifier_hidden"] = widths.classifier;
  j["disc_segment_hidden"] = widths.disc_segment;
  j["disc_video_hidden"] = widths.disc_video;
  j["disable_segment_disc"] = disable_segment_disc;
  j["disable_aligned_features"] = disable_aligned_features;
  j["self_attention_only"] = self_attention_only;
  j["uniform_attention_classifier"] = uniform_attention_classifier;
  return j;
}

AttentionMode TrainConfig::eval_attention_mode() const {
  if (uniform_attention_classifier) return AttentionMode::kUniform;
  if (self_attention_only) return AttentionMode::kSelf;
  return AttentionMode::kPredicted;
}

nlohmann::ordered_json MetricsRecord::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["steps"] = steps;
  j["c_y"] = c_y;
  j["c_a"] = c_a;
  j["c_dv"] = c_dv;
  j["c_ds"] = c_ds;
  j["generator_objective"] = generator_objective;
  j["discriminator_objective"] = discriminator_objective;
  j["source_accuracy"] = source_accuracy;
  j["target_accuracy"] = target_accuracy;
  j["pseudo_accept_rate"] = pseudo_accept_rate;
  j["disc_video_accuracy"] = disc_video_accuracy;
  j["disc_segment_accuracy"] = disc_segment_accuracy;
  j["lambda_d"] = lambda_d;
  j["pairs_per_step"] = pairs_per_step;
  j["warmup_open"] = warmup_open;
  return j;
}

MetricsRecord MetricsRecord::from_json(const nlohmann::ordered_json& j) {
  MetricsRecord r;
  read_key(j, "epoch", &r.epoch);
  read_key(j, "steps", &r.steps);
  read_key(j, "c_y", &r.c_y);
  read_key(j, "c_a", &r.c_a);
  read_key(j, "c_dv", &r.c_dv);
  read_key(j, "c_ds", &r.c_ds);
  read_key(j, "generator_objective", &r.generator_objective);
  read_key(j, "discriminator_objective", &r.discriminator_objective);
  read_key(j, "source_accuracy", &r.source_accuracy);
  read_key(j, "target_accuracy", &r.target_accuracy);
  read_key(j, "pseudo_accept_rate", &r.pseudo_accept_rate);
  read_key(j, "disc_video_accuracy", &r.disc_video_accuracy);
  read_key(j, "disc_segment_accuracy", &r.disc_segment_accuracy);
  read_key(j, "lambda_d", &r.lambda_d);
  read_key(j, "pairs_per_step", &r.pairs_per_step);
  read_key(j, "warmup_open", &r.warmup_open);
  return r;
}

double lambda_schedule(double p, double gamma) {
  if (p < 0.0 || p > 1.0)
    throw config_error("lambda_schedule: progress outside [0, 1]");
  if (gamma <= 0.0) throw config_error("lambda_schedule: gamma must be > 0");
  return 2.0 / (1.0 + std::exp(-gamma * p)) - 1.0;
}

EvalResult evaluate_dataset(const NetworkSet& nets, const Dataset& ds,
                            AttentionMode mode) {
  if (ds.empty()) throw config_error("evaluate: empty dataset");
  const size_t d = nets.d;
  size_t total_rows = 0;
  for (const auto& v : ds) {
    if (v.d() != d)
      throw dimension_error("evaluate: feature dim " + std::to_string(v.d()) +
                            " does not match networks (" + std::to_string(d) +
                            ")");
    total_rows += v.k();
  }
  Tensor x(total_rows, d);
  {
    size_t r = 0;
    for (const auto& v : ds) {
      const Tensor& f = v.features();
      for (size_t i = 0; i < v.k(); ++i)
        for (size_t c = 0; c < d; ++c) x.at(r + i, c) = f.at(i, c);
      r += v.k();
    }
  }
  const Tensor f = nets.projector_enabled ? nets.projector.forward_values(x)
                                          : x;
  const Tensor probs = nets.classifier.forward_values(f);
  Tensor scores(0, 0);
  if (mode == AttentionMode::kPredicted)
    scores = nets.attention.forward_values(f);

  EvalResult res;
  res.predictions.reserve(ds.size());
  size_t r0 = 0;
  for (const auto& v : ds) {
    const size_t k = v.k();
    std::vector<double> attn(k, 1.0 / static_cast<double>(k));
    if (mode == AttentionMode::kPredicted) {
      double total = 0.0;
      for (size_t i = 0; i < k; ++i) total += scores.at(r0 + i, 0);
      if (total <= 0.0)
        throw config_error("evaluate: attention scores sum to 0");
      for (size_t i = 0; i < k; ++i) attn[i] = scores.at(r0 + i, 0) / total;
    } else if (mode == AttentionMode::kSelf) {
      FeatureSequence block;
      block.feats = Tensor(k, d);
      for (size_t i = 0; i < k; ++i)
        for (size_t c = 0; c < d; ++c) block.feats.at(i, c) = f.at(r0 + i, c);
      attn = self_attention(block).weights;
    }
    std::vector<double> vp(nets.num_classes, 0.0);
    for (size_t i = 0; i < k; ++i)
      for (size_t c = 0; c < nets.num_classes; ++c)
        vp[c] += attn[i] * probs.at(r0 + i, c);
    const int pred = static_cast<int>(
        std::max_element(vp.begin(), vp.end()) - vp.begin());
    res.predictions.push_back(pred);
    if (v.label >= 0) {
      ++res.total;
      if (pred == v.label) ++res.correct;
    }
    r0 += k;
  }
  if (res.total == 0)
    throw config_error("evaluate: dataset carries no labels");
  res.accuracy = static_cast<double>(res.correct) /
                 static_cast<double>(res.total);
  return res;
}

Dataset prepare_dataset(const Dataset& ds, size_t k, bool l2_normalize) {
  Dataset out;
  out.reserve(ds.size());
  for (const auto& v : ds) {
    FeatureSequence s = v;
    if (s.k() != k) s.feats = partition_segments(s.feats, k).feats;
    if (l2_normalize) s = l2_normalized(s);
    s.access_count = 0;
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

TrainConfig validated(TrainConfig cfg) {
  cfg.validate();
  return cfg;
}

size_t dataset_dim(const Dataset& ds, const char* which) {
  if (ds.empty())
    throw config_error(std::string("train requires a non-empty ") + which +
                       " dataset");
  const size_t d = ds[0].d();
  for (const auto& v : ds)
    if (v.d() != d)
      throw dimension_error(std::string(which) +
                            " dataset has mixed feature dims");
  return d;
}

OptimizerConfig opt_config(const TrainConfig& cfg, double lr) {
  OptimizerConfig oc;
  oc.kind = opt_kind_from_string(cfg.optimizer);
  oc.lr = lr;
  return oc;
}

bool has_labels(const Dataset& ds) {
  for (const auto& v : ds)
    if (v.label >= 0) return true;
  return false;
}

}  // namespace

Trainer::Trainer(TrainConfig cfg, const Dataset& source, const Dataset& target)
    : cfg_(validated(std::move(cfg))),
      source_(prepare_dataset(source, cfg_.k_s, cfg_.l2_normalize_features)),
      target_(prepare_dataset(target, cfg_.k_t, cfg_.l2_normalize_features)),
      nets_(NetworkSet::make(dataset_dim(source_, "source"), cfg_.num_classes,
                             cfg_.k_s, cfg_.k_t, cfg_.projector_enabled,
                             cfg_.widths, cfg_.seed)),
      gen_opt_(opt_config(cfg_, cfg_.lr_generator)),
      disc_opt_(opt_config(cfg_, cfg_.lr_discriminator)) {
  if (dataset_dim(target_, "target") != nets_.d)
    throw dimension_error("source and target feature dims differ");
  for (const auto& v : source_) {
    if (v.label < 0)
      throw config_error("source dataset contains unlabeled videos");
    if (static_cast<size_t>(v.label) >= cfg_.num_classes)
      throw config_error("source label exceeds num_classes");
  }
  steps_per_epoch_ =
      std::min(source_.size(), target_.size()) / cfg_.batch_size;
  if (cfg_.epochs > 0 && steps_per_epoch_ == 0)
    throw config_error("batch_size exceeds the smaller dataset");
  total_steps_ = cfg_.epochs * steps_per_epoch_;
  gen_opt_.add_params(nets_.generator_params());
  disc_opt_.add_params(nets_.discriminator_params());
  // No attention regression to wait for: the gate is open from step one.
  if (cfg_.self_attention_only) warmup_open_ = true;
}

double Trainer::current_lambda_d() const {
  if (total_steps_ == 0 || cfg_.lambda_d_max == 0.0) return 0.0;
  const double p = std::min(
      1.0, static_cast<double>(global_step_) / static_cast<double>(total_steps_));
  return cfg_.lambda_d_max * lambda_schedule(p, cfg_.lambda_ramp_gamma);
}

StepOptions Trainer::step_options(double lambda_d) const {
  StepOptions o;
  o.lambda_a = cfg_.lambda_a;
  o.lambda_d = lambda_d;
  o.sign_mode = cfg_.parsed_sign_mode();
  o.use_predicted_attention = warmup_open_;
  o.pseudo_threshold = cfg_.pseudo_threshold;
  o.pair_threshold = cfg_.pair_threshold;
  o.pair_top_m = cfg_.pair_top_m;
  o.disable_segment_disc = cfg_.disable_segment_disc;
  o.disable_aligned_features = cfg_.disable_aligned_features;
  o.self_attention_only = cfg_.self_attention_only;
  o.uniform_attention_classifier = cfg_.uniform_attention_classifier;
  o.coattn_stop_gradient = cfg_.coattn_stop_gradient;
  o.attn_loss_into_features = cfg_.attn_loss_into_features;
  return o;
}

void Trainer::update_warmup(const LossBundle& b) {
  ca_window_.push_back(b.c_a);
  while (ca_window_.size() > cfg_.warmup_window) ca_window_.pop_front();
  if (!warmup_open_ && ca_window_.size() == cfg_.warmup_window) {
    const double mean =
        std::accumulate(ca_window_.begin(), ca_window_.end(), 0.0) /
        static_cast<double>(ca_window_.size());
    if (mean < cfg_.warmup_threshold) warmup_open_ = true;
  }
}

LossBundle Trainer::train_step(const std::vector<size_t>& src_idx,
                               const std::vector<size_t>& tgt_idx) {
  const double lambda_d = current_lambda_d();
  Tape t;
  StepInputs in;
  in.source.reserve(src_idx.size());
  in.target.reserve(tgt_idx.size());
  for (size_t i : src_idx) in.source.push_back(&source_.at(i));
  for (size_t j : tgt_idx) in.target.push_back(&target_.at(j));

  StepGraph g = build_step_graph(t, nets_, in, step_options(lambda_d));
  gen_opt_.zero_grad();
  disc_opt_.zero_grad();
  t.backward(g.total);
  gen_opt_.step();
  disc_opt_.step();
  ++global_step_;

  if (!cfg_.self_attention_only && !cfg_.uniform_attention_classifier &&
      !tgt_idx.empty())
    update_warmup(g.bundle);
  if (g.c_dv.valid() || g.c_ds.valid()) {
    acc_disc_video_ += g.disc_video_accuracy;
    acc_disc_segment_ += g.disc_segment_accuracy;
    ++disc_steps_;
  }
  return g.bundle;
}

EvalResult Trainer::evaluate(Domain which) const {
  return evaluate_dataset(nets_, which == Domain::kSource ? source_ : target_,
                          cfg_.eval_attention_mode());
}

CheckpointMeta Trainer::checkpoint_meta() const {
  CheckpointMeta m;
  m.d = nets_.d;
  m.num_classes = nets_.num_classes;
  m.ks = cfg_.k_s;
  m.kt = cfg_.k_t;
  m.projector_enabled = cfg_.projector_enabled;
  m.widths = cfg_.widths;
  m.attention_mode = attention_mode_name(cfg_.eval_attention_mode());
  m.l2_normalize_features = cfg_.l2_normalize_features;
  std::ostringstream hex;
  hex << std::hex << fnv1a(cfg_.to_json().dump());
  m.config_hash = hex.str();
  m.train_config = cfg_.to_json();
  return m;
}

std::vector<MetricsRecord> Trainer::run(const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::ofstream metrics;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    metrics.open(fs::path(out_dir) / "metrics.jsonl",
                 std::ios::out | std::ios::trunc);
    if (!metrics)
      throw config_error("cannot open metrics.jsonl under " + out_dir);
  }

  const bool target_labeled = has_labels(target_);
  std::vector<MetricsRecord> history;
  double best_acc = -1.0;

  auto emit = [&](MetricsRecord r) {
    history.push_back(r);
    if (metrics.is_open()) {
      metrics << r.to_json().dump() << "\n";
      metrics.flush();
    }
    if (!out_dir.empty()) {
      CheckpointMeta meta = checkpoint_meta();
      save_checkpoint((fs::path(out_dir) / "checkpoint.tcon").string(), nets_,
                      meta);
      if (r.target_accuracy > best_acc) {
        best_acc = r.target_accuracy;
        save_checkpoint((fs::path(out_dir) / "checkpoint_best.tcon").string(),
                        nets_, meta);
      }
    } else if (r.target_accuracy > best_acc) {
      best_acc = r.target_accuracy;
    }
  };

  MetricsRecord initial;
  initial.epoch = 0;
  initial.source_accuracy = evaluate(Domain::kSource).accuracy;
  initial.target_accuracy =
      target_labeled ? evaluate(Domain::kTarget).accuracy : 0.0;
  initial.lambda_d = current_lambda_d();
  initial.warmup_open = warmup_open_;
  emit(initial);

  for (size_t epoch = 1; epoch <= cfg_.epochs; ++epoch) {
    if (cfg_.lr_decay_every > 0) {
      const double scale =
          std::pow(cfg_.lr_decay_factor,
                   static_cast<double>((epoch - 1) / cfg_.lr_decay_every));
      gen_opt_.set_lr(cfg_.lr_generator * scale);
      disc_opt_.set_lr(cfg_.lr_discriminator * scale);
    }
    std::vector<size_t> idx_s(source_.size()), idx_t(target_.size());
    std::iota(idx_s.begin(), idx_s.end(), 0);
    std::iota(idx_t.begin(), idx_t.end(), 0);
    Rng rs(derive_seed(cfg_.seed, "shuffle/source/" + std::to_string(epoch)));
    Rng rt(derive_seed(cfg_.seed, "shuffle/target/" + std::to_string(epoch)));
    rs.shuffle(idx_s);
    rt.shuffle(idx_t);

    MetricsRecord r;
    r.epoch = epoch;
    r.steps = steps_per_epoch_;
    acc_disc_video_ = acc_disc_segment_ = 0.0;
    disc_steps_ = 0;
    double pseudo_sum = 0.0, pairs_sum = 0.0;
    for (size_t s = 0; s < steps_per_epoch_; ++s) {
      std::vector<size_t> bs(idx_s.begin() + s * cfg_.batch_size,
                             idx_s.begin() + (s + 1) * cfg_.batch_size);
      std::vector<size_t> bt(idx_t.begin() + s * cfg_.batch_size,
                             idx_t.begin() + (s + 1) * cfg_.batch_size);
      const LossBundle b = train_step(bs, bt);
      r.c_y += b.c_y;
      r.c_a += b.c_a;
      r.c_dv += b.c_dv;
      r.c_ds += b.c_ds;
      r.generator_objective += b.generator_objective;
      r.discriminator_objective += b.discriminator_objective;
      pseudo_sum += static_cast<double>(b.n_t_pseudo) /
                    static_cast<double>(cfg_.batch_size);
      pairs_sum += static_cast<double>(b.n_st);
    }
    const auto n = static_cast<double>(steps_per_epoch_);
    r.c_y /= n;
    r.c_a /= n;
    r.c_dv /= n;
    r.c_ds /= n;
    r.generator_objective /= n;
    r.discriminator_objective /= n;
    r.pseudo_accept_rate = pseudo_sum / n;
    r.pairs_per_step = pairs_sum / n;
    if (disc_steps_ > 0) {
      r.disc_video_accuracy =
          acc_disc_video_ / static_cast<double>(disc_steps_);
      r.disc_segment_accuracy =
          acc_disc_segment_ / static_cast<double>(disc_steps_);
    }
    r.lambda_d = current_lambda_d();
    r.warmup_open = warmup_open_;
    r.source_accuracy = evaluate(Domain::kSource).accuracy;
    r.target_accuracy =
        target_labeled ? evaluate(Domain::kTarget).accuracy : 0.0;
    emit(r);
  }
  return history;
}

}  // namespace tcon
