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

#include "tcon/losses.hpp"

#include <algorithm>
#include <cmath>

#include "tcon/errors.hpp"

namespace tcon {

SignMode sign_mode_from_string(const std::string& s) {
  if (s == "paper") return SignMode::kPaper;
  if (s == "symmetric") return SignMode::kSymmetric;
  throw config_error("unknown sign_mode: " + s);
}

std::string sign_mode_name(SignMode m) {
  return m == SignMode::kPaper ? "paper" : "symmetric";
}

double clamp_prob(double p) {
  return std::min(std::max(p, kProbEps), 1.0 - kProbEps);
}

double bce(double p, int label) {
  if (label != 0 && label != 1) throw config_error("bce label must be 0 or 1");
  p = clamp_prob(p);
  return label == 1 ? -std::log(p) : -std::log(1.0 - p);
}

double attention_loss(const AttentionVector& predicted,
                      const AttentionVector& ground_truth) {
  if (predicted.weights.size() != ground_truth.weights.size())
    throw dimension_error("attention_loss: length mismatch " +
                          std::to_string(predicted.weights.size()) + " vs " +
                          std::to_string(ground_truth.weights.size()));
  const size_t k = predicted.weights.size();
  if (k == 0) throw dimension_error("attention_loss: empty vectors");
  double acc = 0.0;
  for (size_t i = 0; i < k; ++i) {
    const double diff = predicted.weights[i] - ground_truth.weights[i];
    acc += diff * diff;
  }
  return acc / static_cast<double>(k);
}

double attention_loss_batch(const std::vector<AttentionVector>& predicted,
                            const std::vector<AttentionVector>& ground_truth) {
  if (predicted.size() != ground_truth.size())
    throw dimension_error("attention_loss_batch: count mismatch");
  if (predicted.empty()) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i)
    acc += attention_loss(predicted[i], ground_truth[i]);
  return acc / static_cast<double>(predicted.size());
}

std::optional<int> pseudo_label(const std::vector<double>& probs,
                                double threshold) {
  if (probs.empty()) throw config_error("pseudo_label: empty probabilities");
  const double lo = 1.0 / static_cast<double>(probs.size());
  if (threshold <= lo || threshold > 1.0)
    throw config_error("pseudo_label threshold must lie in (1/C, 1]");
  size_t best = 0;
  for (size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = i;
  if (probs[best] >= threshold) return static_cast<int>(best);
  return std::nullopt;
}

Objectives objectives(double c_y, double c_a, double c_dv, double c_ds,
                      double lambda_a, double lambda_d, SignMode mode) {
  if (lambda_a < 0.0 || lambda_d < 0.0)
    throw config_error("objectives: lambda weights must be non-negative");
  Objectives o;
  const double ds_signed = mode == SignMode::kPaper ? c_dv - c_ds : c_dv + c_ds;
  o.generator = c_y + lambda_a * c_a - lambda_d * ds_signed;
  o.discriminator = c_dv + c_ds;
  return o;
}

double classification_loss(
    const std::vector<VideoClassificationItem>& source_items,
    const std::vector<VideoClassificationItem>& pseudo_items) {
  auto term = [](const std::vector<VideoClassificationItem>& items) {
    if (items.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& it : items) {
      const size_t k = it.probs.rows();
      const size_t c = it.probs.cols();
      if (it.attention.size() != k)
        throw dimension_error("classification_loss: attention length " +
                              std::to_string(it.attention.size()) +
                              " does not match " + std::to_string(k) +
                              " segments");
      if (it.label < 0 || static_cast<size_t>(it.label) >= c)
        throw config_error("classification_loss: label out of range");
      double p = 0.0;
      for (size_t j = 0; j < k; ++j)
        p += it.attention[j] * it.probs.at(j, static_cast<size_t>(it.label));
      acc += -std::log(clamp_prob(p));
    }
    return acc / static_cast<double>(items.size());
  };
  return term(source_items) + term(pseudo_items);
}

namespace {

double mean_bce_rows(const Mlp& disc, const Tensor& feats, int label) {
  const Tensor out = disc.forward_values(feats);
  double acc = 0.0;
  for (size_t i = 0; i < out.rows(); ++i) acc += bce(out.at(i, 0), label);
  return acc / static_cast<double>(out.rows());
}

}  // namespace

double video_domain_loss(const Mlp& disc_video, const Tensor& target_feats,
                         const Tensor& aligned_feats, bool* empty_warning) {
  bool empty = false;
  double loss = 0.0;
  if (target_feats.rows() > 0)
    loss += mean_bce_rows(disc_video, target_feats, 1);
  else
    empty = true;
  if (aligned_feats.rows() > 0)
    loss += mean_bce_rows(disc_video, aligned_feats, 0);
  else
    empty = true;
  if (empty_warning) *empty_warning = empty;
  return loss;
}

double segment_domain_loss(const Mlp& disc_segment, const Tensor& source_segs,
                           const Tensor& aligned_segs, bool* empty_warning) {
  bool empty = false;
  double loss = 0.0;
  if (source_segs.rows() > 0)
    loss += mean_bce_rows(disc_segment, source_segs, 1);
  else
    empty = true;
  if (aligned_segs.rows() > 0)
    loss += mean_bce_rows(disc_segment, aligned_segs, 0);
  else
    empty = true;
  if (empty_warning) *empty_warning = empty;
  return loss;
}

// -- step graph -----------------------------------------------------------------

namespace {

Var one_minus(Tape& t, Var x) { return t.add_const(t.scale(x, -1.0), 1.0); }

// mean over all entries of -log(clamp(p))
Var mean_neg_log(Tape& t, Var p) {
  return t.scale(t.mean(t.log(t.clamp(p, kProbEps, 1.0 - kProbEps))), -1.0);
}

Var mean_of(Tape& t, std::vector<Var> scalars) {
  if (scalars.size() == 1) return scalars[0];
  return t.mean(t.concat_rows(scalars));
}

std::vector<double> video_soft_label(const Mlp& classifier, const Tensor& feats,
                                     size_t row0, size_t k, size_t num_classes) {
  Tensor block(k, feats.cols());
  for (size_t r = 0; r < k; ++r)
    for (size_t c = 0; c < feats.cols(); ++c)
      block.at(r, c) = feats.at(row0 + r, c);
  const Tensor probs = classifier.forward_values(block);
  std::vector<double> sl(num_classes, 0.0);
  for (size_t r = 0; r < k; ++r)
    for (size_t c = 0; c < num_classes; ++c) sl[c] += probs.at(r, c);
  for (auto& v : sl) v /= static_cast<double>(k);
  return sl;
}

// Fraction of rows of a discriminator output column classified as `label`
// with a 0.5 cut (p >= 0.5 reads as label 1).
void tally_disc(const Tensor& probs, int label, size_t* correct, size_t* total) {
  for (size_t i = 0; i < probs.rows(); ++i) {
    const bool as_one = probs.at(i, 0) >= 0.5;
    if (as_one == (label == 1)) ++*correct;
  }
  *total += probs.rows();
}

}  // namespace

StepGraph build_step_graph(Tape& t, NetworkSet& nets, const StepInputs& in,
                           const StepOptions& opt, const StepDecisions* frozen) {
  if (in.source.empty())
    throw config_error("build_step_graph: empty source batch");
  if (opt.use_predicted_attention && opt.uniform_attention_classifier)
    throw config_error(
        "build_step_graph: predicted attention conflicts with uniform "
        "attention classifier");

  const size_t bs = in.source.size();
  const size_t bt = in.target.size();
  const size_t d = nets.d;
  const size_t num_classes = nets.num_classes;
  const size_t ks = in.source[0]->k();
  const size_t kt = bt > 0 ? in.target[0]->k() : 0;
  for (const auto* v : in.source) {
    if (v->d() != d || v->k() != ks)
      throw dimension_error("build_step_graph: ragged source batch");
    if (v->label < 0)
      throw config_error("build_step_graph: unlabeled source video");
  }
  for (const auto* v : in.target)
    if (v->d() != d || v->k() != kt)
      throw dimension_error("build_step_graph: ragged target batch");

  const bool two_phase = opt.realization == StepOptions::Realization::kTwoPhase;
  const bool train_ga = opt.trains_attention_net() && bt > 0;
  const bool use_discs = opt.lambda_d > 0.0 && bt > 0;
  // Both discriminator variants that lose the aligned features also lose the
  // segment discriminator: its real/fake split is source vs target-aligned,
  // and no substitute input is defined without co-attention.
  const bool seg_disc_on = use_discs && !opt.disable_segment_disc &&
                           !opt.disable_aligned_features &&
                           !opt.self_attention_only;
  const bool aligned_needed =
      use_discs && !opt.disable_aligned_features && !opt.self_attention_only;
  const bool pairs_needed = opt.needs_pairs() && bt > 0;
  const bool pseudo_on = opt.use_predicted_attention && bt > 0;
  const bool target_side = bt > 0 && (train_ga || use_discs || pseudo_on);

  if ((opt.disable_aligned_features || opt.self_attention_only) && use_discs &&
      ks != kt)
    throw config_error(
        "build_step_graph: raw source sequences feed the video discriminator "
        "only when k_s == k_t");

  StepGraph g;
  g.bundle.n_s = bs;

  // Stacked inputs and shared projector pass.
  auto stack = [&](const std::vector<const FeatureSequence*>& vs, size_t k) {
    Tensor out(vs.size() * k, d);
    size_t r = 0;
    for (const auto* v : vs) {
      const Tensor& f = v->features();
      for (size_t i = 0; i < k; ++i)
        for (size_t c = 0; c < d; ++c) out.at(r + i, c) = f.at(i, c);
      r += k;
    }
    return out;
  };
  const Var xs = t.constant(stack(in.source, ks));
  const Var fs_all =
      nets.projector_enabled ? nets.projector.forward(t, xs) : xs;
  const Tensor fs_vals = t.value_tensor(fs_all);

  Var ft_all;
  Tensor ft_vals(0, 0);
  if (target_side) {
    const Var xt = t.constant(stack(in.target, kt));
    ft_all = nets.projector_enabled ? nets.projector.forward(t, xt) : xt;
    ft_vals = t.value_tensor(ft_all);
  }

  std::vector<Var> fs_v(bs), ft_v(bt);
  for (size_t i = 0; i < bs; ++i)
    fs_v[i] = t.slice_rows(fs_all, i * ks, (i + 1) * ks);
  if (target_side)
    for (size_t j = 0; j < bt; ++j)
      ft_v[j] = t.slice_rows(ft_all, j * kt, (j + 1) * kt);

  // Co-attention weight paths can be frozen; the value path never is.
  std::vector<Var> fs_co(bs), ft_co(bt);
  for (size_t i = 0; i < bs; ++i)
    fs_co[i] = opt.coattn_stop_gradient ? t.grad_scale(fs_v[i], 0.0) : fs_v[i];
  if (target_side)
    for (size_t j = 0; j < bt; ++j)
      ft_co[j] =
          opt.coattn_stop_gradient ? t.grad_scale(ft_v[j], 0.0) : ft_v[j];

  // -- frozen-or-fresh discrete decisions --
  if (frozen) {
    g.decisions = *frozen;
    if (g.decisions.pseudo.size() != bt)
      throw config_error("build_step_graph: frozen pseudo list size mismatch");
  } else {
    g.decisions.pseudo.assign(bt, -1);
    if (pairs_needed) {
      std::vector<std::vector<double>> sl_s(bs), sl_t(bt);
      for (size_t i = 0; i < bs; ++i)
        sl_s[i] = video_soft_label(nets.classifier, fs_vals, i * ks, ks,
                                   num_classes);
      for (size_t j = 0; j < bt; ++j)
        sl_t[j] = video_soft_label(nets.classifier, ft_vals, j * kt, kt,
                                   num_classes);
      g.decisions.pairs =
          select_pairs(sl_s, sl_t, opt.pair_threshold, opt.pair_top_m, 0);
    }
    if (pseudo_on) {
      for (size_t j = 0; j < bt; ++j) {
        Tensor block(kt, d);
        for (size_t r = 0; r < kt; ++r)
          for (size_t c = 0; c < d; ++c)
            block.at(r, c) = ft_vals.at(j * kt + r, c);
        std::vector<double> attn(kt, 1.0 / static_cast<double>(kt));
        if (opt.self_attention_only) {
          FeatureSequence tmp;
          tmp.feats = block;
          attn = self_attention(tmp).weights;
        } else {
          const Tensor scores = nets.attention.forward_values(block);
          double total_score = 0.0;
          for (size_t r = 0; r < kt; ++r) total_score += scores.at(r, 0);
          if (total_score <= 0.0)
            throw config_error("build_step_graph: attention scores sum to 0");
          for (size_t r = 0; r < kt; ++r)
            attn[r] = scores.at(r, 0) / total_score;
        }
        const Tensor probs = nets.classifier.forward_values(block);
        std::vector<double> video_probs(num_classes, 0.0);
        for (size_t r = 0; r < kt; ++r)
          for (size_t c = 0; c < num_classes; ++c)
            video_probs[c] += attn[r] * probs.at(r, c);
        const auto lbl = pseudo_label(video_probs, opt.pseudo_threshold);
        g.decisions.pseudo[j] = lbl ? *lbl : -1;
      }
    }
  }
  const PairSet& pairs = g.decisions.pairs;
  g.bundle.n_st = pairs.pairs.size();

  // -- per-video self-attention (memoized) --
  std::vector<Var> ss_s(bs), ss_t(bt);
  auto self_s = [&](size_t i) {
    if (!ss_s[i].valid())
      ss_s[i] = build_self_attention(
          t, opt.self_attention_only ? fs_v[i] : fs_co[i]);
    return ss_s[i];
  };
  auto self_t = [&](size_t j) {
    if (!ss_t[j].valid())
      ss_t[j] = build_self_attention(
          t, opt.self_attention_only ? ft_v[j] : ft_co[j]);
    return ss_t[j];
  };

  // -- co-attention per pair --
  std::vector<CoattnVars> pair_vars(pairs.pairs.size());
  std::vector<Var> aligned_rows(pairs.pairs.size());
  for (size_t p = 0; p < pairs.pairs.size(); ++p) {
    const auto& pr = pairs.pairs[p];
    pair_vars[p] =
        build_coattention(t, fs_co[pr.src], ft_co[pr.tgt], self_s(pr.src),
                          self_t(pr.tgt));
    if (aligned_needed)
      aligned_rows[p] = build_aligned_rows(t, pair_vars[p], fs_v[pr.src]);
  }

  // -- ground-truth attention --
  auto uniform_const = [&](size_t k) {
    Tensor u(1, k);
    u.fill(1.0 / static_cast<double>(k));
    return t.constant(u);
  };
  Var uni_s, uni_t;
  auto uniform_s = [&]() {
    if (!uni_s.valid()) uni_s = uniform_const(ks);
    return uni_s;
  };
  auto uniform_t = [&]() {
    if (!uni_t.valid()) uni_t = uniform_const(kt);
    return uni_t;
  };

  // Source side lives on the tape: the classifier's attention must carry
  // gradients back into the features.
  std::vector<Var> gt_s(bs);
  if (pairs_needed && !opt.uniform_attention_classifier) {
    std::vector<std::vector<size_t>> by_src(bs);
    for (size_t p = 0; p < pairs.pairs.size(); ++p)
      by_src[pairs.pairs[p].src].push_back(p);
    for (size_t i = 0; i < bs; ++i) {
      if (by_src[i].empty()) continue;
      std::vector<Var> sums;
      sums.reserve(by_src[i].size());
      for (size_t p : by_src[i])
        sums.push_back(t.transpose(t.row_sums(pair_vars[p].a_co_raw)));
      Var m = sums.size() == 1
                  ? sums[0]
                  : t.scale(t.col_sums(t.concat_rows(sums)),
                            1.0 / static_cast<double>(sums.size()));
      m = t.relu(m);
      const double* mv = t.values(m);
      double mass = 0.0;
      for (size_t c = 0; c < ks; ++c) mass += mv[c];
      gt_s[i] = mass <= kMassEps ? uniform_s() : t.normalize_sum(m);
    }
  }

  // Target side is a constant regression label.
  std::vector<Tensor> gt_t;
  if (train_ga) {
    if (frozen && !frozen->gt_t.empty()) {
      if (frozen->gt_t.size() != bt)
        throw config_error("build_step_graph: frozen gt_t size mismatch");
      gt_t = frozen->gt_t;
    } else {
      gt_t.assign(bt, Tensor(1, kt));
      std::vector<std::vector<size_t>> by_tgt(bt);
      for (size_t p = 0; p < pairs.pairs.size(); ++p)
        by_tgt[pairs.pairs[p].tgt].push_back(p);
      for (size_t j = 0; j < bt; ++j) {
        std::vector<double> acc(kt, 0.0);
        for (size_t p : by_tgt[j]) {
          const double* raw = t.values(pair_vars[p].a_co_raw);
          const size_t pks = pair_vars[p].ks;
          for (size_t r = 0; r < pks; ++r)
            for (size_t c = 0; c < kt; ++c) acc[c] += raw[r * kt + c];
        }
        if (!by_tgt[j].empty())
          for (auto& v : acc) v /= static_cast<double>(by_tgt[j].size());
        double mass = 0.0;
        for (auto& v : acc) {
          if (v < 0.0) v = 0.0;
          mass += v;
        }
        if (by_tgt[j].empty() || mass <= kMassEps) {
          for (auto& v : acc) v = 1.0 / static_cast<double>(kt);
        } else {
          for (auto& v : acc) v /= mass;
        }
        for (size_t c = 0; c < kt; ++c) gt_t[j].at(0, c) = acc[c];
      }
    }
    g.decisions.gt_t = gt_t;
  }

  // -- attention regression --
  std::vector<Var> pred_attn(bt);
  if (train_ga) {
    const Var ga_in =
        opt.attn_loss_into_features ? ft_all : t.grad_scale(ft_all, 0.0);
    const Var scores = nets.attention.forward(t, ga_in);
    std::vector<Var> mse;
    mse.reserve(bt);
    for (size_t j = 0; j < bt; ++j) {
      const Var sj = t.transpose(t.slice_rows(scores, j * kt, (j + 1) * kt));
      pred_attn[j] = t.normalize_sum(sj);
      const Var diff = t.sub(pred_attn[j], t.constant(gt_t[j]));
      mse.push_back(t.mean(t.mul(diff, diff)));
    }
    g.c_a = mean_of(t, mse);
    g.bundle.c_a = t.scalar_value(g.c_a);
  }

  // -- classification --
  const Var probs_s = nets.classifier.forward(t, fs_all);
  g.source_pred.assign(bs, -1);
  std::vector<Var> ce_s;
  ce_s.reserve(bs);
  for (size_t i = 0; i < bs; ++i) {
    Var attn;
    if (opt.uniform_attention_classifier) {
      attn = uniform_s();
    } else if (opt.self_attention_only) {
      attn = self_s(i);
    } else {
      attn = gt_s[i].valid() ? gt_s[i] : uniform_s();
    }
    const Var pv =
        t.matmul(attn, t.slice_rows(probs_s, i * ks, (i + 1) * ks));
    Tensor onehot(1, num_classes);
    const auto label = static_cast<size_t>(in.source[i]->label);
    if (label >= num_classes)
      throw config_error("build_step_graph: source label out of range");
    onehot.at(0, label) = 1.0;
    ce_s.push_back(
        t.scale(t.log(t.clamp(t.inner(pv, t.constant(onehot)), kProbEps,
                              1.0 - kProbEps)),
                -1.0));
    const double* pvv = t.values(pv);
    g.source_pred[i] =
        static_cast<int>(std::max_element(pvv, pvv + num_classes) - pvv);
  }
  Var c_y = mean_of(t, ce_s);

  std::vector<size_t> accepted;
  for (size_t j = 0; j < bt; ++j)
    if (g.decisions.pseudo[j] >= 0) accepted.push_back(j);
  g.bundle.n_t_pseudo = accepted.size();
  if (!accepted.empty()) {
    const Var probs_t = nets.classifier.forward(t, ft_all);
    std::vector<Var> ce_t;
    ce_t.reserve(accepted.size());
    for (size_t j : accepted) {
      Var attn;
      if (opt.self_attention_only)
        attn = self_t(j);
      else if (pred_attn[j].valid())
        attn = pred_attn[j];
      else
        attn = uniform_t();
      const Var pv =
          t.matmul(attn, t.slice_rows(probs_t, j * kt, (j + 1) * kt));
      Tensor onehot(1, num_classes);
      onehot.at(0, static_cast<size_t>(g.decisions.pseudo[j])) = 1.0;
      ce_t.push_back(
          t.scale(t.log(t.clamp(t.inner(pv, t.constant(onehot)), kProbEps,
                                1.0 - kProbEps)),
                  -1.0));
    }
    c_y = t.add(c_y, mean_of(t, ce_t));
  }
  g.c_y = c_y;
  g.bundle.c_y = t.scalar_value(c_y);

  // -- discriminators --
  const double g_dv = -opt.lambda_d;
  const double g_ds =
      opt.sign_mode == SignMode::kPaper ? opt.lambda_d : -opt.lambda_d;
  auto wrap = [&](Var x, double f) {
    return two_phase ? x : t.grad_scale(x, f);
  };

  if (use_discs) {
    std::vector<Var> zero_rows, one_rows;
    if (aligned_needed) {
      for (size_t p = 0; p < pairs.pairs.size(); ++p)
        zero_rows.push_back(t.reshape(aligned_rows[p], 1, kt * d));
    } else {
      for (size_t i = 0; i < bs; ++i)
        zero_rows.push_back(t.reshape(fs_v[i], 1, ks * d));
    }
    for (size_t j = 0; j < bt; ++j)
      one_rows.push_back(t.reshape(ft_v[j], 1, kt * d));
    if (zero_rows.empty())
      throw no_pairs_error("build_step_graph: no rows for video discriminator");
    const Var a0 =
        zero_rows.size() == 1 ? zero_rows[0] : t.concat_rows(zero_rows);
    const Var a1 = one_rows.size() == 1 ? one_rows[0] : t.concat_rows(one_rows);
    const Var p0 = nets.disc_video.forward(t, wrap(a0, g_dv));
    const Var p1 = nets.disc_video.forward(t, wrap(a1, g_dv));
    g.c_dv = t.add(mean_neg_log(t, p1), mean_neg_log(t, one_minus(t, p0)));
    g.bundle.c_dv = t.scalar_value(g.c_dv);
    size_t correct = 0, total = 0;
    tally_disc(t.value_tensor(p1), 1, &correct, &total);
    tally_disc(t.value_tensor(p0), 0, &correct, &total);
    g.disc_video_accuracy =
        static_cast<double>(correct) / static_cast<double>(total);
  }

  if (seg_disc_on) {
    if (aligned_rows.empty())
      throw no_pairs_error(
          "build_step_graph: no rows for segment discriminator");
    const Var seg0 = aligned_rows.size() == 1 ? aligned_rows[0]
                                              : t.concat_rows(aligned_rows);
    const Var p1 = nets.disc_segment.forward(t, wrap(fs_all, g_ds));
    const Var p0 = nets.disc_segment.forward(t, wrap(seg0, g_ds));
    g.c_ds = t.add(mean_neg_log(t, p1), mean_neg_log(t, one_minus(t, p0)));
    g.bundle.c_ds = t.scalar_value(g.c_ds);
    size_t correct = 0, total = 0;
    tally_disc(t.value_tensor(p1), 1, &correct, &total);
    tally_disc(t.value_tensor(p0), 0, &correct, &total);
    g.disc_segment_accuracy =
        static_cast<double>(correct) / static_cast<double>(total);
  }

  // -- assemble objectives --
  Var weighted = c_y;
  if (g.c_a.valid() && opt.lambda_a != 0.0)
    weighted = t.add(weighted, t.scale(g.c_a, opt.lambda_a));
  if (two_phase) {
    Var gen = weighted;
    if (g.c_dv.valid()) gen = t.sub(gen, t.scale(g.c_dv, opt.lambda_d));
    if (g.c_ds.valid()) {
      const Var w = t.scale(g.c_ds, opt.lambda_d);
      gen = opt.sign_mode == SignMode::kPaper ? t.add(gen, w) : t.sub(gen, w);
    }
    g.gen_loss = gen;
    if (g.c_dv.valid() && g.c_ds.valid())
      g.disc_loss = t.add(g.c_dv, g.c_ds);
    else if (g.c_dv.valid())
      g.disc_loss = g.c_dv;
    else if (g.c_ds.valid())
      g.disc_loss = g.c_ds;
  } else {
    Var total = weighted;
    if (g.c_dv.valid()) total = t.add(total, g.c_dv);
    if (g.c_ds.valid()) total = t.add(total, g.c_ds);
    g.total = total;
  }

  const Objectives obj =
      objectives(g.bundle.c_y, g.bundle.c_a, g.bundle.c_dv, g.bundle.c_ds,
                 opt.lambda_a, opt.lambda_d, opt.sign_mode);
  g.bundle.generator_objective = obj.generator;
  g.bundle.discriminator_objective = obj.discriminator;
  return g;
}

}  // namespace tcon
