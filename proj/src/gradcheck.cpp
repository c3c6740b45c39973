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

#include "tcon/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tcon/errors.hpp"
#include "tcon/rng.hpp"
#include "tcon/tape.hpp"

namespace tcon {

StepInputs MicroFixture::inputs() const {
  StepInputs in;
  for (const auto& v : source) in.source.push_back(&v);
  for (const auto& v : target) in.target.push_back(&v);
  return in;
}

MicroFixture make_micro_fixture(uint64_t seed) {
  constexpr size_t kD = 4, kK = 3, kC = 3, kB = 2;
  NetworkSet::Widths widths;
  widths.attention = 8;
  widths.classifier = 8;
  widths.disc_segment = 8;
  widths.disc_video = 8;
  MicroFixture fx{NetworkSet{}, {}, {}, {}};

  // Positive-leaning features keep inner products clear of the relu kink in
  // the ground-truth attention path.
  Rng rf(derive_seed(seed, "micro/features"));
  auto video = [&](uint32_t id, Domain dom, int label) {
    FeatureSequence v;
    v.id = id;
    v.domain = dom;
    v.label = label;
    v.feats = Tensor(kK, kD);
    for (size_t r = 0; r < kK; ++r)
      for (size_t c = 0; c < kD; ++c)
        v.feats.at(r, c) = 0.4 + 0.3 * rf.uniform();
    return v;
  };
  for (size_t i = 0; i < kB; ++i)
    fx.source.push_back(video(static_cast<uint32_t>(i), Domain::kSource,
                              static_cast<int>(i % kC)));
  for (size_t j = 0; j < kB; ++j)
    fx.target.push_back(
        video(static_cast<uint32_t>(100 + j), Domain::kTarget, -1));

  // A projector draw whose relu silences a whole segment sends downstream
  // branches (ground-truth attention mass, normalization guards) onto their
  // discontinuous fallbacks, where finite differences are meaningless.
  // Re-draw until every projected segment keeps a safe norm.
  for (int attempt = 0;; ++attempt) {
    const std::string tag = "/" + std::to_string(attempt);
    fx.nets = NetworkSet::make(kD, kC, kK, kK, true, widths,
                               derive_seed(seed, "micro/nets" + tag));
    // The zero-initialized heads would leave first-layer gradients trivially
    // zero; re-draw them so every path carries signal.
    Rng rh(derive_seed(seed, "micro/heads" + tag));
    fx.nets.attention.init(rh, false);
    fx.nets.disc_segment.init(rh, false);
    fx.nets.disc_video.init(rh, false);

    double min_norm2 = 1e300;
    for (const Dataset* ds : {&fx.source, &fx.target})
      for (const FeatureSequence& v : *ds) {
        const Tensor p = fx.nets.projector.forward_values(v.feats);
        for (size_t r = 0; r < p.rows(); ++r) {
          double n2 = 0.0;
          for (size_t c = 0; c < p.cols(); ++c) n2 += p.at(r, c) * p.at(r, c);
          min_norm2 = std::min(min_norm2, n2);
        }
      }
    if (min_norm2 > 1e-3) break;
    if (attempt >= 64)
      throw config_error("make_micro_fixture: no live projector draw found");
  }

  for (size_t i = 0; i < kB; ++i)
    for (size_t j = 0; j < kB; ++j) {
      PairSet::Pair p;
      p.src = i;
      p.tgt = j;
      p.similarity = 1.0;
      p.fallback = false;
      fx.decisions.pairs.pairs.push_back(p);
    }
  fx.decisions.pseudo = {0, 1};
  return fx;
}

namespace {

struct TermCheck {
  std::string name;
  StepOptions opt;
  std::function<Var(const StepGraph&)> pick;
  std::vector<Parameter*> params;
};

double eval_term(MicroFixture& fx, const TermCheck& tc,
                 const StepDecisions& frozen) {
  Tape t;
  const StepInputs in = fx.inputs();
  const StepGraph g = build_step_graph(t, fx.nets, in, tc.opt, &frozen);
  const Var v = tc.pick(g);
  if (!v.valid())
    throw config_error("gradcheck: term " + tc.name + " was not built");
  return t.scalar_value(v);
}

GradCheckResult check_term(MicroFixture& fx, const TermCheck& tc,
                           const StepDecisions& frozen, double eps,
                           double tol) {
  GradCheckResult res;
  res.name = tc.name;

  for (Parameter* p : fx.nets.all_params()) p->zero_grad();
  {
    Tape t;
    const StepInputs in = fx.inputs();
    const StepGraph g = build_step_graph(t, fx.nets, in, tc.opt, &frozen);
    const Var v = tc.pick(g);
    if (!v.valid())
      throw config_error("gradcheck: term " + tc.name + " was not built");
    t.backward(v);
  }

  for (Parameter* p : tc.params) {
    for (size_t i = 0; i < p->value.size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + eps;
      const double f_plus = eval_term(fx, tc, frozen);
      p->value[i] = saved - eps;
      const double f_minus = eval_term(fx, tc, frozen);
      p->value[i] = saved;
      const double fd = (f_plus - f_minus) / (2.0 * eps);
      const double ad = p->grad[i];
      const double rel = std::fabs(ad - fd) /
                         std::max({std::fabs(ad), std::fabs(fd), 0.1});
      if (rel > res.max_rel_err) res.max_rel_err = rel;
      ++res.elements;
    }
  }
  res.passed = res.max_rel_err < tol;
  return res;
}

GradCheckReport run_suite(uint64_t fixture_seed, double eps, double tol) {
  MicroFixture fx = make_micro_fixture(fixture_seed);

  StepOptions base;
  base.lambda_a = 0.7;
  base.lambda_d = 0.6;
  base.sign_mode = SignMode::kPaper;
  base.use_predicted_attention = true;
  base.pseudo_threshold = 0.4;
  base.pair_threshold = 0.0;
  base.pair_top_m = 1;
  base.attn_loss_into_features = true;  // keeps every fd path live
  base.realization = StepOptions::Realization::kTwoPhase;

  // Freeze the regression targets once so perturbed rebuilds regress
  // against the same constants the AD pass saw.
  StepDecisions frozen = fx.decisions;
  {
    Tape t;
    const StepInputs in = fx.inputs();
    const StepGraph g = build_step_graph(t, fx.nets, in, base, &frozen);
    frozen.gt_t = g.decisions.gt_t;
  }

  const std::vector<Parameter*> all = fx.nets.all_params();

  StepOptions sym = base;
  sym.sign_mode = SignMode::kSymmetric;
  StepOptions routed = base;
  routed.attn_loss_into_features = false;

  std::vector<TermCheck> checks;
  checks.push_back({"attention_loss", base,
                    [](const StepGraph& g) { return g.c_a; }, all});
  checks.push_back({"classification_loss", base,
                    [](const StepGraph& g) { return g.c_y; }, all});
  checks.push_back({"video_domain_loss", base,
                    [](const StepGraph& g) { return g.c_dv; }, all});
  checks.push_back({"segment_domain_loss", base,
                    [](const StepGraph& g) { return g.c_ds; }, all});
  checks.push_back({"generator_objective", base,
                    [](const StepGraph& g) { return g.gen_loss; }, all});
  checks.push_back({"generator_objective_symmetric", sym,
                    [](const StepGraph& g) { return g.gen_loss; }, all});
  checks.push_back({"discriminator_objective", base,
                    [](const StepGraph& g) { return g.disc_loss; }, all});
  checks.push_back({"attention_loss_detached_routing", routed,
                    [](const StepGraph& g) { return g.c_a; },
                    fx.nets.attention.params()});

  GradCheckReport report;
  report.eps = eps;
  report.tol = tol;
  for (const auto& tc : checks)
    report.results.push_back(check_term(fx, tc, frozen, eps, tol));
  return report;
}

}  // namespace

GradCheckReport run_gradcheck(uint64_t seed, double eps, double tol) {
  // A relu preactivation within eps of zero invalidates the central
  // difference without indicating a wrong adjoint.  The two are separable:
  // when the suite passes at a smaller step the adjoint matches the true
  // derivative and the coarse failure was a straddled kink, so the draw is
  // re-rolled (bounded); a wrong adjoint fails at every step size and stops
  // the scan immediately.
  constexpr int kMaxDraws = 30;
  GradCheckReport report;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    const uint64_t fixture_seed =
        draw == 0 ? seed
                  : derive_seed(seed, "micro/redraw/" + std::to_string(draw));
    report = run_suite(fixture_seed, eps, tol);
    if (report.all_passed()) return report;
    bool kink = false;
    for (double shrink : {1e2, 1e4})
      if (run_suite(fixture_seed, eps / shrink, tol).all_passed()) {
        kink = true;
        break;
      }
    if (!kink) return report;
  }
  return report;
}

}  // namespace tcon
