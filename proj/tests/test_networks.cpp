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

#include <cmath>
#include <cstdio>
#include <string>

#include "doctest.h"
#include "tcon/checkpoint.hpp"
#include "tcon/errors.hpp"
#include "tcon/networks.hpp"
#include "tcon/rng.hpp"
#include "tcon/tape.hpp"

using namespace tcon;

TEST_CASE("mlp spec validation and parameter count") {
  MlpSpec s;
  s.widths = {4, 8, 3};
  s.validate();
  // 4*8 + 8 weights+biases, then 8*3 + 3.
  CHECK(s.param_count() == 4 * 8 + 8 + 8 * 3 + 3);

  MlpSpec one;
  one.widths = {5, 1};
  CHECK(one.param_count() == 5 + 1);

  MlpSpec bad;
  bad.widths = {4};
  CHECK_THROWS_AS(bad.validate(), config_error);
  bad.widths = {4, 0, 2};
  CHECK_THROWS_AS(bad.validate(), config_error);

  CHECK(out_act_name(MlpSpec::OutAct::kSoftmax) == "softmax");
  CHECK(out_act_from_string("sigmoid") == MlpSpec::OutAct::kSigmoid);
  CHECK_THROWS_AS((void)out_act_from_string("tanh"), config_error);
}

TEST_CASE("glorot init is deterministic in the seed and zero_final zeroes") {
  MlpSpec s;
  s.widths = {6, 10, 3};
  s.out_act = MlpSpec::OutAct::kSoftmax;

  Mlp a("a", s), b("b", s);
  Rng ra(42), rb(42);
  a.init(ra, false);
  b.init(rb, false);
  for (size_t l = 0; l < a.num_layers(); ++l) {
    const Tensor& wa = a.weight(l).value;
    const Tensor& wb = b.weight(l).value;
    REQUIRE(wa.size() == wb.size());
    for (size_t i = 0; i < wa.size(); ++i) CHECK(wa[i] == wb[i]);
    // Glorot-uniform bound for layer l.
    double bound = std::sqrt(6.0 / static_cast<double>(s.widths[l] + s.widths[l + 1]));
    for (size_t i = 0; i < wa.size(); ++i) {
      CHECK(wa[i] <= bound);
      CHECK(wa[i] >= -bound);
    }
    for (size_t i = 0; i < a.bias(l).value.size(); ++i)
      CHECK(a.bias(l).value[i] == 0.0);
  }

  Rng rc(43);
  Mlp c("c", s);
  c.init(rc, false);
  bool differs = false;
  for (size_t i = 0; i < a.weight(0).value.size() && !differs; ++i)
    differs = a.weight(0).value[i] != c.weight(0).value[i];
  CHECK(differs);

  Mlp z("z", s);
  Rng rz(42);
  z.init(rz, true);
  size_t last = z.num_layers() - 1;
  for (size_t i = 0; i < z.weight(last).value.size(); ++i)
    CHECK(z.weight(last).value[i] == 0.0);
  // Hidden layers still randomized.
  bool nonzero = false;
  for (size_t i = 0; i < z.weight(0).value.size() && !nonzero; ++i)
    nonzero = z.weight(0).value[i] != 0.0;
  CHECK(nonzero);
}

TEST_CASE("forward shapes, activations, and value/tape agreement") {
  MlpSpec s;
  s.widths = {3, 5, 4};
  s.out_act = MlpSpec::OutAct::kSoftmax;
  Mlp net("gy", s);
  Rng rng(7);
  net.init(rng, false);

  Tensor x(2, 3);
  for (size_t i = 0; i < 6; ++i) x[i] = 0.3 * static_cast<double>(i) - 0.7;

  Tensor vals = net.forward_values(x);
  REQUIRE(vals.rows() == 2);
  REQUIRE(vals.cols() == 4);
  for (size_t r = 0; r < 2; ++r) {
    double row = 0.0;
    for (size_t c = 0; c < 4; ++c) {
      CHECK(vals.at(r, c) >= 0.0);
      row += vals.at(r, c);
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }

  Tape t;
  Var out = t.constant(x);
  out = net.forward(t, out);
  const Tensor tape_vals = t.value_tensor(out);
  REQUIRE(tape_vals.rows() == 2);
  REQUIRE(tape_vals.cols() == 4);
  for (size_t i = 0; i < 8; ++i)
    CHECK(tape_vals[i] == doctest::Approx(vals[i]).epsilon(1e-15));

  // Softmax head is shift-invariant in its logits: adding a constant to the
  // last layer's bias moves the logits uniformly, leaving probabilities.
  for (size_t c = 0; c < 4; ++c) net.bias(1).value.at(0, c) += 3.25;
  Tensor shifted = net.forward_values(x);
  for (size_t i = 0; i < 8; ++i)
    CHECK(shifted[i] == doctest::Approx(vals[i]).epsilon(1e-12));

  // Sigmoid head stays in (0, 1).
  MlpSpec ds;
  ds.widths = {3, 4, 1};
  ds.out_act = MlpSpec::OutAct::kSigmoid;
  Mlp disc("d", ds);
  disc.init(rng, false);
  Tensor p = disc.forward_values(x);
  for (size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i] > 0.0);
    CHECK(p[i] < 1.0);
  }

  Tensor wrong(2, 4);
  CHECK_THROWS_AS((void)net.forward_values(wrong), shape_error);
}

TEST_CASE("network set wiring and parameter groups") {
  NetworkSet::Widths w;
  NetworkSet nets = NetworkSet::make(6, 3, 4, 5, true, w, 99);
  CHECK(nets.d == 6);
  CHECK(nets.num_classes == 3);
  CHECK(nets.projector.spec().widths.front() == 6);
  CHECK(nets.projector.spec().widths.back() == 6);
  CHECK(nets.attention.spec().widths.back() == 1);
  CHECK(nets.attention.spec().out_act == MlpSpec::OutAct::kSigmoid);
  CHECK(nets.classifier.spec().widths.back() == 3);
  CHECK(nets.classifier.spec().out_act == MlpSpec::OutAct::kSoftmax);
  CHECK(nets.disc_segment.spec().widths.front() == 6);
  // Video discriminator reads the concatenated K_t x d block.
  CHECK(nets.disc_video.spec().widths.front() == 5 * 6);

  auto gen = nets.generator_params();
  auto disc = nets.discriminator_params();
  auto all = nets.all_params();
  CHECK(gen.size() + disc.size() == all.size());
  for (Parameter* p : gen) {
    CHECK(p->name.rfind("disc", 0) != 0);
  }
  for (Parameter* p : disc) {
    CHECK(p->name.rfind("disc", 0) == 0);
  }

  // Same seed, same weights; different seed differs.
  NetworkSet again = NetworkSet::make(6, 3, 4, 5, true, w, 99);
  const Tensor& w0 = nets.classifier.weight(0).value;
  const Tensor& w1 = again.classifier.weight(0).value;
  for (size_t i = 0; i < w0.size(); ++i) CHECK(w0[i] == w1[i]);

  NetworkSet other = NetworkSet::make(6, 3, 4, 5, true, w, 100);
  bool differs = false;
  for (size_t i = 0; i < w0.size() && !differs; ++i)
    differs = w0[i] != other.classifier.weight(0).value[i];
  CHECK(differs);

  // Disabled projector leaves features untouched.
  NetworkSet flat = NetworkSet::make(6, 3, 4, 5, false, w, 99);
  CHECK(!flat.projector_enabled);
}

TEST_CASE("checkpoint round trip restores every parameter bit-exactly") {
  NetworkSet::Widths w;
  w.attention = 8;
  w.classifier = 8;
  w.disc_segment = 8;
  w.disc_video = 16;
  NetworkSet nets = NetworkSet::make(5, 4, 3, 3, true, w, 123);

  CheckpointMeta meta;
  meta.d = 5;
  meta.num_classes = 4;
  meta.ks = 3;
  meta.kt = 3;
  meta.projector_enabled = true;
  meta.widths = w;
  meta.attention_mode = "self";
  meta.config_hash = "deadbeef";
  meta.train_config = {{"seed", 1}};

  const std::string path = "/tmp/tcon_test_ckpt.tcon";
  save_checkpoint(path, nets, meta);
  LoadedCheckpoint back = load_checkpoint(path);

  CHECK(back.meta.d == 5);
  CHECK(back.meta.num_classes == 4);
  CHECK(back.meta.attention_mode == "self");
  CHECK(back.meta.config_hash == "deadbeef");
  CHECK(back.meta.widths.disc_video == 16);

  auto want = nets.all_params();
  auto got = back.nets.all_params();
  REQUIRE(want.size() == got.size());
  for (size_t p = 0; p < want.size(); ++p) {
    CHECK(want[p]->name == got[p]->name);
    REQUIRE(want[p]->value.size() == got[p]->value.size());
    for (size_t i = 0; i < want[p]->value.size(); ++i)
      CHECK(want[p]->value[i] == got[p]->value[i]);
  }

  // Corrupt magic -> format error.
  {
    FILE* f = std::fopen(path.c_str(), "r+b");
    REQUIRE(f != nullptr);
    std::fputc('X', f);
    std::fclose(f);
  }
  CHECK_THROWS_AS((void)load_checkpoint(path), format_error);
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());

  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
}
