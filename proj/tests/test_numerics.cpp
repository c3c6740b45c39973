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
#include <cstdlib>
#include <functional>
#include <vector>

#include "doctest.h"
#include "tcon/kernels.hpp"
#include "tcon/optimizer.hpp"
#include "tcon/rng.hpp"
#include "tcon/tape.hpp"
#include "tcon/tensor.hpp"

using namespace tcon;

namespace {

// Builds the graph with `build`, backpropagates, and finite-differences it.
void grad_test(Parameter& p, const std::function<Var(Tape&, Var)>& build,
               double eps = 1e-5, double tol = 5e-6) {
  p.zero_grad();
  {
    Tape t;
    Var loss = build(t, t.leaf(p));
    t.backward(loss);
  }
  auto value = [&](Tape& t, Var x) { return t.scalar_value(build(t, x)); };
  for (size_t i = 0; i < p.value.size(); ++i) {
    double keep = p.value[i];
    p.value[i] = keep + eps;
    Tape t1;
    double up = value(t1, t1.leaf(p));
    p.value[i] = keep - eps;
    Tape t2;
    double dn = value(t2, t2.leaf(p));
    p.value[i] = keep;
    double fd = (up - dn) / (2.0 * eps);
    double ad = p.grad[i];
    double denom = std::max({std::fabs(fd), std::fabs(ad), 1.0});
    CHECK_MESSAGE(std::fabs(fd - ad) / denom < tol,
                  "coord ", i, ": ad=", ad, " fd=", fd);
  }
}

Parameter make_param(const char* name, size_t rows, size_t cols, uint64_t seed,
                     double lo = -1.0, double hi = 1.0) {
  Parameter p(name, rows, cols);
  Rng rng(seed);
  for (size_t i = 0; i < p.value.size(); ++i) p.value[i] = rng.uniform(lo, hi);
  return p;
}

}  // namespace

TEST_CASE("tape forward values match hand computation") {
  Tape t;
  Tensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor b({3, 2}, {7, 8, 9, 10, 11, 12});
  Var va = t.constant(a);
  Var vb = t.constant(b);

  Var mm = t.matmul(va, vb);
  CHECK(t.shape(mm) == Shape{2, 2});
  CHECK(t.values(mm)[0] == doctest::Approx(58).epsilon(1e-15));
  CHECK(t.values(mm)[1] == doctest::Approx(64).epsilon(1e-15));
  CHECK(t.values(mm)[2] == doctest::Approx(139).epsilon(1e-15));
  CHECK(t.values(mm)[3] == doctest::Approx(154).epsilon(1e-15));

  Var tr = t.transpose(va);
  CHECK(t.shape(tr) == Shape{3, 2});
  CHECK(t.values(tr)[1] == 4.0);
  CHECK(t.values(tr)[2] == 2.0);

  Var rs = t.row_sums(va);
  CHECK(t.shape(rs) == Shape{2, 1});
  CHECK(t.values(rs)[0] == 6.0);
  CHECK(t.values(rs)[1] == 15.0);

  Var cs = t.col_sums(va);
  CHECK(t.shape(cs) == Shape{1, 3});
  CHECK(t.values(cs)[0] == 5.0);
  CHECK(t.values(cs)[2] == 9.0);

  CHECK(t.scalar_value(t.sum(va)) == 21.0);
  CHECK(t.scalar_value(t.mean(va)) == doctest::Approx(3.5).epsilon(1e-15));

  Var sl = t.slice_rows(va, 1, 2);
  CHECK(t.shape(sl) == Shape{1, 3});
  CHECK(t.values(sl)[0] == 4.0);

  Var rshp = t.reshape(va, 3, 2);
  CHECK(t.shape(rshp) == Shape{3, 2});
  CHECK(t.values(rshp)[5] == 6.0);

  Var cc = t.concat_rows({va, va});
  CHECK(t.shape(cc) == Shape{4, 3});
  Var c2 = t.concat_cols({va, va});
  CHECK(t.shape(c2) == Shape{2, 6});
  CHECK(t.values(c2)[3] == 1.0);

  Var nn = t.normalize_sum(t.constant(Tensor::row({1, 3})));
  CHECK(t.values(nn)[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(t.values(nn)[1] == doctest::Approx(0.75).epsilon(1e-15));

  Tensor sq({2, 2}, {1, 2, 3, 4});
  Var dg = t.diag_part(t.constant(sq));
  CHECK(t.shape(dg) == Shape{1, 2});
  CHECK(t.values(dg)[0] == 1.0);
  CHECK(t.values(dg)[1] == 4.0);

  Var ip = t.inner(va, va);
  CHECK(t.scalar_value(ip) == doctest::Approx(91).epsilon(1e-15));

  Var cl = t.clamp(t.constant(Tensor::row({-2, 0.5, 9})), 0.0, 1.0);
  CHECK(t.values(cl)[0] == 0.0);
  CHECK(t.values(cl)[1] == 0.5);
  CHECK(t.values(cl)[2] == 1.0);

  Var rv = t.add_row_vec(va, t.constant(Tensor::row({10, 20, 30})));
  CHECK(t.values(rv)[0] == 11.0);
  CHECK(t.values(rv)[5] == 36.0);
}

TEST_CASE("softmax rows oracle") {
  // softmax([1,2,3]) from an independent computation.
  Tape t;
  Var x = t.constant(Tensor::row({1, 2, 3}));
  Var s = t.softmax_rows(x);
  const double* v = t.values(s);
  CHECK(v[0] == doctest::Approx(0.09003057317038046).epsilon(1e-12));
  CHECK(v[1] == doctest::Approx(0.24472847105479764).epsilon(1e-12));
  CHECK(v[2] == doctest::Approx(0.66524095577482183).epsilon(1e-12));
  double sum = v[0] + v[1] + v[2];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // Shift invariance: softmax(x + c) == softmax(x) exactly (max subtraction).
  Var x2 = t.add_const(x, 100.0);
  Var s2 = t.softmax_rows(x2);
  for (int i = 0; i < 3; ++i)
    CHECK(t.values(s2)[i] == doctest::Approx(v[i]).epsilon(1e-14));
}

TEST_CASE("softmax cols matches transposed softmax rows") {
  Tensor x({3, 2}, {0.5, -1.0, 2.0, 0.25, -0.75, 1.5});
  Tape t;
  Var a = t.softmax_cols(t.constant(x));
  Var b = t.transpose(t.softmax_rows(t.transpose(t.constant(x))));
  for (size_t i = 0; i < 6; ++i)
    CHECK(t.values(a)[i] == doctest::Approx(t.values(b)[i]).epsilon(1e-14));
  // Column stochasticity.
  Var ones = t.constant(Tensor({1, 3}, {1, 1, 1}));
  Var colsum = t.matmul(ones, a);
  CHECK(t.values(colsum)[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.values(colsum)[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("per-op gradients match finite differences") {
  Parameter p = make_param("x", 2, 3, 11);

  grad_test(p, [](Tape& t, Var x) { return t.sum(x); });
  grad_test(p, [](Tape& t, Var x) { return t.mean(x); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.mul(x, x)); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.scale(x, -2.5)); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.add_const(x, 3.0)); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.transpose(x)); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.mul(t.transpose(x), t.transpose(x))); });
  grad_test(p, [](Tape& t, Var x) {
    Tensor w({3, 2}, {0.3, -0.4, 0.1, 0.9, -0.2, 0.5});
    return t.sum(t.mul(t.matmul(x, t.constant(w)), t.matmul(x, t.constant(w))));
  });
  grad_test(p, [](Tape& t, Var x) {
    Tensor w({2, 3}, {0.3, -0.4, 0.1, 0.9, -0.2, 0.5});
    return t.inner(t.matmul(t.constant(w), t.transpose(x)), t.matmul(t.constant(w), t.transpose(x)));
  });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.mul(t.softmax_rows(x), t.softmax_rows(x))); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.mul(t.softmax_cols(x), t.softmax_cols(x))); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.sigmoid(x)); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.log(t.add_const(t.mul(x, x), 0.5))); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.row_sums(t.mul(x, x))); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.col_sums(t.mul(x, x))); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.mul(t.reshape(x, 3, 2), t.reshape(x, 3, 2))); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.slice_rows(t.mul(x, x), 1, 2)); });
  grad_test(p, [](Tape& t, Var x) {
    return t.sum(t.mul(t.concat_rows({x, x}), t.concat_rows({x, x})));
  });
  grad_test(p, [](Tape& t, Var x) {
    return t.sum(t.mul(t.concat_cols({x, x}), t.concat_cols({x, x})));
  });
  grad_test(p, [](Tape& t, Var x) {
    Tensor b({1, 3}, {0.2, -0.7, 0.4});
    return t.sum(t.mul(t.add_row_vec(x, t.constant(b)), t.add_row_vec(x, t.constant(b))));
  });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.normalize_sum(t.add_const(t.mul(x, x), 0.1))); });
  grad_test(p, [](Tape& t, Var x) { return t.sum(t.add(x, t.sub(x, t.scale(x, 0.5)))); });

  // relu and clamp away from their kinks.
  Parameter pr = make_param("r", 2, 3, 12, 0.2, 1.0);
  grad_test(pr, [](Tape& t, Var x) { return t.sum(t.relu(t.add_const(x, -0.1))); });
  grad_test(pr, [](Tape& t, Var x) { return t.sum(t.clamp(x, 0.0, 0.6)); },
            1e-7, 2e-4);  // tiny eps keeps fd on one side of each plateau edge

  Parameter sq = make_param("s", 3, 3, 13);
  grad_test(sq, [](Tape& t, Var x) { return t.sum(t.diag_part(t.mul(x, x))); });
}

TEST_CASE("grad_scale multiplies the adjoint and grad_reverse negates") {
  Parameter p = make_param("x", 1, 4, 21);
  p.zero_grad();
  {
    Tape t;
    Var x = t.leaf(p);
    t.backward(t.sum(t.mul(x, x)));
  }
  Tensor plain = p.grad;

  p.zero_grad();
  {
    Tape t;
    Var x = t.leaf(p);
    // grad_scale sits between the square and the sum, so forward values are
    // identical while the adjoint is scaled.
    t.backward(t.sum(t.grad_scale(t.mul(x, x), -1.75)));
  }
  for (size_t i = 0; i < p.value.size(); ++i)
    CHECK(p.grad[i] == doctest::Approx(-1.75 * plain[i]).epsilon(1e-15));

  p.zero_grad();
  {
    Tape t;
    Var x = t.leaf(p);
    t.backward(t.sum(t.grad_reverse(t.mul(x, x), 0.5)));
  }
  for (size_t i = 0; i < p.value.size(); ++i)
    CHECK(p.grad[i] == doctest::Approx(-0.5 * plain[i]).epsilon(1e-15));
}

TEST_CASE("backward accumulates: two passes give exactly twice the gradient") {
  Parameter p = make_param("x", 2, 2, 31);
  p.zero_grad();
  Tape t;
  Var x = t.leaf(p);
  Var loss = t.sum(t.mul(t.softmax_rows(x), x));
  t.backward(loss);
  Tensor once = p.grad;
  t.backward(loss);
  for (size_t i = 0; i < p.value.size(); ++i)
    CHECK(p.grad[i] == 2.0 * once[i]);  // bitwise: same op order both passes
}

TEST_CASE("backward through shared subexpression sums both paths") {
  Parameter p = make_param("x", 1, 3, 32);
  p.zero_grad();
  Tape t;
  Var x = t.leaf(p);
  Var h = t.mul(x, x);
  t.backward(t.add(t.sum(h), t.sum(h)));
  for (size_t i = 0; i < 3; ++i)
    CHECK(p.grad[i] == doctest::Approx(4.0 * p.value[i]).epsilon(1e-14));
}

TEST_CASE("tape shape errors") {
  Tape t;
  Var a = t.constant(Tensor(2, 3));
  Var b = t.constant(Tensor(2, 3));
  CHECK_THROWS_AS((void)t.matmul(a, b), shape_error);
  CHECK_THROWS_AS((void)t.backward(a), shape_error);
  CHECK_THROWS_AS((void)t.slice_rows(a, 1, 4), shape_error);
  CHECK_THROWS_AS((void)t.reshape(a, 4, 2), shape_error);
  CHECK_THROWS_AS((void)t.normalize_sum(t.constant(Tensor(1, 3))), shape_error);
  CHECK_THROWS_AS((void)t.concat_rows({}), shape_error);
  CHECK_THROWS_AS((void)t.diag_part(a), shape_error);
}

TEST_CASE("tape reset reuses cleanly") {
  Parameter p = make_param("x", 1, 2, 33);
  Tape t;
  {
    Var x = t.leaf(p);
    t.backward(t.sum(x));
  }
  size_t nodes_before = t.num_nodes();
  t.reset();
  CHECK(t.num_nodes() == 0);
  p.zero_grad();
  Var x = t.leaf(p);
  t.backward(t.sum(t.mul(x, x)));
  CHECK(t.num_nodes() > 0);
  CHECK(t.num_nodes() <= nodes_before + 2);
  for (size_t i = 0; i < 2; ++i)
    CHECK(p.grad[i] == doctest::Approx(2.0 * p.value[i]).epsilon(1e-14));
}

TEST_CASE("sgd step is value -= lr * grad") {
  Parameter p("w", 1, 3);
  p.value = Tensor::row({1.0, -2.0, 0.5});
  p.grad = Tensor::row({0.5, 0.25, -1.0});
  OptimizerConfig cfg;
  cfg.kind = OptKind::kSgd;
  cfg.lr = 0.1;
  Optimizer opt(cfg);
  opt.add_param(&p);
  opt.step();
  CHECK(p.value[0] == doctest::Approx(0.95).epsilon(1e-15));
  CHECK(p.value[1] == doctest::Approx(-2.025).epsilon(1e-15));
  CHECK(p.value[2] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(opt.step_count() == 1);
}

TEST_CASE("adam first step moves by lr regardless of gradient scale") {
  // With bias correction, step 1 is w -= lr * g/(|g| + eps') ≈ lr * sign(g).
  Parameter p("w", 1, 2);
  p.value = Tensor::row({1.0, 1.0});
  p.grad = Tensor::row({1e3, -1e-3});
  OptimizerConfig cfg;  // adam, lr 3e-4 default
  Optimizer opt(cfg);
  opt.add_param(&p);
  opt.step();
  CHECK(p.value[0] == doctest::Approx(1.0 - cfg.lr).epsilon(1e-6));
  CHECK(p.value[1] == doctest::Approx(1.0 + cfg.lr).epsilon(1e-4));
}

TEST_CASE("adam matches a hand-rolled reference for three steps") {
  Parameter p("w", 1, 1);
  p.value[0] = 0.7;
  OptimizerConfig cfg;
  cfg.lr = 0.01;
  Optimizer opt(cfg);
  opt.add_param(&p);

  double w = 0.7, m = 0.0, v = 0.0;
  for (int step = 1; step <= 3; ++step) {
    double g = 2.0 * w;  // d(w^2)/dw
    p.grad[0] = 2.0 * p.value[0];
    opt.step();
    m = cfg.beta1 * m + (1 - cfg.beta1) * g;
    v = cfg.beta2 * v + (1 - cfg.beta2) * g * g;
    double mhat = m / (1 - std::pow(cfg.beta1, step));
    double vhat = v / (1 - std::pow(cfg.beta2, step));
    w -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    CHECK(p.value[0] == doctest::Approx(w).epsilon(1e-15));
  }
}

TEST_CASE("per-group lr multiplier scales sgd updates") {
  Parameter a("a", 1, 1), b("b", 1, 1);
  a.value[0] = b.value[0] = 1.0;
  a.grad[0] = b.grad[0] = 1.0;
  OptimizerConfig cfg;
  cfg.kind = OptKind::kSgd;
  cfg.lr = 0.1;
  Optimizer opt(cfg);
  opt.add_param(&a, 1.0);
  opt.add_param(&b, 0.5);
  opt.step();
  CHECK(a.value[0] == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(b.value[0] == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("set_lr changes subsequent sgd steps") {
  Parameter p("w", 1, 1);
  p.value[0] = 1.0;
  p.grad[0] = 1.0;
  OptimizerConfig cfg;
  cfg.kind = OptKind::kSgd;
  cfg.lr = 0.1;
  Optimizer opt(cfg);
  opt.add_param(&p);
  opt.step();
  opt.set_lr(0.01);
  opt.step();
  CHECK(p.value[0] == doctest::Approx(1.0 - 0.1 - 0.01).epsilon(1e-15));
}

TEST_CASE("optimizer kind parsing") {
  CHECK(opt_kind_from_string("sgd") == OptKind::kSgd);
  CHECK(opt_kind_from_string("adam") == OptKind::kAdam);
  CHECK_THROWS_AS((void)opt_kind_from_string("adamw"), config_error);
}

TEST_CASE("gemm kernels match a naive triple loop") {
  Rng rng(77);
  const size_t m = 7, k = 5, n = 6;
  std::vector<double> a(m * k), b(k * n), bt(n * k), c(m * n), ref(m * n);
  for (auto& x : a) x = rng.uniform(-1, 1);
  for (auto& x : b) x = rng.uniform(-1, 1);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) bt[i * k + j] = b[j * n + i];

  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (size_t l = 0; l < k; ++l) s += a[i * k + l] * b[l * n + j];
      ref[i * n + j] = s;
    }

  kernels::gemm(a.data(), b.data(), c.data(), m, k, n);
  for (size_t i = 0; i < m * n; ++i)
    CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-13));

  kernels::gemm_nt(a.data(), bt.data(), c.data(), m, k, n);
  for (size_t i = 0; i < m * n; ++i)
    CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-13));

  // gemm_tn: C = A'^T B with A' = a laid out k x m.
  std::vector<double> at(k * m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < k; ++j) at[j * m + i] = a[i * k + j];
  kernels::gemm_tn(at.data(), b.data(), c.data(), m, k, n);
  for (size_t i = 0; i < m * n; ++i)
    CHECK(c[i] == doctest::Approx(ref[i]).epsilon(1e-13));

  // accumulate adds on top.
  std::vector<double> acc(m * n, 1.0);
  kernels::gemm(a.data(), b.data(), acc.data(), m, k, n, true);
  for (size_t i = 0; i < m * n; ++i)
    CHECK(acc[i] == doctest::Approx(1.0 + ref[i]).epsilon(1e-13));
}

TEST_CASE("parallel kernels are bit-identical to serial") {
  if (!kernels::openmp_available()) {
    MESSAGE("OpenMP not compiled in; dispatcher is always serial");
    return;
  }
  Rng rng(78);
  const size_t m = 33, k = 17, n = 29;
  std::vector<double> a(m * k), b(k * n), s1(m * n), s2(m * n);
  for (auto& x : a) x = rng.uniform(-2, 2);
  for (auto& x : b) x = rng.uniform(-2, 2);

  kernels::serial::gemm(a.data(), b.data(), s1.data(), m, k, n, false);
  kernels::set_threads_override(4);
  kernels::gemm(a.data(), b.data(), s2.data(), m, k, n);
  kernels::set_threads_override(0);
  for (size_t i = 0; i < m * n; ++i) CHECK(s1[i] == s2[i]);

  std::vector<double> x(m * n), y1(m * n), y2(m * n);
  for (auto& v : x) v = rng.uniform(-3, 3);
  kernels::serial::softmax_rows(x.data(), y1.data(), m, n);
  kernels::set_threads_override(3);
  kernels::softmax_rows(x.data(), y2.data(), m, n);
  kernels::set_threads_override(0);
  for (size_t i = 0; i < m * n; ++i) CHECK(y1[i] == y2[i]);

  kernels::serial::softmax_cols(x.data(), y1.data(), m, n);
  kernels::set_threads_override(3);
  kernels::softmax_cols(x.data(), y2.data(), m, n);
  kernels::set_threads_override(0);
  for (size_t i = 0; i < m * n; ++i) CHECK(y1[i] == y2[i]);

  std::vector<double> u(m * k), v(n * k), c1(m * n), c2(m * n);
  for (auto& w : u) w = rng.uniform(-1, 1);
  for (auto& w : v) w = rng.uniform(-1, 1);
  kernels::serial::cosine_matrix(u.data(), v.data(), c1.data(), m, n, k);
  kernels::set_threads_override(5);
  kernels::cosine_matrix(u.data(), v.data(), c2.data(), m, n, k);
  kernels::set_threads_override(0);
  for (size_t i = 0; i < m * n; ++i) CHECK(c1[i] == c2[i]);
}

TEST_CASE("threads override clamps and restores") {
  kernels::set_threads_override(3);
  CHECK(kernels::max_threads() == (kernels::openmp_available() ? 3 : 1));
  kernels::set_threads_override(1000);
  CHECK(kernels::max_threads() <= 256);
  kernels::set_threads_override(0);
  CHECK(kernels::max_threads() >= 1);
}

TEST_CASE("cosine_matrix maps zero vectors to zero similarity") {
  std::vector<double> u = {0, 0, 1, 0};  // two rows, d=2; first row zero
  std::vector<double> v = {1, 0};
  std::vector<double> s(2);
  kernels::cosine_matrix(u.data(), v.data(), s.data(), 2, 1, 2);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rng reproducibility and stream separation") {
  Rng a(123), b(123);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng c(123), d(124);
  bool all_same = true;
  for (int i = 0; i < 8; ++i) all_same &= c.next_u64() == d.next_u64();
  CHECK_FALSE(all_same);

  CHECK(derive_seed(7, "shuffle/source/1") != derive_seed(7, "shuffle/target/1"));
  CHECK(derive_seed(7, "a") != derive_seed(8, "a"));
  CHECK(derive_seed(7, "a") == derive_seed(7, "a"));

  Rng u(99);
  for (int i = 0; i < 1000; ++i) {
    double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  Rng ui(100);
  for (int i = 0; i < 1000; ++i) {
    int64_t x = ui.uniform_int(-2, 2);
    CHECK(x >= -2);
    CHECK(x <= 2);
  }

  // Shuffle is a permutation and is deterministic.
  std::vector<int> v1 = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<int> v2 = v1;
  Rng s1(55), s2(55);
  s1.shuffle(v1);
  s2.shuffle(v2);
  CHECK(v1 == v2);
  std::vector<int> sorted = v1;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("tensor shape mismatch throws") {
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0, 3.0}), shape_error);
}
