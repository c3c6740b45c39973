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

#include "tcon/tape.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "tcon/errors.hpp"
#include "tcon/kernels.hpp"

namespace tcon {

Tape::Tape() {
  nodes_.reserve(4096);
  values_.reserve(1 << 20);
}

void Tape::require(bool cond, const char* what, const Shape& a, const Shape& b) {
  if (!cond)
    throw shape_error(std::string(what) + ": " + a.str() + " vs " + b.str());
}

const Tape::Node& Tape::node(Var v) const {
  if (!v.valid() || static_cast<size_t>(v.id) >= nodes_.size())
    throw shape_error("invalid tape handle");
  return nodes_[v.id];
}

Var Tape::push(Node n) {
  n.offset = values_.size();
  values_.resize(n.offset + n.shape.size(), 0.0);
  nodes_.push_back(n);
  return Var{static_cast<int32_t>(nodes_.size() - 1)};
}

Shape Tape::shape(Var v) const { return node(v).shape; }

const double* Tape::values(Var v) const {
  node(v);  // validates the handle
  return data(v.id);
}

Tensor Tape::value_tensor(Var v) const {
  const Node& n = node(v);
  Tensor t(n.shape.rows, n.shape.cols);
  std::memcpy(t.data(), data(v.id), n.shape.size() * sizeof(double));
  return t;
}

double Tape::scalar_value(Var v) const {
  const Node& n = node(v);
  require(n.shape.rows == 1 && n.shape.cols == 1, "scalar_value needs 1x1",
          n.shape, Shape{1, 1});
  return data(v.id)[0];
}

Var Tape::leaf(Parameter& p) {
  auto it = leaf_ids_.find(&p);
  if (it != leaf_ids_.end()) return Var{it->second};
  Var v = push({Op::kLeaf, p.value.shape()});
  nodes_[v.id].param = &p;
  std::memcpy(data(v.id), p.value.data(), p.value.size() * sizeof(double));
  leaf_ids_.emplace(&p, v.id);
  return v;
}

Var Tape::constant(const Tensor& t) { return constant(t.shape(), t.data()); }

Var Tape::constant(Shape shape, const double* src) {
  Var v = push({Op::kConst, shape});
  std::memcpy(data(v.id), src, shape.size() * sizeof(double));
  return v;
}

Var Tape::scalar_const(double value) {
  Var v = push({Op::kConst, Shape{1, 1}});
  data(v.id)[0] = value;
  return v;
}

Var Tape::matmul(Var a, Var b) {
  Shape sa = shape(a), sb = shape(b);
  require(sa.cols == sb.rows, "matmul inner dims", sa, sb);
  Var v = push({Op::kMatMul, Shape{sa.rows, sb.cols}});
  nodes_[v.id].a = a.id;
  nodes_[v.id].b = b.id;
  kernels::gemm(data(a.id), data(b.id), data(v.id), sa.rows, sa.cols, sb.cols);
  return v;
}

Var Tape::transpose(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kTranspose, Shape{s.cols, s.rows}});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t r = 0; r < s.rows; ++r)
    for (size_t c = 0; c < s.cols; ++c) out[c * s.rows + r] = in[r * s.cols + c];
  return v;
}

Var Tape::add(Var a, Var b) {
  Shape sa = shape(a), sb = shape(b);
  require(sa == sb, "add shapes", sa, sb);
  Var v = push({Op::kAdd, sa});
  nodes_[v.id].a = a.id;
  nodes_[v.id].b = b.id;
  const double* pa = data(a.id);
  const double* pb = data(b.id);
  double* out = data(v.id);
  for (size_t i = 0; i < sa.size(); ++i) out[i] = pa[i] + pb[i];
  return v;
}

Var Tape::sub(Var a, Var b) {
  Shape sa = shape(a), sb = shape(b);
  require(sa == sb, "sub shapes", sa, sb);
  Var v = push({Op::kSub, sa});
  nodes_[v.id].a = a.id;
  nodes_[v.id].b = b.id;
  const double* pa = data(a.id);
  const double* pb = data(b.id);
  double* out = data(v.id);
  for (size_t i = 0; i < sa.size(); ++i) out[i] = pa[i] - pb[i];
  return v;
}

Var Tape::mul(Var a, Var b) {
  Shape sa = shape(a), sb = shape(b);
  require(sa == sb, "mul shapes", sa, sb);
  Var v = push({Op::kMul, sa});
  nodes_[v.id].a = a.id;
  nodes_[v.id].b = b.id;
  const double* pa = data(a.id);
  const double* pb = data(b.id);
  double* out = data(v.id);
  for (size_t i = 0; i < sa.size(); ++i) out[i] = pa[i] * pb[i];
  return v;
}

Var Tape::scale(Var x, double c) {
  Shape s = shape(x);
  Var v = push({Op::kScale, s});
  nodes_[v.id].a = x.id;
  nodes_[v.id].s0 = c;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t i = 0; i < s.size(); ++i) out[i] = c * in[i];
  return v;
}

Var Tape::add_const(Var x, double c) {
  Shape s = shape(x);
  Var v = push({Op::kAddConst, s});
  nodes_[v.id].a = x.id;
  nodes_[v.id].s0 = c;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t i = 0; i < s.size(); ++i) out[i] = in[i] + c;
  return v;
}

Var Tape::add_row_vec(Var x, Var bias) {
  Shape s = shape(x), sb = shape(bias);
  require(sb.rows == 1 && sb.cols == s.cols, "add_row_vec bias", s, sb);
  Var v = push({Op::kAddRowVec, s});
  nodes_[v.id].a = x.id;
  nodes_[v.id].b = bias.id;
  const double* in = data(x.id);
  const double* pb = data(bias.id);
  double* out = data(v.id);
  for (size_t r = 0; r < s.rows; ++r)
    for (size_t c = 0; c < s.cols; ++c) out[r * s.cols + c] = in[r * s.cols + c] + pb[c];
  return v;
}

Var Tape::concat_rows(const std::vector<Var>& xs) {
  if (xs.empty()) throw shape_error("concat_rows of nothing");
  Shape first = shape(xs[0]);
  size_t rows = 0;
  for (Var x : xs) {
    Shape s = shape(x);
    require(s.cols == first.cols, "concat_rows widths", first, s);
    rows += s.rows;
  }
  std::vector<int32_t> ids;
  ids.reserve(xs.size());
  for (Var x : xs) ids.push_back(x.id);
  Var v = push({Op::kConcatRows, Shape{rows, first.cols}});
  nodes_[v.id].list = static_cast<int32_t>(lists_.size());
  lists_.push_back(std::move(ids));
  double* out = data(v.id);
  for (int32_t id : lists_[nodes_[v.id].list]) {
    size_t n = nodes_[id].shape.size();
    std::memcpy(out, data(id), n * sizeof(double));
    out += n;
  }
  return v;
}

Var Tape::concat_cols(const std::vector<Var>& xs) {
  if (xs.empty()) throw shape_error("concat_cols of nothing");
  Shape first = shape(xs[0]);
  size_t cols = 0;
  for (Var x : xs) {
    Shape s = shape(x);
    require(s.rows == first.rows, "concat_cols heights", first, s);
    cols += s.cols;
  }
  std::vector<int32_t> ids;
  ids.reserve(xs.size());
  for (Var x : xs) ids.push_back(x.id);
  Var v = push({Op::kConcatCols, Shape{first.rows, cols}});
  nodes_[v.id].list = static_cast<int32_t>(lists_.size());
  lists_.push_back(std::move(ids));
  double* out = data(v.id);
  size_t col0 = 0;
  for (int32_t id : lists_[nodes_[v.id].list]) {
    const Shape& s = nodes_[id].shape;
    const double* in = data(id);
    for (size_t r = 0; r < s.rows; ++r)
      std::memcpy(out + r * cols + col0, in + r * s.cols, s.cols * sizeof(double));
    col0 += s.cols;
  }
  return v;
}

Var Tape::slice_rows(Var x, size_t r0, size_t r1) {
  Shape s = shape(x);
  if (!(r0 < r1 && r1 <= s.rows))
    throw shape_error("slice_rows [" + std::to_string(r0) + "," + std::to_string(r1) +
                      ") out of " + s.str());
  Var v = push({Op::kSliceRows, Shape{r1 - r0, s.cols}});
  nodes_[v.id].a = x.id;
  nodes_[v.id].r0 = static_cast<uint32_t>(r0);
  nodes_[v.id].r1 = static_cast<uint32_t>(r1);
  std::memcpy(data(v.id), data(x.id) + r0 * s.cols, (r1 - r0) * s.cols * sizeof(double));
  return v;
}

Var Tape::reshape(Var x, size_t rows, size_t cols) {
  Shape s = shape(x);
  require(s.size() == rows * cols, "reshape element count", s, Shape{rows, cols});
  Var v = push({Op::kReshape, Shape{rows, cols}});
  nodes_[v.id].a = x.id;
  std::memcpy(data(v.id), data(x.id), s.size() * sizeof(double));
  return v;
}

Var Tape::row_sums(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kRowSums, Shape{s.rows, 1}});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t r = 0; r < s.rows; ++r) {
    double acc = 0.0;
    for (size_t c = 0; c < s.cols; ++c) acc += in[r * s.cols + c];
    out[r] = acc;
  }
  return v;
}

Var Tape::col_sums(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kColSums, Shape{1, s.cols}});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t c = 0; c < s.cols; ++c) out[c] = 0.0;
  for (size_t r = 0; r < s.rows; ++r)
    for (size_t c = 0; c < s.cols; ++c) out[c] += in[r * s.cols + c];
  return v;
}

Var Tape::sum(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kSum, Shape{1, 1}});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double acc = 0.0;
  for (size_t i = 0; i < s.size(); ++i) acc += in[i];
  data(v.id)[0] = acc;
  return v;
}

Var Tape::mean(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kMean, Shape{1, 1}});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double acc = 0.0;
  for (size_t i = 0; i < s.size(); ++i) acc += in[i];
  data(v.id)[0] = acc / static_cast<double>(s.size());
  return v;
}

Var Tape::softmax_rows(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kSoftmaxRows, s});
  nodes_[v.id].a = x.id;
  kernels::softmax_rows(data(x.id), data(v.id), s.rows, s.cols);
  return v;
}

Var Tape::softmax_cols(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kSoftmaxCols, s});
  nodes_[v.id].a = x.id;
  kernels::softmax_cols(data(x.id), data(v.id), s.rows, s.cols);
  return v;
}

Var Tape::log(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kLog, s});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t i = 0; i < s.size(); ++i) out[i] = std::log(in[i]);
  return v;
}

Var Tape::relu(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kRelu, s});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t i = 0; i < s.size(); ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
  return v;
}

Var Tape::sigmoid(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kSigmoid, s});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t i = 0; i < s.size(); ++i) {
    double z = in[i];
    // Evaluate through exp of a negative argument on both branches.
    out[i] = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z))
                      : std::exp(z) / (1.0 + std::exp(z));
  }
  return v;
}

Var Tape::clamp(Var x, double lo, double hi) {
  Shape s = shape(x);
  Var v = push({Op::kClamp, s});
  nodes_[v.id].a = x.id;
  nodes_[v.id].s0 = lo;
  nodes_[v.id].s1 = hi;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t i = 0; i < s.size(); ++i) out[i] = std::min(std::max(in[i], lo), hi);
  return v;
}

Var Tape::inner(Var a, Var b) {
  Shape sa = shape(a), sb = shape(b);
  require(sa == sb, "inner shapes", sa, sb);
  Var v = push({Op::kInner, Shape{1, 1}});
  nodes_[v.id].a = a.id;
  nodes_[v.id].b = b.id;
  const double* pa = data(a.id);
  const double* pb = data(b.id);
  double acc = 0.0;
  for (size_t i = 0; i < sa.size(); ++i) acc += pa[i] * pb[i];
  data(v.id)[0] = acc;
  return v;
}

Var Tape::normalize_sum(Var x) {
  Shape s = shape(x);
  Var v = push({Op::kNormalizeSum, s});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double total = 0.0;
  for (size_t i = 0; i < s.size(); ++i) total += in[i];
  if (total == 0.0) throw shape_error("normalize_sum over zero-sum input");
  nodes_[v.id].s0 = total;
  double* out = data(v.id);
  double inv = 1.0 / total;
  for (size_t i = 0; i < s.size(); ++i) out[i] = in[i] * inv;
  return v;
}

Var Tape::diag_part(Var x) {
  Shape s = shape(x);
  require(s.rows == s.cols, "diag_part square", s, s);
  Var v = push({Op::kDiagPart, Shape{1, s.rows}});
  nodes_[v.id].a = x.id;
  const double* in = data(x.id);
  double* out = data(v.id);
  for (size_t i = 0; i < s.rows; ++i) out[i] = in[i * s.cols + i];
  return v;
}

Var Tape::grad_scale(Var x, double factor) {
  Shape s = shape(x);
  Var v = push({Op::kGradScale, s});
  nodes_[v.id].a = x.id;
  nodes_[v.id].s0 = factor;
  std::memcpy(data(v.id), data(x.id), s.size() * sizeof(double));
  return v;
}

void Tape::backward(Var loss) {
  const Node& ln = node(loss);
  if (ln.shape.rows != 1 || ln.shape.cols != 1)
    throw shape_error("backward target must be 1x1, got " + ln.shape.str());

  adj_.assign(values_.size(), 0.0);
  adj_[ln.offset] = 1.0;

  for (size_t idx = nodes_.size(); idx-- > 0;) {
    const Node& n = nodes_[idx];
    const double* gy = adj_.data() + n.offset;
    // Skip nodes with no incoming adjoint mass is not safe to detect cheaply;
    // ops below are linear in output size anyway.
    switch (n.op) {
      case Op::kLeaf: {
        double* g = n.param->grad.data();
        for (size_t i = 0; i < n.shape.size(); ++i) g[i] += gy[i];
        break;
      }
      case Op::kConst:
        break;
      case Op::kMatMul: {
        const Node& na = nodes_[n.a];
        const Node& nb = nodes_[n.b];
        // dA += dC . B^T ; dB += A^T . dC
        kernels::gemm_nt(gy, values_.data() + nb.offset, adj_.data() + na.offset,
                         na.shape.rows, nb.shape.cols, na.shape.cols, true);
        kernels::gemm_tn(values_.data() + na.offset, gy, adj_.data() + nb.offset,
                         na.shape.cols, na.shape.rows, nb.shape.cols, true);
        break;
      }
      case Op::kTranspose: {
        const Node& na = nodes_[n.a];
        double* gx = adj_.data() + na.offset;
        for (size_t r = 0; r < n.shape.rows; ++r)
          for (size_t c = 0; c < n.shape.cols; ++c)
            gx[c * n.shape.rows + r] += gy[r * n.shape.cols + c];
        break;
      }
      case Op::kAdd: {
        double* ga = adj_.data() + nodes_[n.a].offset;
        double* gb = adj_.data() + nodes_[n.b].offset;
        for (size_t i = 0; i < n.shape.size(); ++i) {
          ga[i] += gy[i];
          gb[i] += gy[i];
        }
        break;
      }
      case Op::kSub: {
        double* ga = adj_.data() + nodes_[n.a].offset;
        double* gb = adj_.data() + nodes_[n.b].offset;
        for (size_t i = 0; i < n.shape.size(); ++i) {
          ga[i] += gy[i];
          gb[i] -= gy[i];
        }
        break;
      }
      case Op::kMul: {
        double* ga = adj_.data() + nodes_[n.a].offset;
        double* gb = adj_.data() + nodes_[n.b].offset;
        const double* va = values_.data() + nodes_[n.a].offset;
        const double* vb = values_.data() + nodes_[n.b].offset;
        for (size_t i = 0; i < n.shape.size(); ++i) {
          ga[i] += gy[i] * vb[i];
          gb[i] += gy[i] * va[i];
        }
        break;
      }
      case Op::kScale:
      case Op::kGradScale: {
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t i = 0; i < n.shape.size(); ++i) gx[i] += n.s0 * gy[i];
        break;
      }
      case Op::kAddConst: {
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t i = 0; i < n.shape.size(); ++i) gx[i] += gy[i];
        break;
      }
      case Op::kAddRowVec: {
        double* gx = adj_.data() + nodes_[n.a].offset;
        double* gb = adj_.data() + nodes_[n.b].offset;
        for (size_t r = 0; r < n.shape.rows; ++r)
          for (size_t c = 0; c < n.shape.cols; ++c) {
            double g = gy[r * n.shape.cols + c];
            gx[r * n.shape.cols + c] += g;
            gb[c] += g;
          }
        break;
      }
      case Op::kConcatRows: {
        const double* g = gy;
        for (int32_t id : lists_[n.list]) {
          const Node& ni = nodes_[id];
          double* gi = adj_.data() + ni.offset;
          for (size_t i = 0; i < ni.shape.size(); ++i) gi[i] += g[i];
          g += ni.shape.size();
        }
        break;
      }
      case Op::kConcatCols: {
        size_t col0 = 0;
        for (int32_t id : lists_[n.list]) {
          const Node& ni = nodes_[id];
          double* gi = adj_.data() + ni.offset;
          for (size_t r = 0; r < ni.shape.rows; ++r)
            for (size_t c = 0; c < ni.shape.cols; ++c)
              gi[r * ni.shape.cols + c] += gy[r * n.shape.cols + col0 + c];
          col0 += ni.shape.cols;
        }
        break;
      }
      case Op::kSliceRows: {
        const Node& na = nodes_[n.a];
        double* gx = adj_.data() + na.offset + n.r0 * na.shape.cols;
        for (size_t i = 0; i < n.shape.size(); ++i) gx[i] += gy[i];
        break;
      }
      case Op::kReshape: {
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t i = 0; i < n.shape.size(); ++i) gx[i] += gy[i];
        break;
      }
      case Op::kRowSums: {
        const Node& na = nodes_[n.a];
        double* gx = adj_.data() + na.offset;
        for (size_t r = 0; r < na.shape.rows; ++r)
          for (size_t c = 0; c < na.shape.cols; ++c) gx[r * na.shape.cols + c] += gy[r];
        break;
      }
      case Op::kColSums: {
        const Node& na = nodes_[n.a];
        double* gx = adj_.data() + na.offset;
        for (size_t r = 0; r < na.shape.rows; ++r)
          for (size_t c = 0; c < na.shape.cols; ++c) gx[r * na.shape.cols + c] += gy[c];
        break;
      }
      case Op::kSum: {
        const Node& na = nodes_[n.a];
        double* gx = adj_.data() + na.offset;
        double g = gy[0];
        for (size_t i = 0; i < na.shape.size(); ++i) gx[i] += g;
        break;
      }
      case Op::kMean: {
        const Node& na = nodes_[n.a];
        double* gx = adj_.data() + na.offset;
        double g = gy[0] / static_cast<double>(na.shape.size());
        for (size_t i = 0; i < na.shape.size(); ++i) gx[i] += g;
        break;
      }
      case Op::kSoftmaxRows: {
        const double* y = values_.data() + n.offset;
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t r = 0; r < n.shape.rows; ++r) {
          const double* yr = y + r * n.shape.cols;
          const double* gr = gy + r * n.shape.cols;
          double dot = 0.0;
          for (size_t c = 0; c < n.shape.cols; ++c) dot += gr[c] * yr[c];
          for (size_t c = 0; c < n.shape.cols; ++c)
            gx[r * n.shape.cols + c] += yr[c] * (gr[c] - dot);
        }
        break;
      }
      case Op::kSoftmaxCols: {
        const double* y = values_.data() + n.offset;
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t c = 0; c < n.shape.cols; ++c) {
          double dot = 0.0;
          for (size_t r = 0; r < n.shape.rows; ++r)
            dot += gy[r * n.shape.cols + c] * y[r * n.shape.cols + c];
          for (size_t r = 0; r < n.shape.rows; ++r) {
            size_t i = r * n.shape.cols + c;
            gx[i] += y[i] * (gy[i] - dot);
          }
        }
        break;
      }
      case Op::kLog: {
        const double* vx = values_.data() + nodes_[n.a].offset;
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t i = 0; i < n.shape.size(); ++i) gx[i] += gy[i] / vx[i];
        break;
      }
      case Op::kRelu: {
        const double* vx = values_.data() + nodes_[n.a].offset;
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t i = 0; i < n.shape.size(); ++i)
          if (vx[i] > 0.0) gx[i] += gy[i];
        break;
      }
      case Op::kSigmoid: {
        const double* y = values_.data() + n.offset;
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t i = 0; i < n.shape.size(); ++i)
          gx[i] += gy[i] * y[i] * (1.0 - y[i]);
        break;
      }
      case Op::kClamp: {
        const double* vx = values_.data() + nodes_[n.a].offset;
        double* gx = adj_.data() + nodes_[n.a].offset;
        for (size_t i = 0; i < n.shape.size(); ++i)
          if (vx[i] > n.s0 && vx[i] < n.s1) gx[i] += gy[i];
        break;
      }
      case Op::kInner: {
        const double* va = values_.data() + nodes_[n.a].offset;
        const double* vb = values_.data() + nodes_[n.b].offset;
        double* ga = adj_.data() + nodes_[n.a].offset;
        double* gb = adj_.data() + nodes_[n.b].offset;
        double g = gy[0];
        size_t sz = nodes_[n.a].shape.size();
        for (size_t i = 0; i < sz; ++i) {
          ga[i] += g * vb[i];
          gb[i] += g * va[i];
        }
        break;
      }
      case Op::kNormalizeSum: {
        // y = x / S with S = sum(x): dx_j = (dy_j - <dy, y>) / S
        const double* y = values_.data() + n.offset;
        double* gx = adj_.data() + nodes_[n.a].offset;
        double dot = 0.0;
        for (size_t i = 0; i < n.shape.size(); ++i) dot += gy[i] * y[i];
        double inv = 1.0 / n.s0;
        for (size_t i = 0; i < n.shape.size(); ++i) gx[i] += (gy[i] - dot) * inv;
        break;
      }
      case Op::kDiagPart: {
        const Node& na = nodes_[n.a];
        double* gx = adj_.data() + na.offset;
        for (size_t i = 0; i < n.shape.cols; ++i) gx[i * na.shape.cols + i] += gy[i];
        break;
      }
    }
  }
}

void Tape::reset() {
  nodes_.clear();
  values_.clear();
  lists_.clear();
  leaf_ids_.clear();
}

}  // namespace tcon
