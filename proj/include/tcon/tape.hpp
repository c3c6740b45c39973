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

#ifndef TCON_TAPE_HPP
#define TCON_TAPE_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "tcon/tensor.hpp"

namespace tcon {

class Tape;

/// Handle to a node on a tape.  Cheap to copy; valid until Tape::reset().
struct Var {
  int32_t id = -1;
  bool valid() const { return id >= 0; }
};

/// Define-by-run reverse-mode tape.  Forward values are computed eagerly at
/// node creation and stored in one contiguous arena.  backward() walks the
/// node list in reverse with a scratch adjoint buffer and accumulates leaf
/// adjoints into Parameter::grad, so two backward passes without zero_grad()
/// yield exactly twice the gradient.
class Tape {
 public:
  Tape();

  // -- graph construction ---------------------------------------------------

  /// Registers a trainable parameter.  Repeated calls with the same parameter
  /// return the same node.
  Var leaf(Parameter& p);

  /// Non-trainable input; data is copied into the arena.
  Var constant(const Tensor& t);
  Var constant(Shape shape, const double* data);
  Var scalar_const(double v);

  Var matmul(Var a, Var b);
  Var transpose(Var x);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);                    // elementwise
  Var scale(Var x, double c);
  Var add_const(Var x, double c);
  Var add_row_vec(Var x, Var bias);         // x[m×n] + bias[1×n] per row
  Var concat_rows(const std::vector<Var>& xs);
  Var concat_cols(const std::vector<Var>& xs);
  Var slice_rows(Var x, size_t r0, size_t r1);  // rows [r0, r1)
  Var reshape(Var x, size_t rows, size_t cols);
  Var row_sums(Var x);                      // m×n -> m×1
  Var col_sums(Var x);                      // m×n -> 1×n
  Var sum(Var x);                           // -> 1×1
  Var mean(Var x);                          // -> 1×1
  Var softmax_rows(Var x);
  Var softmax_cols(Var x);
  Var log(Var x);                           // requires strictly positive input
  Var relu(Var x);
  Var sigmoid(Var x);
  Var clamp(Var x, double lo, double hi);
  Var inner(Var a, Var b);                  // sum(a⊙b) -> 1×1
  Var normalize_sum(Var x);                 // x / sum(x); sum must be nonzero
  Var diag_part(Var x);                     // n×n -> 1×n

  /// Forward identity; backward multiplies the incoming adjoint by `factor`.
  Var grad_scale(Var x, double factor);

  /// Gradient-reversal layer: identity forward, -lambda in backward.
  Var grad_reverse(Var x, double lambda) { return grad_scale(x, -lambda); }

  // -- inspection -----------------------------------------------------------

  Shape shape(Var v) const;
  const double* values(Var v) const;
  Tensor value_tensor(Var v) const;
  double scalar_value(Var v) const;  // v must be 1×1
  size_t num_nodes() const { return nodes_.size(); }

  // -- differentiation ------------------------------------------------------

  /// Accumulates d(loss)/d(param) into every registered Parameter's grad.
  /// `loss` must be 1×1.
  void backward(Var loss);

  /// Drops all nodes but keeps allocated capacity for reuse.
  void reset();

 private:
  enum class Op : uint8_t {
    kLeaf, kConst, kMatMul, kTranspose, kAdd, kSub, kMul, kScale, kAddConst,
    kAddRowVec, kConcatRows, kConcatCols, kSliceRows, kReshape, kRowSums,
    kColSums, kSum, kMean, kSoftmaxRows, kSoftmaxCols, kLog, kRelu, kSigmoid,
    kClamp, kInner, kNormalizeSum, kDiagPart, kGradScale,
  };

  struct Node {
    Op op;
    Shape shape;
    size_t offset = 0;       // into values_ arena
    int32_t a = -1, b = -1;  // binary inputs
    int32_t list = -1;       // index into lists_ for concat ops
    double s0 = 0.0, s1 = 0.0;
    uint32_t r0 = 0, r1 = 0;  // slice bounds
    Parameter* param = nullptr;
  };

  Var push(Node n);           // allocates arena space, returns handle
  double* data(int32_t id) { return values_.data() + nodes_[id].offset; }
  const double* data(int32_t id) const { return values_.data() + nodes_[id].offset; }
  const Node& node(Var v) const;
  static void require(bool cond, const char* what, const Shape& a, const Shape& b);

  std::vector<Node> nodes_;
  std::vector<double> values_;
  std::vector<double> adj_;   // scratch, sized like values_ during backward
  std::vector<std::vector<int32_t>> lists_;
  std::unordered_map<const Parameter*, int32_t> leaf_ids_;
};

}  // namespace tcon

#endif  // TCON_TAPE_HPP
