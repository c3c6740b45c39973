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

#ifndef TCON_TENSOR_HPP
#define TCON_TENSOR_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tcon/errors.hpp"

namespace tcon {

/// All tensors in this library are dense row-major 2D matrices of f64.
/// Vectors are represented as 1 x n rows.
struct Shape {
  size_t rows = 0;
  size_t cols = 0;

  size_t size() const { return rows * cols; }
  bool operator==(const Shape& o) const { return rows == o.rows && cols == o.cols; }
  bool operator!=(const Shape& o) const { return !(*this == o); }
  std::string str() const {
    return "[" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
  }
};

class Tensor {
 public:
  Tensor() = default;
  Tensor(size_t rows, size_t cols) : shape_{rows, cols}, data_(rows * cols, 0.0) {}
  Tensor(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != shape_.size())
      throw shape_error("tensor data size " + std::to_string(data_.size()) +
                        " does not match shape " + shape_.str());
  }

  static Tensor row(std::vector<double> v) {
    size_t n = v.size();
    return Tensor({1, n}, std::move(v));
  }

  const Shape& shape() const { return shape_; }
  size_t rows() const { return shape_.rows; }
  size_t cols() const { return shape_.cols; }
  size_t size() const { return shape_.size(); }

  double& at(size_t r, size_t c) { return data_[r * shape_.cols + c]; }
  double at(size_t r, size_t c) const { return data_[r * shape_.cols + c]; }
  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& vec() { return data_; }
  const std::vector<double>& vec() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  Shape shape_;
  std::vector<double> data_;
};

/// A trainable tensor: value plus an accumulated gradient buffer of the same
/// shape.  Gradients accumulate across backward passes until zero_grad().
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, size_t rows, size_t cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols) {}

  void zero_grad() { grad.fill(0.0); }
};

}  // namespace tcon

#endif  // TCON_TENSOR_HPP
