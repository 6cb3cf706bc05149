// Copyright 2026 The ProspectNet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROSPECTNET__TENSOR_HPP_
#define PROSPECTNET__TENSOR_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace prospectnet
{

/**
 * @brief Dense float64 tensor in row-major order.
 *
 * Public constructors validate that the data length matches the shape product
 * and that every value is finite. Graph-internal code uses unchecked() to skip
 * the finiteness scan on values it just computed.
 */
class Tensor
{
public:
  Tensor() = default;

  /// Zero-filled tensor of the given shape.
  explicit Tensor(std::vector<std::size_t> shape);

  /// Tensor with explicit data. Throws DimensionError on a shape/data length
  /// mismatch and ValidationError on NaN or Inf entries.
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor scalar(double value);
  /// 1-by-n row matrix.
  static Tensor row(std::vector<double> values);
  static Tensor zeros(std::size_t rows, std::size_t cols);
  static Tensor full(std::size_t rows, std::size_t cols, double value);
  /// Construction without the finiteness scan.
  static Tensor unchecked(std::vector<std::size_t> shape, std::vector<double> data);
  /// Uniform values in [lo, hi) from the given generator.
  static Tensor uniform(
    std::size_t rows, std::size_t cols, double lo, double hi, std::mt19937_64 & rng);

  const std::vector<std::size_t> & shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  /// Row/column counts. Rank-1 tensors are treated as 1-by-n rows; higher
  /// ranks throw DimensionError.
  std::size_t rows() const;
  std::size_t cols() const;

  double * data() { return data_.data(); }
  const double * data() const { return data_.data(); }
  std::vector<double> & values() { return data_; }
  const std::vector<double> & values() const { return data_; }

  double & at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double & operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  bool same_shape(const Tensor & other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  bool operator==(const Tensor & other) const
  {
    return shape_ == other.shape_ && data_ == other.data_;
  }

private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
  // Cached trailing dimension for at(); kept in sync by all constructors.
  std::size_t cols_ = 0;

  void init_cols();
};

}  // namespace prospectnet

#endif  // PROSPECTNET__TENSOR_HPP_
