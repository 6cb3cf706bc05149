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

#include "prospectnet/tensor.hpp"

#include <cmath>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

namespace
{

std::size_t shape_product(const std::vector<std::size_t> & shape)
{
  std::size_t n = 1;
  for (const auto d : shape) {
    n *= d;
  }
  return n;
}

}  // namespace

void Tensor::init_cols()
{
  cols_ = shape_.empty() ? 1 : shape_.back();
}

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape))
{
  data_.assign(shape_product(shape_), 0.0);
  init_cols();
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
: shape_(std::move(shape)), data_(std::move(data))
{
  if (shape_product(shape_) != data_.size()) {
    throw DimensionError("tensor data length does not match shape product");
  }
  if (!all_finite()) {
    throw ValidationError("tensor constructed with non-finite values");
  }
  init_cols();
}

Tensor Tensor::scalar(double value)
{
  return Tensor({1, 1}, {value});
}

Tensor Tensor::row(std::vector<double> values)
{
  const std::size_t n = values.size();
  return Tensor({1, n}, std::move(values));
}

Tensor Tensor::zeros(std::size_t rows, std::size_t cols)
{
  return Tensor(std::vector<std::size_t>{rows, cols});
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value)
{
  Tensor t(std::vector<std::size_t>{rows, cols});
  t.data_.assign(rows * cols, value);
  return t;
}

Tensor Tensor::unchecked(std::vector<std::size_t> shape, std::vector<double> data)
{
  Tensor t;
  t.shape_ = std::move(shape);
  t.data_ = std::move(data);
  t.init_cols();
  return t;
}

Tensor Tensor::uniform(
  std::size_t rows, std::size_t cols, double lo, double hi, std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> data(rows * cols);
  for (auto & v : data) {
    v = dist(rng);
  }
  return Tensor({rows, cols}, std::move(data));
}

std::size_t Tensor::rows() const
{
  if (rank() == 1) {
    return 1;
  }
  if (rank() != 2) {
    throw DimensionError("rows() requires a rank-1 or rank-2 tensor");
  }
  return shape_[0];
}

std::size_t Tensor::cols() const
{
  if (rank() == 1) {
    return shape_[0];
  }
  if (rank() != 2) {
    throw DimensionError("cols() requires a rank-1 or rank-2 tensor");
  }
  return shape_[1];
}

bool Tensor::all_finite() const
{
  for (const double v : data_) {
    if (!std::isfinite(v)) {
      return false;
    }
  }
  return true;
}

}  // namespace prospectnet
