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

#ifndef PROSPECTNET__AUTODIFF_HPP_
#define PROSPECTNET__AUTODIFF_HPP_

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "prospectnet/tensor.hpp"

namespace prospectnet
{

class ParameterStore;
class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid for the tape's lifetime.
class Var
{
public:
  Var() = default;
  const Tensor & value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

private:
  friend class Tape;
  Var(Tape * tape, int id) : tape_(tape), id_(id) {}
  Tape * tape_ = nullptr;
  int id_ = -1;
};

/**
 * @brief Reverse-mode computation tape over rank-2 float64 tensors.
 *
 * One tape records one forward computation; backward() walks it once in
 * reverse and deposits parameter gradients into the bound ParameterStore.
 * Every op is a named enum case with an explicit adjoint, so the whole
 * differentiation path can be read in one switch. The only broadcast is
 * row-wise bias addition (plus the two explicit repeat/broadcast ops).
 *
 * Tapes are single-threaded; build a fresh tape per training step.
 */
class Tape
{
public:
  explicit Tape(ParameterStore * store = nullptr) : store_(store) {}

  Tape(const Tape &) = delete;
  Tape & operator=(const Tape &) = delete;

  /// Leaf holding a constant value. No gradient is reported for it.
  Var constant(Tensor value);
  /// Leaf bound to a named parameter of the store. Repeated requests for the
  /// same name return the same node.
  Var param(const std::string & name);

  // Linear algebra.
  Var matmul(Var a, Var b);
  Var matmul_nt(Var a, Var b);  ///< a times b-transpose.

  // Elementwise, operands of identical shape.
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);

  /// m + bias replicated down the rows (the one permitted broadcast).
  Var add_row_bias(Var m, Var bias_row);

  Var scale(Var a, double factor);
  Var add_const(Var a, double c);
  Var neg(Var a);

  Var sigmoid(Var a);
  Var tanh(Var a);
  Var relu(Var a);
  Var exp(Var a);
  /// Natural log of (a + eps), elementwise.
  Var log(Var a, double eps = 0.0);

  /// Row-wise softmax. Rows sum to one; invariant under per-row shifts.
  Var softmax_rows(Var a);

  Var concat_rows(const std::vector<Var> & parts);
  Var concat_cols(const std::vector<Var> & parts);
  Var slice_rows(Var a, std::size_t begin, std::size_t end);
  /// Select rows by index; duplicates allowed. Backward scatters-adds.
  Var gather_rows(Var a, std::vector<std::size_t> indices);
  Var reshape(Var a, std::size_t rows, std::size_t cols);

  Var sum(Var a);        ///< All elements, 1x1 result.
  Var mean_rows(Var a);  ///< Column means, 1xC result.
  Var max_rows(Var a);   ///< Column maxima, 1xC result; ties pick the lowest row.

  Var repeat_row(Var row, std::size_t n);        ///< 1xC -> nxC.
  Var broadcast_col(Var col, std::size_t width); ///< Nx1 -> NxW, rows constant.

  /// m scaled by a 1x1 node (both sides differentiable).
  Var mul_scalar_node(Var m, Var s);
  /// Elementwise reciprocal.
  Var recip(Var a);

  /// Mean Huber loss against a constant target, 1x1 result.
  Var huber_loss(Var pred, const Tensor & target, double delta);

  /// Reverse pass from a scalar loss. Zeroes the store's gradient slots, then
  /// fills the slots of every parameter reachable from the loss; parameters
  /// the loss never touched stay at zero. Throws ContractError if the loss is
  /// not 1x1.
  void backward(Var loss);

  const Tensor & value_of(int id) const { return nodes_[id].value; }
  std::size_t node_count() const { return nodes_.size(); }

private:
  friend class Var;

  enum class Op : std::uint8_t {
    kLeaf,
    kMatmul,
    kMatmulNT,
    kAdd,
    kSub,
    kMul,
    kAddRowBias,
    kScale,
    kAddConst,
    kNeg,
    kSigmoid,
    kTanh,
    kRelu,
    kExp,
    kLog,
    kSoftmaxRows,
    kConcatRows,
    kConcatCols,
    kSliceRows,
    kGatherRows,
    kReshape,
    kSum,
    kMeanRows,
    kMaxRows,
    kRepeatRow,
    kBroadcastCol,
    kMulScalarNode,
    kRecip,
    kHuber,
  };

  struct Node
  {
    Op op = Op::kLeaf;
    int a = -1;
    int b = -1;
    double aux = 0.0;
    std::size_t extra_begin = 0;
    std::size_t extra_count = 0;
    Tensor value;
    Tensor grad;
    std::vector<std::size_t> idx;  // gather indices / argmax rows
    Tensor aux_tensor;             // huber target
    int param_slot = -1;
  };

  int push(Node node);
  Var make(Op op, int a, int b, Tensor value, double aux = 0.0);
  const Node & node(int id) const { return nodes_[id]; }
  void check_same_shape(const Var & a, const Var & b, const char * op) const;

  std::vector<Node> nodes_;
  std::vector<int> extra_parents_;
  std::unordered_map<std::string, int> param_nodes_;
  std::vector<std::pair<int, std::string>> param_bindings_;
  ParameterStore * store_ = nullptr;
};

}  // namespace prospectnet

#endif  // PROSPECTNET__AUTODIFF_HPP_
