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

#include "prospectnet/autodiff.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "prospectnet/errors.hpp"
#include "prospectnet/param_store.hpp"

namespace prospectnet
{

namespace
{

using EigenMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<EigenMat>;
using ConstMatMap = Eigen::Map<const EigenMat>;

ConstMatMap map_of(const Tensor & t)
{
  return ConstMatMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                     static_cast<Eigen::Index>(t.cols()));
}

MatMap map_of(Tensor & t)
{
  return MatMap(t.data(), static_cast<Eigen::Index>(t.rows()),
                static_cast<Eigen::Index>(t.cols()));
}

Tensor matrix(std::size_t rows, std::size_t cols)
{
  return Tensor::unchecked({rows, cols}, std::vector<double>(rows * cols, 0.0));
}

}  // namespace

const Tensor & Var::value() const
{
  if (tape_ == nullptr) {
    throw ContractError("Var is not bound to a tape");
  }
  return tape_->value_of(id_);
}

int Tape::push(Node node)
{
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

Var Tape::make(Op op, int a, int b, Tensor value, double aux)
{
  Node n;
  n.op = op;
  n.a = a;
  n.b = b;
  n.aux = aux;
  n.value = std::move(value);
  return Var(this, push(std::move(n)));
}

void Tape::check_same_shape(const Var & a, const Var & b, const char * op) const
{
  if (!a.value().same_shape(b.value())) {
    throw DimensionError(std::string(op) + ": operand shapes differ");
  }
}

Var Tape::constant(Tensor value)
{
  Node n;
  n.op = Op::kLeaf;
  n.value = std::move(value);
  return Var(this, push(std::move(n)));
}

Var Tape::param(const std::string & name)
{
  if (store_ == nullptr) {
    throw ContractError("tape has no parameter store bound");
  }
  const auto it = param_nodes_.find(name);
  if (it != param_nodes_.end()) {
    return Var(this, it->second);
  }
  Node n;
  n.op = Op::kLeaf;
  n.value = store_->value(name);
  n.param_slot = static_cast<int>(param_bindings_.size());
  const int id = push(std::move(n));
  param_nodes_.emplace(name, id);
  param_bindings_.emplace_back(id, name);
  return Var(this, id);
}

Var Tape::matmul(Var a, Var b)
{
  const Tensor & va = a.value();
  const Tensor & vb = b.value();
  if (va.cols() != vb.rows()) {
    throw DimensionError("matmul: inner dimensions differ");
  }
  Tensor out = matrix(va.rows(), vb.cols());
  map_of(out).noalias() = map_of(va) * map_of(vb);
  return make(Op::kMatmul, a.id_, b.id_, std::move(out));
}

Var Tape::matmul_nt(Var a, Var b)
{
  const Tensor & va = a.value();
  const Tensor & vb = b.value();
  if (va.cols() != vb.cols()) {
    throw DimensionError("matmul_nt: trailing dimensions differ");
  }
  Tensor out = matrix(va.rows(), vb.rows());
  map_of(out).noalias() = map_of(va) * map_of(vb).transpose();
  return make(Op::kMatmulNT, a.id_, b.id_, std::move(out));
}

Var Tape::add(Var a, Var b)
{
  check_same_shape(a, b, "add");
  Tensor out = a.value();
  const double * pb = b.value().data();
  double * po = out.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    po[i] += pb[i];
  }
  return make(Op::kAdd, a.id_, b.id_, std::move(out));
}

Var Tape::sub(Var a, Var b)
{
  check_same_shape(a, b, "sub");
  Tensor out = a.value();
  const double * pb = b.value().data();
  double * po = out.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    po[i] -= pb[i];
  }
  return make(Op::kSub, a.id_, b.id_, std::move(out));
}

Var Tape::mul(Var a, Var b)
{
  check_same_shape(a, b, "mul");
  Tensor out = a.value();
  const double * pb = b.value().data();
  double * po = out.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    po[i] *= pb[i];
  }
  return make(Op::kMul, a.id_, b.id_, std::move(out));
}

Var Tape::add_row_bias(Var m, Var bias_row)
{
  const Tensor & vm = m.value();
  const Tensor & vb = bias_row.value();
  if (vb.rows() != 1 || vb.cols() != vm.cols()) {
    throw DimensionError("add_row_bias: bias must be 1 x cols(m)");
  }
  Tensor out = vm;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out.at(r, c) += vb[c];
    }
  }
  return make(Op::kAddRowBias, m.id_, bias_row.id_, std::move(out));
}

Var Tape::scale(Var a, double factor)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v *= factor;
  }
  return make(Op::kScale, a.id_, -1, std::move(out), factor);
}

Var Tape::add_const(Var a, double c)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v += c;
  }
  return make(Op::kAddConst, a.id_, -1, std::move(out), c);
}

Var Tape::neg(Var a)
{
  return scale(a, -1.0);
}

Var Tape::sigmoid(Var a)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v = 1.0 / (1.0 + std::exp(-v));
  }
  return make(Op::kSigmoid, a.id_, -1, std::move(out));
}

Var Tape::tanh(Var a)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v = std::tanh(v);
  }
  return make(Op::kTanh, a.id_, -1, std::move(out));
}

Var Tape::relu(Var a)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v = v > 0.0 ? v : 0.0;
  }
  return make(Op::kRelu, a.id_, -1, std::move(out));
}

Var Tape::exp(Var a)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v = std::exp(v);
  }
  return make(Op::kExp, a.id_, -1, std::move(out));
}

Var Tape::log(Var a, double eps)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v = std::log(v + eps);
  }
  return make(Op::kLog, a.id_, -1, std::move(out), eps);
}

Var Tape::softmax_rows(Var a)
{
  const Tensor & va = a.value();
  if (va.size() == 0 || va.cols() == 0) {
    throw DimensionError("softmax_rows: empty matrix");
  }
  Tensor out = va;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < out.cols(); ++c) {
      mx = std::max(mx, out.at(r, c));
    }
    double denom = 0.0;
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out.at(r, c) = std::exp(out.at(r, c) - mx);
      denom += out.at(r, c);
    }
    for (std::size_t c = 0; c < out.cols(); ++c) {
      out.at(r, c) /= denom;
    }
  }
  return make(Op::kSoftmaxRows, a.id_, -1, std::move(out));
}

Var Tape::concat_rows(const std::vector<Var> & parts)
{
  if (parts.empty()) {
    throw DimensionError("concat_rows: no operands");
  }
  const std::size_t cols = parts.front().value().cols();
  std::size_t rows = 0;
  for (const auto & p : parts) {
    if (p.value().cols() != cols) {
      throw DimensionError("concat_rows: column counts differ");
    }
    rows += p.value().rows();
  }
  Tensor out = matrix(rows, cols);
  std::size_t r0 = 0;
  for (const auto & p : parts) {
    const Tensor & v = p.value();
    std::copy(v.data(), v.data() + v.size(), out.data() + r0 * cols);
    r0 += v.rows();
  }
  Node n;
  n.op = Op::kConcatRows;
  n.value = std::move(out);
  n.extra_begin = extra_parents_.size();
  n.extra_count = parts.size();
  for (const auto & p : parts) {
    extra_parents_.push_back(p.id_);
  }
  return Var(this, push(std::move(n)));
}

Var Tape::concat_cols(const std::vector<Var> & parts)
{
  if (parts.empty()) {
    throw DimensionError("concat_cols: no operands");
  }
  const std::size_t rows = parts.front().value().rows();
  std::size_t cols = 0;
  for (const auto & p : parts) {
    if (p.value().rows() != rows) {
      throw DimensionError("concat_cols: row counts differ");
    }
    cols += p.value().cols();
  }
  Tensor out = matrix(rows, cols);
  std::size_t c0 = 0;
  for (const auto & p : parts) {
    const Tensor & v = p.value();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy(v.data() + r * v.cols(), v.data() + (r + 1) * v.cols(),
                out.data() + r * cols + c0);
    }
    c0 += v.cols();
  }
  Node n;
  n.op = Op::kConcatCols;
  n.value = std::move(out);
  n.extra_begin = extra_parents_.size();
  n.extra_count = parts.size();
  for (const auto & p : parts) {
    extra_parents_.push_back(p.id_);
  }
  return Var(this, push(std::move(n)));
}

Var Tape::slice_rows(Var a, std::size_t begin, std::size_t end)
{
  const Tensor & va = a.value();
  if (begin > end || end > va.rows()) {
    throw DimensionError("slice_rows: range out of bounds");
  }
  const std::size_t cols = va.cols();
  Tensor out = matrix(end - begin, cols);
  std::copy(va.data() + begin * cols, va.data() + end * cols, out.data());
  Var v = make(Op::kSliceRows, a.id_, -1, std::move(out));
  nodes_[v.id_].extra_begin = begin;
  return v;
}

Var Tape::gather_rows(Var a, std::vector<std::size_t> indices)
{
  const Tensor & va = a.value();
  const std::size_t cols = va.cols();
  Tensor out = matrix(indices.size(), cols);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= va.rows()) {
      throw DimensionError("gather_rows: index out of bounds");
    }
    std::copy(va.data() + indices[i] * cols, va.data() + (indices[i] + 1) * cols,
              out.data() + i * cols);
  }
  Var v = make(Op::kGatherRows, a.id_, -1, std::move(out));
  nodes_[v.id_].idx = std::move(indices);
  return v;
}

Var Tape::reshape(Var a, std::size_t rows, std::size_t cols)
{
  const Tensor & va = a.value();
  if (rows * cols != va.size()) {
    throw DimensionError("reshape: element count differs");
  }
  Tensor out = Tensor::unchecked({rows, cols}, va.values());
  return make(Op::kReshape, a.id_, -1, std::move(out));
}

Var Tape::sum(Var a)
{
  double s = 0.0;
  for (const double v : a.value().values()) {
    s += v;
  }
  return make(Op::kSum, a.id_, -1, Tensor::unchecked({1, 1}, {s}));
}

Var Tape::mean_rows(Var a)
{
  const Tensor & va = a.value();
  if (va.rows() == 0) {
    throw DimensionError("mean_rows: empty matrix");
  }
  Tensor out = matrix(1, va.cols());
  for (std::size_t r = 0; r < va.rows(); ++r) {
    for (std::size_t c = 0; c < va.cols(); ++c) {
      out[c] += va.at(r, c);
    }
  }
  for (auto & v : out.values()) {
    v /= static_cast<double>(va.rows());
  }
  return make(Op::kMeanRows, a.id_, -1, std::move(out));
}

Var Tape::max_rows(Var a)
{
  const Tensor & va = a.value();
  if (va.rows() == 0) {
    throw DimensionError("max_rows: empty matrix");
  }
  Tensor out = matrix(1, va.cols());
  std::vector<std::size_t> argmax(va.cols(), 0);
  for (std::size_t c = 0; c < va.cols(); ++c) {
    double best = va.at(0, c);
    for (std::size_t r = 1; r < va.rows(); ++r) {
      if (va.at(r, c) > best) {
        best = va.at(r, c);
        argmax[c] = r;
      }
    }
    out[c] = best;
  }
  Var v = make(Op::kMaxRows, a.id_, -1, std::move(out));
  nodes_[v.id_].idx = std::move(argmax);
  return v;
}

Var Tape::repeat_row(Var row, std::size_t n)
{
  const Tensor & vr = row.value();
  if (vr.rows() != 1) {
    throw DimensionError("repeat_row: operand must have one row");
  }
  Tensor out = matrix(n, vr.cols());
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(vr.data(), vr.data() + vr.cols(), out.data() + r * vr.cols());
  }
  return make(Op::kRepeatRow, row.id_, -1, std::move(out));
}

Var Tape::broadcast_col(Var col, std::size_t width)
{
  const Tensor & vc = col.value();
  if (vc.cols() != 1) {
    throw DimensionError("broadcast_col: operand must have one column");
  }
  Tensor out = matrix(vc.rows(), width);
  for (std::size_t r = 0; r < vc.rows(); ++r) {
    std::fill(out.data() + r * width, out.data() + (r + 1) * width, vc[r]);
  }
  return make(Op::kBroadcastCol, col.id_, -1, std::move(out));
}

Var Tape::mul_scalar_node(Var m, Var s)
{
  const Tensor & vs = s.value();
  if (vs.size() != 1) {
    throw DimensionError("mul_scalar_node: scale must be 1x1");
  }
  Tensor out = m.value();
  const double f = vs[0];
  for (auto & v : out.values()) {
    v *= f;
  }
  return make(Op::kMulScalarNode, m.id_, s.id_, std::move(out));
}

Var Tape::recip(Var a)
{
  Tensor out = a.value();
  for (auto & v : out.values()) {
    v = 1.0 / v;
  }
  return make(Op::kRecip, a.id_, -1, std::move(out));
}

Var Tape::huber_loss(Var pred, const Tensor & target, double delta)
{
  const Tensor & vp = pred.value();
  if (!vp.same_shape(target)) {
    throw DimensionError("huber_loss: prediction and target shapes differ");
  }
  if (vp.size() == 0) {
    throw DimensionError("huber_loss: empty operands");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < vp.size(); ++i) {
    const double e = std::abs(vp[i] - target[i]);
    total += e <= delta ? 0.5 * e * e : delta * (e - 0.5 * delta);
  }
  total /= static_cast<double>(vp.size());
  Var v = make(Op::kHuber, pred.id_, -1, Tensor::unchecked({1, 1}, {total}), delta);
  nodes_[v.id_].aux_tensor = target;
  return v;
}

void Tape::backward(Var loss)
{
  if (loss.tape_ != this) {
    throw ContractError("backward: loss belongs to a different tape");
  }
  if (loss.value().size() != 1) {
    throw ContractError("backward: loss must be a 1x1 scalar");
  }
  const int loss_id = loss.id_;
  for (int i = 0; i <= loss_id; ++i) {
    nodes_[i].grad = Tensor(nodes_[i].value.shape());
  }
  nodes_[loss_id].grad[0] = 1.0;

  for (int i = loss_id; i >= 0; --i) {
    Node & n = nodes_[i];
    const Tensor & g = n.grad;
    switch (n.op) {
      case Op::kLeaf:
        break;
      case Op::kMatmul: {
        Tensor & ga = nodes_[n.a].grad;
        Tensor & gb = nodes_[n.b].grad;
        map_of(ga).noalias() += map_of(g) * map_of(nodes_[n.b].value).transpose();
        map_of(gb).noalias() += map_of(nodes_[n.a].value).transpose() * map_of(g);
        break;
      }
      case Op::kMatmulNT: {
        Tensor & ga = nodes_[n.a].grad;
        Tensor & gb = nodes_[n.b].grad;
        map_of(ga).noalias() += map_of(g) * map_of(nodes_[n.b].value);
        map_of(gb).noalias() += map_of(g).transpose() * map_of(nodes_[n.a].value);
        break;
      }
      case Op::kAdd: {
        Tensor & ga = nodes_[n.a].grad;
        Tensor & gb = nodes_[n.b].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k];
          gb[k] += g[k];
        }
        break;
      }
      case Op::kSub: {
        Tensor & ga = nodes_[n.a].grad;
        Tensor & gb = nodes_[n.b].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k];
          gb[k] -= g[k];
        }
        break;
      }
      case Op::kMul: {
        Tensor & ga = nodes_[n.a].grad;
        Tensor & gb = nodes_[n.b].grad;
        const Tensor & va = nodes_[n.a].value;
        const Tensor & vb = nodes_[n.b].value;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k] * vb[k];
          gb[k] += g[k] * va[k];
        }
        break;
      }
      case Op::kAddRowBias: {
        Tensor & ga = nodes_[n.a].grad;
        Tensor & gb = nodes_[n.b].grad;
        const std::size_t cols = g.cols();
        for (std::size_t r = 0; r < g.rows(); ++r) {
          for (std::size_t c = 0; c < cols; ++c) {
            ga.at(r, c) += g.at(r, c);
            gb[c] += g.at(r, c);
          }
        }
        break;
      }
      case Op::kScale: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k] * n.aux;
        }
        break;
      }
      case Op::kAddConst: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k];
        }
        break;
      }
      case Op::kSigmoid: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double y = n.value[k];
          ga[k] += g[k] * y * (1.0 - y);
        }
        break;
      }
      case Op::kTanh: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double y = n.value[k];
          ga[k] += g[k] * (1.0 - y * y);
        }
        break;
      }
      case Op::kRelu: {
        Tensor & ga = nodes_[n.a].grad;
        const Tensor & va = nodes_[n.a].value;
        for (std::size_t k = 0; k < g.size(); ++k) {
          if (va[k] > 0.0) {
            ga[k] += g[k];
          }
        }
        break;
      }
      case Op::kExp: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k] * n.value[k];
        }
        break;
      }
      case Op::kLog: {
        Tensor & ga = nodes_[n.a].grad;
        const Tensor & va = nodes_[n.a].value;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k] / (va[k] + n.aux);
        }
        break;
      }
      case Op::kSoftmaxRows: {
        Tensor & ga = nodes_[n.a].grad;
        const std::size_t cols = g.cols();
        for (std::size_t r = 0; r < g.rows(); ++r) {
          double dot = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            dot += g.at(r, c) * n.value.at(r, c);
          }
          for (std::size_t c = 0; c < cols; ++c) {
            ga.at(r, c) += n.value.at(r, c) * (g.at(r, c) - dot);
          }
        }
        break;
      }
      case Op::kConcatRows: {
        std::size_t r0 = 0;
        const std::size_t cols = g.cols();
        for (std::size_t p = 0; p < n.extra_count; ++p) {
          Node & parent = nodes_[extra_parents_[n.extra_begin + p]];
          Tensor & gp = parent.grad;
          const std::size_t pr = parent.value.rows();
          for (std::size_t k = 0; k < pr * cols; ++k) {
            gp[k] += g.values()[r0 * cols + k];
          }
          r0 += pr;
        }
        break;
      }
      case Op::kConcatCols: {
        std::size_t c0 = 0;
        const std::size_t cols = g.cols();
        const std::size_t rows = g.rows();
        for (std::size_t p = 0; p < n.extra_count; ++p) {
          Node & parent = nodes_[extra_parents_[n.extra_begin + p]];
          Tensor & gp = parent.grad;
          const std::size_t pc = parent.value.cols();
          for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < pc; ++c) {
              gp.at(r, c) += g.values()[r * cols + c0 + c];
            }
          }
          c0 += pc;
        }
        break;
      }
      case Op::kSliceRows: {
        Tensor & ga = nodes_[n.a].grad;
        const std::size_t cols = g.cols();
        const std::size_t begin = n.extra_begin;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga.values()[begin * cols + k] += g.values()[k];
        }
        break;
      }
      case Op::kGatherRows: {
        Tensor & ga = nodes_[n.a].grad;
        const std::size_t cols = g.cols();
        for (std::size_t i2 = 0; i2 < n.idx.size(); ++i2) {
          for (std::size_t c = 0; c < cols; ++c) {
            ga.at(n.idx[i2], c) += g.at(i2, c);
          }
        }
        break;
      }
      case Op::kReshape: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k];
        }
        break;
      }
      case Op::kSum: {
        Tensor & ga = nodes_[n.a].grad;
        const double gv = g[0];
        for (auto & v : ga.values()) {
          v += gv;
        }
        break;
      }
      case Op::kMeanRows: {
        Tensor & ga = nodes_[n.a].grad;
        const double inv = 1.0 / static_cast<double>(ga.rows());
        for (std::size_t r = 0; r < ga.rows(); ++r) {
          for (std::size_t c = 0; c < ga.cols(); ++c) {
            ga.at(r, c) += g[c] * inv;
          }
        }
        break;
      }
      case Op::kMaxRows: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t c = 0; c < g.size(); ++c) {
          ga.at(n.idx[c], c) += g[c];
        }
        break;
      }
      case Op::kRepeatRow: {
        Tensor & ga = nodes_[n.a].grad;
        const std::size_t cols = g.cols();
        for (std::size_t r = 0; r < g.rows(); ++r) {
          for (std::size_t c = 0; c < cols; ++c) {
            ga[c] += g.at(r, c);
          }
        }
        break;
      }
      case Op::kBroadcastCol: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t r = 0; r < g.rows(); ++r) {
          double s = 0.0;
          for (std::size_t c = 0; c < g.cols(); ++c) {
            s += g.at(r, c);
          }
          ga[r] += s;
        }
        break;
      }
      case Op::kMulScalarNode: {
        Tensor & ga = nodes_[n.a].grad;
        Tensor & gb = nodes_[n.b].grad;
        const Tensor & va = nodes_[n.a].value;
        const double f = nodes_[n.b].value[0];
        double dot = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
          ga[k] += g[k] * f;
          dot += g[k] * va[k];
        }
        gb[0] += dot;
        break;
      }
      case Op::kRecip: {
        Tensor & ga = nodes_[n.a].grad;
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double y = n.value[k];
          ga[k] -= g[k] * y * y;
        }
        break;
      }
      case Op::kHuber: {
        Tensor & ga = nodes_[n.a].grad;
        const Tensor & vp = nodes_[n.a].value;
        const double gv = g[0] / static_cast<double>(vp.size());
        for (std::size_t k = 0; k < vp.size(); ++k) {
          const double e = vp[k] - n.aux_tensor[k];
          const double de = std::abs(e) <= n.aux ? e : (e > 0.0 ? n.aux : -n.aux);
          ga[k] += gv * de;
        }
        break;
      }
    }
  }

  if (store_ != nullptr) {
    store_->zero_grads();
    for (const auto & [id, name] : param_bindings_) {
      if (id > loss_id) {
        continue;  // created after the loss; cannot influence it
      }
      Tensor & slot = store_->grad(name);
      const Tensor & g = nodes_[id].grad;
      for (std::size_t k = 0; k < slot.size(); ++k) {
        slot[k] += g[k];
      }
    }
  }
}

}  // namespace prospectnet
