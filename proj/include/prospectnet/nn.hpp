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

#ifndef PROSPECTNET__NN_HPP_
#define PROSPECTNET__NN_HPP_

#include <random>
#include <string>

#include "prospectnet/autodiff.hpp"
#include "prospectnet/param_store.hpp"
#include "prospectnet/tensor.hpp"

namespace prospectnet
{

/// Row-wise softmax on a plain matrix. Throws DimensionError on an empty one.
Tensor softmax_rows(const Tensor & m);

/// Gated recurrent unit parameters bound to one tape. Gate order is
/// update (z), reset (r), candidate (c); the reset gate multiplies the
/// previous state before the candidate projection.
struct GruVars
{
  Var wz, uz, bz;
  Var wr, ur, br;
  Var wc, uc, bc;
};

/// Registers GRU weights named "<prefix>.{wz,uz,bz,...}" in the store.
/// Weight matrices are Glorot-uniform, biases zero.
void init_gru(
  ParameterStore & store, const std::string & prefix, std::size_t input_dim,
  std::size_t hidden_dim, std::mt19937_64 & rng);

GruVars gru_vars(Tape & tape, const std::string & prefix);

/// One GRU step. x is rows x input_dim, h is rows x hidden_dim (each row an
/// independent sequence). Update gate at one keeps the previous state.
Var gru_step(Tape & tape, Var x, Var h, const GruVars & p);

/// Value-level convenience over a throwaway tape.
Tensor gru_step(
  const Tensor & x, const Tensor & h, ParameterStore & store, const std::string & prefix);

/// Two-layer perceptron: affine, ReLU, affine.
struct MlpVars
{
  Var w1, b1;
  Var w2, b2;
};

void init_mlp2(
  ParameterStore & store, const std::string & prefix, std::size_t input_dim,
  std::size_t hidden_dim, std::size_t output_dim, std::mt19937_64 & rng);

MlpVars mlp2_vars(Tape & tape, const std::string & prefix);

Var mlp2(Tape & tape, Var x, const MlpVars & p);

Tensor mlp2(const Tensor & x, ParameterStore & store, const std::string & prefix);

/// Cross entropy -sum(target * log(pred + eps)) over a probability row.
Var cross_entropy(Tape & tape, Var pred_probs, const Tensor & target_probs, double eps = 1e-12);

/**
 * @brief Adam optimizer over a ParameterStore.
 *
 * Moment slots are keyed by parameter name and survive checkpoint reloads of
 * identical shapes.
 */
class AdamOptimizer
{
public:
  explicit AdamOptimizer(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                         double eps = 1e-8)
  : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps)
  {
  }

  /// Applies one update from the store's current gradients.
  void step(ParameterStore & store);

  void set_lr(double lr) { lr_ = lr; }
  double lr() const { return lr_; }

private:
  struct Slot
  {
    Tensor m;
    Tensor v;
  };
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::map<std::string, Slot> slots_;
};

}  // namespace prospectnet

#endif  // PROSPECTNET__NN_HPP_
