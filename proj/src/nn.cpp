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

#include "prospectnet/nn.hpp"

#include <cmath>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

Tensor softmax_rows(const Tensor & m)
{
  Tape tape;
  return tape.softmax_rows(tape.constant(m)).value();
}

void init_gru(
  ParameterStore & store, const std::string & prefix, std::size_t input_dim,
  std::size_t hidden_dim, std::mt19937_64 & rng)
{
  for (const char * gate : {"z", "r", "c"}) {
    store.create_glorot(prefix + ".w" + gate, input_dim, hidden_dim, rng);
    store.create_glorot(prefix + ".u" + gate, hidden_dim, hidden_dim, rng);
    store.create(prefix + ".b" + gate, Tensor::zeros(1, hidden_dim));
  }
}

GruVars gru_vars(Tape & tape, const std::string & prefix)
{
  GruVars p;
  p.wz = tape.param(prefix + ".wz");
  p.uz = tape.param(prefix + ".uz");
  p.bz = tape.param(prefix + ".bz");
  p.wr = tape.param(prefix + ".wr");
  p.ur = tape.param(prefix + ".ur");
  p.br = tape.param(prefix + ".br");
  p.wc = tape.param(prefix + ".wc");
  p.uc = tape.param(prefix + ".uc");
  p.bc = tape.param(prefix + ".bc");
  return p;
}

Var gru_step(Tape & tape, Var x, Var h, const GruVars & p)
{
  if (x.value().cols() != p.wz.value().rows() || h.value().cols() != p.uz.value().rows() ||
      x.value().rows() != h.value().rows()) {
    throw DimensionError("gru_step: input/state shapes do not match parameters");
  }
  const Var z = tape.sigmoid(
    tape.add_row_bias(tape.add(tape.matmul(x, p.wz), tape.matmul(h, p.uz)), p.bz));
  const Var r = tape.sigmoid(
    tape.add_row_bias(tape.add(tape.matmul(x, p.wr), tape.matmul(h, p.ur)), p.br));
  const Var c = tape.tanh(
    tape.add_row_bias(tape.add(tape.matmul(x, p.wc), tape.matmul(tape.mul(r, h), p.uc)), p.bc));
  // h' = z*h + (1-z)*c
  const Var keep = tape.mul(z, h);
  const Var ones = tape.constant(Tensor::full(z.rows(), z.cols(), 1.0));
  const Var blend = tape.mul(tape.sub(ones, z), c);
  return tape.add(keep, blend);
}

Tensor gru_step(
  const Tensor & x, const Tensor & h, ParameterStore & store, const std::string & prefix)
{
  Tape tape(&store);
  return gru_step(tape, tape.constant(x), tape.constant(h), gru_vars(tape, prefix)).value();
}

void init_mlp2(
  ParameterStore & store, const std::string & prefix, std::size_t input_dim,
  std::size_t hidden_dim, std::size_t output_dim, std::mt19937_64 & rng)
{
  store.create_glorot(prefix + ".w1", input_dim, hidden_dim, rng);
  store.create(prefix + ".b1", Tensor::zeros(1, hidden_dim));
  store.create_glorot(prefix + ".w2", hidden_dim, output_dim, rng);
  store.create(prefix + ".b2", Tensor::zeros(1, output_dim));
}

MlpVars mlp2_vars(Tape & tape, const std::string & prefix)
{
  MlpVars p;
  p.w1 = tape.param(prefix + ".w1");
  p.b1 = tape.param(prefix + ".b1");
  p.w2 = tape.param(prefix + ".w2");
  p.b2 = tape.param(prefix + ".b2");
  return p;
}

Var mlp2(Tape & tape, Var x, const MlpVars & p)
{
  if (x.value().cols() != p.w1.value().rows()) {
    throw DimensionError("mlp2: input width does not match first layer");
  }
  const Var hidden = tape.relu(tape.add_row_bias(tape.matmul(x, p.w1), p.b1));
  return tape.add_row_bias(tape.matmul(hidden, p.w2), p.b2);
}

Tensor mlp2(const Tensor & x, ParameterStore & store, const std::string & prefix)
{
  Tape tape(&store);
  return mlp2(tape, tape.constant(x), mlp2_vars(tape, prefix)).value();
}

Var cross_entropy(Tape & tape, Var pred_probs, const Tensor & target_probs, double eps)
{
  if (!pred_probs.value().same_shape(target_probs)) {
    throw DimensionError("cross_entropy: distribution shapes differ");
  }
  const Var log_pred = tape.log(pred_probs, eps);
  const Var weighted = tape.mul(log_pred, tape.constant(target_probs));
  return tape.neg(tape.sum(weighted));
}

void AdamOptimizer::step(ParameterStore & store)
{
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (const auto & name : store.names()) {
    Tensor & value = store.value(name);
    const Tensor & grad = store.grad(name);
    auto [it, inserted] = slots_.try_emplace(name);
    if (inserted || !it->second.m.same_shape(value)) {
      it->second.m = Tensor(value.shape());
      it->second.v = Tensor(value.shape());
    }
    Tensor & m = it->second.m;
    Tensor & v = it->second.v;
    for (std::size_t k = 0; k < value.size(); ++k) {
      m[k] = beta1_ * m[k] + (1.0 - beta1_) * grad[k];
      v[k] = beta2_ * v[k] + (1.0 - beta2_) * grad[k] * grad[k];
      const double mhat = m[k] / bc1;
      const double vhat = v[k] / bc2;
      value[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
  }
}

}  // namespace prospectnet
