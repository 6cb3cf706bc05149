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

#ifndef PROSPECTNET__PARAM_STORE_HPP_
#define PROSPECTNET__PARAM_STORE_HPP_

#include <map>
#include <random>
#include <string>
#include <vector>

#include "prospectnet/tensor.hpp"

namespace prospectnet
{

/**
 * @brief Named trainable tensors with matching gradient slots.
 *
 * Names are unique and iteration is always in lexicographic name order, so
 * checkpoints and optimizer sweeps are reproducible byte for byte.
 */
class ParameterStore
{
public:
  /// Registers a parameter. Throws ValidationError if the name exists.
  Tensor & create(const std::string & name, Tensor init);

  bool has(const std::string & name) const { return entries_.count(name) != 0; }
  Tensor & value(const std::string & name);
  const Tensor & value(const std::string & name) const;
  Tensor & grad(const std::string & name);
  const Tensor & grad(const std::string & name) const;

  /// Names in lexicographic order.
  std::vector<std::string> names() const;
  std::size_t size() const { return entries_.size(); }
  /// Total scalar count across all parameters.
  std::size_t scalar_count() const;

  void zero_grads();

  /// Glorot-uniform weight matrix: +-sqrt(6 / (fan_in + fan_out)).
  Tensor & create_glorot(
    const std::string & name, std::size_t fan_in, std::size_t fan_out, std::mt19937_64 & rng);

  /// Binary checkpoint with the "PNCKPT01" magic. Each record is
  /// u64 name length, name bytes, u64 rank, u64 dims, float64 payload,
  /// all little-endian, parameters in name order.
  void save(const std::string & path) const;
  /// Replaces the store contents from a checkpoint file.
  void load(const std::string & path);

private:
  struct Entry
  {
    Tensor value;
    Tensor grad;
  };
  std::map<std::string, Entry> entries_;
};

}  // namespace prospectnet

#endif  // PROSPECTNET__PARAM_STORE_HPP_
