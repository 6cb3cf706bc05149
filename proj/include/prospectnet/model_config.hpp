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

#ifndef PROSPECTNET__MODEL_CONFIG_HPP_
#define PROSPECTNET__MODEL_CONFIG_HPP_

#include <cstddef>

#include "prospectnet/targets.hpp"

namespace prospectnet
{

/**
 * @brief Hyperparameters shared by the predictor stages.
 *
 * The trajectory heads are sized by horizon, so a trained checkpoint is tied
 * to the horizon it was created with. Target sampling during training uses
 * the embedded params; they default to a desk-scale count over the widest
 * studied range so property loops stay fast.
 */
struct ModelConfig
{
  std::size_t embed_dim = 32;    // E, token embedding width
  std::size_t gru_hidden = 32;   // candidate GRU state width
  std::size_t n_candidates = 16; // N, modes kept per agent
  std::size_t top_k = 6;         // K, pairs returned
  std::size_t q_stack = 1;       // stacked joint attention rounds
  double alpha = 1.0;            // score-distribution temperature, meters
  double nms_eps0 = 2.0;         // initial duplicate-rejection threshold
  double nms_gamma = 0.5;        // threshold decay factor
  double huber_delta = 1.0;
  double encode_radius = 50.0;   // map tokens within this range of the agent
  std::size_t max_map_tokens = 24;
  bool history_in_keys = true;   // include history tokens in joint keys/values
  std::size_t horizon = 30;      // T, future steps the heads regress
  double dt = 0.1;
  TargetParams targets{600, -200.0, 100.0, -150.0, 150.0, 160.0, 120.0};
};

/// Throws ConfigError on non-positive sizes or factors out of range.
void validate_config(const ModelConfig & config);

}  // namespace prospectnet

#endif  // PROSPECTNET__MODEL_CONFIG_HPP_
