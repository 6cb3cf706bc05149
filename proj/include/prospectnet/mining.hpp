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

#ifndef PROSPECTNET__MINING_HPP_
#define PROSPECTNET__MINING_HPP_

#include <string>
#include <utility>
#include <vector>

#include "prospectnet/scenario.hpp"

namespace prospectnet
{

/**
 * @brief Interactive agent pairs of one scenario.
 *
 * A pair of predictable agents is interactive when the minimum Euclidean
 * distance between their ground-truth future positions, over timesteps where
 * both masks are valid, is strictly below the threshold. Pairs come back
 * id-sorted within each pair and lexicographically overall. Fewer than two
 * predictable agents give an empty list.
 */
std::vector<std::pair<std::string, std::string>> mine_interactive_pairs(
  const Scenario & scenario, double threshold);

/// Minimum future ground-truth distance between two tracks at co-valid
/// timesteps; +inf when no timestep qualifies.
double min_future_distance(
  const AgentTrack & a, const AgentTrack & b, std::size_t history_len);

}  // namespace prospectnet

#endif  // PROSPECTNET__MINING_HPP_
