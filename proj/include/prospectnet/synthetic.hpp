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

#ifndef PROSPECTNET__SYNTHETIC_HPP_
#define PROSPECTNET__SYNTHETIC_HPP_

#include <cstdint>
#include <string>

#include "prospectnet/scenario.hpp"

namespace prospectnet
{

enum class ScenarioKind { kYieldTurn, kMerge, kFollow, kTwoLeftTurns };

/// Accepts "yield_turn", "merge", "follow", "two_left_turns".
/// Throws ConfigError otherwise.
ScenarioKind scenario_kind_from_string(const std::string & name);
const char * to_string(ScenarioKind kind);

struct SyntheticParams
{
  std::size_t history_len = 10;
  std::size_t horizon = 30;
  double dt = 0.1;                    // seconds per timestep
  double speed_noise = 0.08;          // relative jitter on nominal speeds
  double offset_noise = 0.25;         // meters of lateral lane jitter
  std::size_t background_agents = 0;  // extra non-predictable vehicles
};

/**
 * @brief Generates one interactive two-vehicle scene of the given kind.
 *
 * Agents "A" and "B" are predictable and their ground-truth futures are
 * placed, by construction, within 4.6 to 4.8 meters of each other at one
 * future timestep while never overlapping. Lane centerlines match the
 * driven maneuvers. Identical (kind, seed, params) give identical scenes.
 */
Scenario generate_synthetic(
  ScenarioKind kind, std::uint64_t seed, const SyntheticParams & params = {});

}  // namespace prospectnet

#endif  // PROSPECTNET__SYNTHETIC_HPP_
