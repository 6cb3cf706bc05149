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

#ifndef PROSPECTNET__TARGETS_HPP_
#define PROSPECTNET__TARGETS_HPP_

#include <array>
#include <cstdint>
#include <vector>

#include "prospectnet/scenario.hpp"

namespace prospectnet
{

/// Goal-sampling parameters. The shipped presets 1 through 14 cover the
/// studied combinations; preset 4 is the default.
struct TargetParams
{
  std::size_t n_targets = 10000;
  double x_min = -200.0;  // target range, agent frame, meters
  double x_max = 100.0;
  double y_min = -150.0;
  double y_max = 150.0;
  double lane_radius = 160.0;
  double object_radius = 120.0;
};

/// Throws ValidationError when a bound or count is out of order.
void validate_params(const TargetParams & params);

/// Preset by table number, 1 through 14. Throws ConfigError otherwise.
TargetParams preset_params(int preset);

/// Candidate goal points in the agent frame.
struct TargetSet
{
  std::vector<Vec2> points;
  TargetParams params;
  bool warning = false;  // no candidate lanes, or every candidate filtered out
};

/**
 * @brief Samples goal candidates around one agent.
 *
 * Lane centerlines with any point within lane_radius of the frame origin are
 * resampled on a 1 m arclength grid; each grid point spawns five laterally
 * offset candidates at {-2,-1,0,+1,+2} m. Candidates are mapped into the
 * agent frame and kept when inside the target range. A candidate is dropped
 * when it lies within 1 m of another agent's current center and that agent is
 * within object_radius of the origin. When more than n_targets survive, a
 * seeded uniform thinning keeps exactly n_targets in grid order. Output is
 * invariant under map polyline re-ordering.
 */
TargetSet sample_targets(
  const std::vector<MapPolyline> & map, const Frame & frame, const TargetParams & params,
  const std::vector<Vec2> & other_agent_centers, std::uint64_t seed);

/// Distance from the ground-truth endpoint (agent frame) to the closest
/// target. Throws ContractError on an empty set.
double best_mode_displacement(const TargetSet & targets, const Vec2 & gt_endpoint);

struct BmdStats
{
  double mean = 0.0;
  double median = 0.0;
  double p75 = 0.0;
  double p90 = 0.0;
};

/// Quantile with linear interpolation between closest ranks; q in [0, 1].
double percentile(std::vector<double> values, double q);

BmdStats bmd_stats(const std::vector<double> & values);

/**
 * Per-params BMD statistics over scenarios, one entry per parameter set and
 * one BmdStats per agent of the interactive pair (the two id-sorted
 * predictable agents).
 */
std::vector<std::array<BmdStats, 2>> bmd_report(
  const std::vector<Scenario> & scenarios, const std::vector<TargetParams> & params_list,
  std::uint64_t seed);

}  // namespace prospectnet

#endif  // PROSPECTNET__TARGETS_HPP_
