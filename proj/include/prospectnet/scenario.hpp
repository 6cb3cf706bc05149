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

#ifndef PROSPECTNET__SCENARIO_HPP_
#define PROSPECTNET__SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "prospectnet/geometry.hpp"

namespace prospectnet
{

/// One agent's observed track over the scenario's shared timestamp grid.
struct AgentTrack
{
  std::string agent_id;
  std::vector<Vec2> positions;
  std::vector<double> headings;        // radians, one per timestep
  std::vector<std::uint8_t> valid;     // 1 where the observation exists
  double length = 4.5;                 // bounding box, meters
  double width = 2.0;
  bool is_predictable = false;
};

enum class PolylineKind { kLaneCenterline, kBoundary, kCrosswalk };

const char * to_string(PolylineKind kind);
/// Throws ParseError on an unknown name.
PolylineKind polyline_kind_from_string(const std::string & name);

struct MapPolyline
{
  std::string polyline_id;
  std::vector<Vec2> points;
  PolylineKind kind = PolylineKind::kLaneCenterline;
};

/**
 * @brief One scene: a shared timestamp grid split into history and future,
 * the agent tracks on it, and the map polylines around them.
 *
 * Timesteps 0 .. history_len-1 are observed history; the remaining horizon
 * steps are the prediction window. Scenarios are immutable after load and
 * safe to share across threads.
 */
struct Scenario
{
  std::string id;
  std::size_t history_len = 10;
  std::size_t horizon = 30;
  std::vector<AgentTrack> tracks;
  std::vector<MapPolyline> map;

  std::size_t steps() const { return history_len + horizon; }
};

/// One candidate joint future for an agent pair.
struct PairPrediction
{
  std::vector<Vec2> traj_a;  // horizon x 2, world frame
  std::vector<Vec2> traj_b;
  double score = 0.0;            // probability in [0, 1]
  std::size_t source_index = 0;  // flat broadcast index; not serialized
};

/// Score-sorted pair candidates for one scenario.
struct PredictionRecord
{
  std::string scenario_id;
  std::string agent_a;
  std::string agent_b;
  std::vector<PairPrediction> pairs;
};

/// Throws ValidationError on any violated invariant: empty id, track arrays
/// of unequal length, track length differing from history_len + horizon,
/// non-positive shapes, non-finite values, or degenerate polylines.
void validate_scenario(const Scenario & scenario);

/// Track lookup by id. Throws NotFoundError.
const AgentTrack & find_track(const Scenario & scenario, const std::string & agent_id);

/// Ids of predictable tracks in file order.
std::vector<std::string> predictable_ids(const Scenario & scenario);

/// Agent-centric frame: origin and heading at the last history timestep.
Frame agent_frame(const AgentTrack & track, std::size_t history_len);

/// Speed at the last history step from the position delta, meters per second.
double current_speed(const AgentTrack & track, std::size_t history_len, double dt);

/// Ground-truth future positions (timesteps >= history_len), world frame.
std::vector<Vec2> future_positions(const AgentTrack & track, std::size_t history_len);

}  // namespace prospectnet

#endif  // PROSPECTNET__SCENARIO_HPP_
