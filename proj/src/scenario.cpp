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

#include "prospectnet/scenario.hpp"

#include <cmath>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

const char * to_string(PolylineKind kind)
{
  switch (kind) {
    case PolylineKind::kLaneCenterline:
      return "lane_centerline";
    case PolylineKind::kBoundary:
      return "boundary";
    case PolylineKind::kCrosswalk:
      return "crosswalk";
  }
  throw ValidationError("unhandled polyline kind");
}

PolylineKind polyline_kind_from_string(const std::string & name)
{
  if (name == "lane_centerline") {
    return PolylineKind::kLaneCenterline;
  }
  if (name == "boundary") {
    return PolylineKind::kBoundary;
  }
  if (name == "crosswalk") {
    return PolylineKind::kCrosswalk;
  }
  throw ParseError("unknown polyline kind '" + name + "'");
}

void validate_scenario(const Scenario & scenario)
{
  if (scenario.id.empty()) {
    throw ValidationError("scenario id must be non-empty");
  }
  if (scenario.history_len == 0 || scenario.horizon == 0) {
    throw ValidationError("scenario '" + scenario.id + "': history and horizon must be positive");
  }
  const std::size_t steps = scenario.steps();
  for (const AgentTrack & track : scenario.tracks) {
    const std::string where = "scenario '" + scenario.id + "' track '" + track.agent_id + "'";
    if (track.agent_id.empty()) {
      throw ValidationError("scenario '" + scenario.id + "': track with empty agent id");
    }
    if (track.positions.size() != track.headings.size() ||
        track.positions.size() != track.valid.size()) {
      throw ValidationError(where + ": positions, headings and mask lengths differ");
    }
    if (track.positions.size() != steps) {
      throw ValidationError(
        where + ": track length " + std::to_string(track.positions.size()) +
        " does not equal history + horizon = " + std::to_string(steps));
    }
    if (!(track.length > 0.0) || !(track.width > 0.0)) {
      throw ValidationError(where + ": length and width must be positive");
    }
    for (std::size_t t = 0; t < steps; ++t) {
      if (!std::isfinite(track.positions[t].x) || !std::isfinite(track.positions[t].y) ||
          !std::isfinite(track.headings[t])) {
        throw ValidationError(where + ": non-finite value at timestep " + std::to_string(t));
      }
    }
  }
  for (const MapPolyline & line : scenario.map) {
    const std::string where = "scenario '" + scenario.id + "' polyline '" + line.polyline_id + "'";
    if (line.points.size() < 2) {
      throw ValidationError(where + ": needs at least two points");
    }
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      if (!std::isfinite(line.points[i].x) || !std::isfinite(line.points[i].y)) {
        throw ValidationError(where + ": non-finite point");
      }
      if (i > 0 && line.points[i] == line.points[i - 1]) {
        throw ValidationError(where + ": consecutive duplicate point at index " +
                              std::to_string(i));
      }
    }
  }
}

const AgentTrack & find_track(const Scenario & scenario, const std::string & agent_id)
{
  for (const AgentTrack & track : scenario.tracks) {
    if (track.agent_id == agent_id) {
      return track;
    }
  }
  throw NotFoundError("agent '" + agent_id + "' not in scenario '" + scenario.id + "'");
}

std::vector<std::string> predictable_ids(const Scenario & scenario)
{
  std::vector<std::string> ids;
  for (const AgentTrack & track : scenario.tracks) {
    if (track.is_predictable) {
      ids.push_back(track.agent_id);
    }
  }
  return ids;
}

Frame agent_frame(const AgentTrack & track, std::size_t history_len)
{
  if (history_len == 0 || history_len > track.positions.size()) {
    throw ContractError("agent frame: history length out of range");
  }
  const std::size_t t = history_len - 1;
  return Frame{track.positions[t], normalize_angle(track.headings[t])};
}

double current_speed(const AgentTrack & track, std::size_t history_len, double dt)
{
  if (history_len < 2 || history_len > track.positions.size() || dt <= 0.0) {
    throw ContractError("current speed: bad history length or dt");
  }
  return distance(track.positions[history_len - 1], track.positions[history_len - 2]) / dt;
}

std::vector<Vec2> future_positions(const AgentTrack & track, std::size_t history_len)
{
  if (history_len > track.positions.size()) {
    throw ContractError("future positions: history length out of range");
  }
  return {track.positions.begin() + static_cast<std::ptrdiff_t>(history_len),
          track.positions.end()};
}

}  // namespace prospectnet
