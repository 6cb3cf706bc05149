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

#include "prospectnet/targets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "prospectnet/errors.hpp"
#include "prospectnet/mining.hpp"
#include "prospectnet/path.hpp"

namespace prospectnet
{

namespace
{

constexpr double kArcStep = 1.0;
constexpr std::array<double, 5> kLateralOffsets{-2.0, -1.0, 0.0, 1.0, 2.0};
constexpr double kObjectClearance = 1.0;

}  // namespace

void validate_params(const TargetParams & params)
{
  if (params.n_targets == 0) {
    throw ValidationError("target params: n_targets must be positive");
  }
  if (!(params.x_min < params.x_max) || !(params.y_min < params.y_max)) {
    throw ValidationError("target params: range bounds out of order");
  }
  if (!(params.lane_radius > 0.0) || !(params.object_radius > 0.0)) {
    throw ValidationError("target params: radii must be positive");
  }
}

TargetParams preset_params(int preset)
{
  // Columns: n_targets, x_min, x_max, y_min, y_max, lane_radius, object_radius.
  struct Row
  {
    std::size_t n;
    double x0, x1, y0, y1, lane, object;
  };
  static constexpr std::array<Row, 14> kPresets{{
    {8000, -100.0, 50.0, -80.0, 80.0, 80.0, 60.0},
    {8000, -150.0, 100.0, -100.0, 100.0, 160.0, 120.0},
    {8000, -200.0, 100.0, -150.0, 150.0, 160.0, 120.0},
    {10000, -200.0, 100.0, -150.0, 150.0, 160.0, 120.0},
    {6000, -150.0, 100.0, -100.0, 100.0, 120.0, 100.0},
    {8000, -300.0, 200.0, -200.0, 200.0, 200.0, 200.0},
    {6000, -200.0, 100.0, -150.0, 150.0, 100.0, 100.0},
    {6000, -200.0, 100.0, -150.0, 150.0, 160.0, 120.0},
    {10000, -200.0, 100.0, -100.0, 100.0, 160.0, 120.0},
    {12000, -200.0, 100.0, -150.0, 150.0, 140.0, 100.0},
    {12000, -200.0, 100.0, -100.0, 100.0, 160.0, 120.0},
    {12000, -200.0, 100.0, -100.0, 100.0, 200.0, 200.0},
    {16000, -200.0, 100.0, -100.0, 100.0, 200.0, 200.0},
    {20000, -200.0, 100.0, -100.0, 100.0, 200.0, 200.0},
  }};
  if (preset < 1 || preset > static_cast<int>(kPresets.size())) {
    throw ConfigError("target preset must be between 1 and 14, got " + std::to_string(preset));
  }
  const Row & r = kPresets[static_cast<std::size_t>(preset - 1)];
  return TargetParams{r.n, r.x0, r.x1, r.y0, r.y1, r.lane, r.object};
}

TargetSet sample_targets(
  const std::vector<MapPolyline> & map, const Frame & frame, const TargetParams & params,
  const std::vector<Vec2> & other_agent_centers, std::uint64_t seed)
{
  validate_params(params);

  std::vector<const MapPolyline *> lanes;
  for (const MapPolyline & line : map) {
    if (line.kind != PolylineKind::kLaneCenterline) {
      continue;
    }
    const bool in_radius = std::any_of(
      line.points.begin(), line.points.end(),
      [&](const Vec2 & p) { return distance(p, frame.origin) <= params.lane_radius; });
    if (in_radius) {
      lanes.push_back(&line);
    }
  }
  std::sort(lanes.begin(), lanes.end(), [](const MapPolyline * a, const MapPolyline * b) {
    return a->polyline_id < b->polyline_id;
  });

  TargetSet out;
  out.params = params;
  if (lanes.empty()) {
    out.warning = true;
    return out;
  }

  std::vector<Vec2> blockers;
  for (const Vec2 & center : other_agent_centers) {
    if (distance(center, frame.origin) <= params.object_radius) {
      blockers.push_back(center);
    }
  }

  for (const MapPolyline * lane : lanes) {
    const Path path(lane->points);
    for (double s = 0.0; s <= path.length(); s += kArcStep) {
      const Vec2 base = path.position(s);
      const double heading = path.heading(s);
      const Vec2 normal{-std::sin(heading), std::cos(heading)};
      for (const double offset : kLateralOffsets) {
        const Vec2 world = base + normal * offset;
        const Vec2 local = to_frame(world, frame);
        if (local.x < params.x_min || local.x > params.x_max || local.y < params.y_min ||
            local.y > params.y_max) {
          continue;
        }
        const bool blocked = std::any_of(blockers.begin(), blockers.end(), [&](const Vec2 & c) {
          return distance(world, c) < kObjectClearance;
        });
        if (!blocked) {
          out.points.push_back(local);
        }
      }
    }
  }

  if (out.points.size() > params.n_targets) {
    std::vector<std::size_t> order(out.points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(params.n_targets);
    std::sort(order.begin(), order.end());
    std::vector<Vec2> kept;
    kept.reserve(params.n_targets);
    for (const std::size_t i : order) {
      kept.push_back(out.points[i]);
    }
    out.points = std::move(kept);
  }
  out.warning = out.warning || out.points.empty();
  return out;
}

double best_mode_displacement(const TargetSet & targets, const Vec2 & gt_endpoint)
{
  if (targets.points.empty()) {
    throw ContractError("best mode displacement is undefined for an empty target set");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2 & p : targets.points) {
    best = std::min(best, distance(p, gt_endpoint));
  }
  return best;
}

double percentile(std::vector<double> values, double q)
{
  if (values.empty()) {
    throw ContractError("percentile of an empty list");
  }
  if (q < 0.0 || q > 1.0) {
    throw ContractError("percentile fraction outside [0, 1]");
  }
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
  const double frac = h - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

BmdStats bmd_stats(const std::vector<double> & values)
{
  if (values.empty()) {
    throw ContractError("bmd stats of an empty list");
  }
  BmdStats stats;
  stats.mean = std::accumulate(values.begin(), values.end(), 0.0) /
               static_cast<double>(values.size());
  stats.median = percentile(values, 0.5);
  stats.p75 = percentile(values, 0.75);
  stats.p90 = percentile(values, 0.9);
  return stats;
}

std::vector<std::array<BmdStats, 2>> bmd_report(
  const std::vector<Scenario> & scenarios, const std::vector<TargetParams> & params_list,
  std::uint64_t seed)
{
  if (scenarios.empty()) {
    throw ContractError("bmd report needs at least one scenario");
  }
  std::vector<std::array<BmdStats, 2>> report;
  report.reserve(params_list.size());
  for (const TargetParams & params : params_list) {
    std::array<std::vector<double>, 2> bmds;
    for (std::size_t si = 0; si < scenarios.size(); ++si) {
      const Scenario & scenario = scenarios[si];
      std::vector<std::string> ids = predictable_ids(scenario);
      std::sort(ids.begin(), ids.end());
      if (ids.size() < 2) {
        throw ContractError("bmd report: scenario '" + scenario.id + "' lacks a pair");
      }
      for (std::size_t ai = 0; ai < 2; ++ai) {
        const AgentTrack & track = find_track(scenario, ids[ai]);
        const Frame frame = agent_frame(track, scenario.history_len);
        std::vector<Vec2> others;
        for (const AgentTrack & t : scenario.tracks) {
          if (t.agent_id != track.agent_id) {
            others.push_back(t.positions[scenario.history_len - 1]);
          }
        }
        const TargetSet targets =
          sample_targets(scenario.map, frame, params, others, seed + si * 2 + ai);
        const Vec2 endpoint = to_frame(track.positions.back(), frame);
        bmds[ai].push_back(best_mode_displacement(targets, endpoint));
      }
    }
    report.push_back({bmd_stats(bmds[0]), bmd_stats(bmds[1])});
  }
  return report;
}

}  // namespace prospectnet
