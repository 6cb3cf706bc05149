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

#include "prospectnet/synthetic.hpp"

#include <cmath>
#include <random>

#include "prospectnet/errors.hpp"
#include "prospectnet/path.hpp"

namespace prospectnet
{

namespace
{

constexpr double kCarLength = 4.2;
constexpr double kCarWidth = 1.9;

struct AgentPlan
{
  Path path = Path({{0.0, 0.0}, {1.0, 0.0}});  // placeholder until drafted
  double s0 = 0.0;                             // arclength at timestep 0
  double v = 0.0;                              // meters per second, constant
};

AgentTrack make_track(
  std::string id, const AgentPlan & plan, std::size_t steps, double dt, double length,
  double width, bool predictable)
{
  AgentTrack track;
  track.agent_id = std::move(id);
  track.length = length;
  track.width = width;
  track.is_predictable = predictable;
  track.positions.reserve(steps);
  track.headings.reserve(steps);
  track.valid.assign(steps, 1);
  for (std::size_t t = 0; t < steps; ++t) {
    const double s = plan.s0 + plan.v * static_cast<double>(t) * dt;
    track.positions.push_back(plan.path.position(s));
    track.headings.push_back(plan.path.heading(s));
  }
  return track;
}

MapPolyline centerline(std::string id, const Path & path)
{
  return MapPolyline{std::move(id), path.resample(2.0), PolylineKind::kLaneCenterline};
}

MapPolyline straight(std::string id, Vec2 a, Vec2 b, PolylineKind kind)
{
  return MapPolyline{std::move(id), Path({a, b}).resample(2.0), kind};
}

double path_distance(const Path & path, const Vec2 & p)
{
  return distance(p, path.position(path.nearest_arclength(p)));
}

/// Smallest arclength s >= s_lo with |path(s) - p| = gap, assuming the
/// distance starts below gap at s_lo and grows past it within 30 m.
double arclength_at_gap(const Path & path, double s_lo, const Vec2 & p, double gap)
{
  if (distance(path.position(s_lo), p) >= gap) {
    throw ContractError("conflict anchor already beyond the requested gap");
  }
  double lo = s_lo;
  double hi = s_lo;
  bool found = false;
  for (double s = s_lo + 0.1; s <= s_lo + 30.0; s += 0.1) {
    if (distance(path.position(s), p) >= gap) {
      hi = s;
      found = true;
      break;
    }
    lo = s;
  }
  if (!found) {
    throw ContractError("no arclength reaches the requested gap");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (distance(path.position(mid), p) < gap ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// First arclength on `follower` whose point comes within `thresh` of
/// `leader`'s curve.
double first_close_arclength(const Path & follower, const Path & leader, double thresh)
{
  for (double s = 0.0; s <= follower.length(); s += 0.1) {
    if (path_distance(leader, follower.position(s)) < thresh) {
      return s;
    }
  }
  throw ContractError("paths never come close enough for a conflict");
}

struct SceneDraft
{
  AgentPlan plan_a;
  AgentPlan plan_b;
  std::vector<MapPolyline> map;
  Path bg_lane = Path({{0.0, 0.0}, {1.0, 0.0}});
  double bg_s0 = 0.0;
  double bg_spacing = 12.0;
};

/// Picks speeds and start arclengths so the pair's Euclidean gap equals
/// `gap` exactly at timestep t_star, with agent A ahead of the anchor point.
void solve_conflict(
  SceneDraft & draft, const Vec2 & anchor_b, double s_b_star, double gap, std::size_t t_star,
  double dt)
{
  const double s_a_lo = draft.plan_a.path.nearest_arclength(anchor_b);
  const double s_a_star = arclength_at_gap(draft.plan_a.path, s_a_lo, anchor_b, gap);
  const double t_sec = static_cast<double>(t_star) * dt;
  draft.plan_a.s0 = s_a_star - draft.plan_a.v * t_sec;
  draft.plan_b.s0 = s_b_star - draft.plan_b.v * t_sec;
}

using Draw = std::uniform_real_distribution<double>;

/// Same-lane leader/follower closing to the target gap at the last step.
SceneDraft draft_follow(std::mt19937_64 & rng, const SyntheticParams & p)
{
  Draw u(-1.0, 1.0);
  const double off_a = p.offset_noise * u(rng);
  const double off_b = p.offset_noise * u(rng);
  SceneDraft d;
  d.plan_a.path = Path({{-60.0, off_a}, {130.0, off_a}});
  d.plan_b.path = Path({{-60.0, off_b}, {130.0, off_b}});
  d.plan_a.v = 8.0 * (1.0 + p.speed_noise * u(rng));
  d.plan_b.v = d.plan_a.v + 1.2 + 0.4 * u(rng);

  const double x_anchor = 18.0 + 3.0 * u(rng);
  const Vec2 anchor = d.plan_b.path.position(d.plan_b.path.nearest_arclength({x_anchor, off_b}));
  const double gap = 4.7 + 0.1 * u(rng);
  const std::size_t t_star = p.history_len + p.horizon - 1;
  solve_conflict(d, anchor, d.plan_b.path.nearest_arclength(anchor), gap, t_star, p.dt);

  d.map.push_back(straight("lane_main", {-60.0, 0.0}, {130.0, 0.0},
                           PolylineKind::kLaneCenterline));
  d.map.push_back(straight("lane_left", {-60.0, 3.5}, {130.0, 3.5},
                           PolylineKind::kLaneCenterline));
  d.map.push_back(straight("bound_r", {-60.0, -1.75}, {130.0, -1.75}, PolylineKind::kBoundary));
  d.map.push_back(straight("bound_l", {-60.0, 5.25}, {130.0, 5.25}, PolylineKind::kBoundary));
  d.bg_lane = Path({{130.0, 8.5}, {-60.0, 8.5}});
  d.bg_s0 = 60.0 + 15.0 * u(rng);
  return d;
}

/// Ramp vehicle tucking in behind the mainline vehicle.
SceneDraft draft_merge(std::mt19937_64 & rng, const SyntheticParams & p)
{
  Draw u(-1.0, 1.0);
  const double off_a = p.offset_noise * u(rng);
  SceneDraft d;
  d.plan_a.path = Path({{-70.0, off_a}, {130.0, off_a}});
  const Vec2 ramp_start{-55.0, -12.0 + 0.5 * u(rng)};
  const Vec2 ramp_corner{-8.0 + 2.0 * u(rng), 0.0};
  d.plan_b.path = Path::with_fillets({ramp_start, ramp_corner, {130.0, 0.0}}, 25.0);
  d.plan_a.v = 8.0 * (1.0 + p.speed_noise * u(rng));
  d.plan_b.v = d.plan_a.v + 1.0 + 0.5 * u(rng);

  const double x_anchor = 14.0 + 2.0 * u(rng);
  const double s_b_star = d.plan_b.path.nearest_arclength({x_anchor, 0.0});
  const Vec2 anchor = d.plan_b.path.position(s_b_star);
  const double gap = 4.7 + 0.1 * u(rng);
  const std::size_t t_star = p.history_len + p.horizon - 1;
  solve_conflict(d, anchor, s_b_star, gap, t_star, p.dt);

  d.map.push_back(straight("lane_main", {-70.0, 0.0}, {130.0, 0.0},
                           PolylineKind::kLaneCenterline));
  d.map.push_back(centerline("lane_ramp",
                             Path::with_fillets({ramp_start, ramp_corner, {20.0, 0.0}}, 25.0)));
  d.map.push_back(straight("bound_l", {-70.0, 1.75}, {130.0, 1.75}, PolylineKind::kBoundary));
  d.bg_lane = Path({{130.0, 5.25}, {-70.0, 5.25}});
  d.bg_s0 = 60.0 + 15.0 * u(rng);
  return d;
}

/// Turning vehicle yields, then joins the through lane behind the
/// straight-driving vehicle.
SceneDraft draft_yield_turn(std::mt19937_64 & rng, const SyntheticParams & p)
{
  Draw u(-1.0, 1.0);
  const double off_a = p.offset_noise * u(rng);
  const double off_b = p.offset_noise * u(rng);
  const double cross_x = 3.0 + 0.3 * u(rng);
  SceneDraft d;
  d.plan_a.path = Path({{-60.0, off_a}, {130.0, off_a}});
  d.plan_b.path = Path::with_fillets({{cross_x, -45.0}, {cross_x, off_b}, {130.0, off_b}}, 6.0);
  d.plan_a.v = 6.5 * (1.0 + p.speed_noise * u(rng));
  d.plan_b.v = d.plan_a.v + 0.8 + 0.4 * u(rng);

  const double x_anchor = 14.0 + 2.0 * u(rng);
  const double s_b_star = d.plan_b.path.nearest_arclength({x_anchor, off_b});
  const Vec2 anchor = d.plan_b.path.position(s_b_star);
  const double gap = 4.7 + 0.1 * u(rng);
  const std::size_t t_star = p.history_len + p.horizon - 1;
  solve_conflict(d, anchor, s_b_star, gap, t_star, p.dt);

  d.map.push_back(straight("lane_main", {-60.0, 0.0}, {130.0, 0.0},
                           PolylineKind::kLaneCenterline));
  d.map.push_back(straight("lane_cross", {cross_x, -45.0}, {cross_x, 30.0},
                           PolylineKind::kLaneCenterline));
  d.map.push_back(centerline(
    "lane_turn", Path::with_fillets({{cross_x, -45.0}, {cross_x, 0.0}, {25.0, 0.0}}, 6.0)));
  d.map.push_back(straight("bound_w", {-60.0, -1.75}, {cross_x - 5.0, -1.75},
                           PolylineKind::kBoundary));
  d.map.push_back(straight("crosswalk", {cross_x - 8.0, -2.5}, {cross_x - 8.0, 2.5},
                           PolylineKind::kCrosswalk));
  d.bg_lane = Path({{130.0, 3.5}, {-60.0, 3.5}});
  d.bg_s0 = 25.0 + 10.0 * u(rng);
  return d;
}

/// Opposing left turns through one intersection; A clears the crossing
/// region first, B follows through behind it.
SceneDraft draft_two_left_turns(std::mt19937_64 & rng, const SyntheticParams & p)
{
  Draw u(-1.0, 1.0);
  const double lh = 3.0;
  const double r_a = 8.0 + 0.5 * u(rng);
  const double r_b = 8.0 + 0.5 * u(rng);
  SceneDraft d;
  d.plan_a.path = Path::with_fillets({{-45.0, -lh}, {lh, -lh}, {lh, 45.0}}, r_a);
  d.plan_b.path = Path::with_fillets({{45.0, lh}, {-lh, lh}, {-lh, -45.0}}, r_b);
  d.plan_a.v = 7.0 * (1.0 + p.speed_noise * u(rng));
  d.plan_b.v = 6.3 * (1.0 + p.speed_noise * u(rng));

  const double s_cross_b = first_close_arclength(d.plan_b.path, d.plan_a.path, 0.15);
  const double s_b_star = s_cross_b - (2.5 + 1.0 * u(rng));
  const Vec2 anchor = d.plan_b.path.position(s_b_star);
  const double gap = 4.7 + 0.1 * u(rng);
  const std::size_t t_star =
    (p.history_len - 1) + static_cast<std::size_t>(std::lround(0.6 * p.horizon));
  solve_conflict(d, anchor, s_b_star, gap, t_star, p.dt);

  d.map.push_back(centerline("lane_turn_a", d.plan_a.path));
  d.map.push_back(centerline("lane_turn_b", d.plan_b.path));
  d.map.push_back(straight("lane_east", {-45.0, -lh}, {45.0, -lh},
                           PolylineKind::kLaneCenterline));
  d.map.push_back(straight("lane_west", {45.0, lh}, {-45.0, lh},
                           PolylineKind::kLaneCenterline));
  d.bg_lane = Path({{14.0, -45.0}, {14.0, 60.0}});
  d.bg_s0 = 63.0 + 5.0 * u(rng);
  return d;
}

}  // namespace

ScenarioKind scenario_kind_from_string(const std::string & name)
{
  if (name == "yield_turn") {
    return ScenarioKind::kYieldTurn;
  }
  if (name == "merge") {
    return ScenarioKind::kMerge;
  }
  if (name == "follow") {
    return ScenarioKind::kFollow;
  }
  if (name == "two_left_turns") {
    return ScenarioKind::kTwoLeftTurns;
  }
  throw ConfigError("unknown scenario kind '" + name +
                    "' (expected yield_turn, merge, follow or two_left_turns)");
}

const char * to_string(ScenarioKind kind)
{
  switch (kind) {
    case ScenarioKind::kYieldTurn:
      return "yield_turn";
    case ScenarioKind::kMerge:
      return "merge";
    case ScenarioKind::kFollow:
      return "follow";
    case ScenarioKind::kTwoLeftTurns:
      return "two_left_turns";
  }
  throw ConfigError("unhandled scenario kind");
}

Scenario generate_synthetic(ScenarioKind kind, std::uint64_t seed, const SyntheticParams & params)
{
  if (params.history_len < 2 || params.horizon < 5 || params.dt <= 0.0) {
    throw ConfigError("synthetic scenes need history >= 2, horizon >= 5 and positive dt");
  }
  std::mt19937_64 rng(seed);
  SceneDraft draft;
  switch (kind) {
    case ScenarioKind::kFollow:
      draft = draft_follow(rng, params);
      break;
    case ScenarioKind::kMerge:
      draft = draft_merge(rng, params);
      break;
    case ScenarioKind::kYieldTurn:
      draft = draft_yield_turn(rng, params);
      break;
    case ScenarioKind::kTwoLeftTurns:
      draft = draft_two_left_turns(rng, params);
      break;
  }

  Scenario scenario;
  scenario.id = std::string(to_string(kind)) + "-" + std::to_string(seed);
  scenario.history_len = params.history_len;
  scenario.horizon = params.horizon;
  const std::size_t steps = scenario.steps();
  scenario.tracks.push_back(
    make_track("A", draft.plan_a, steps, params.dt, kCarLength, kCarWidth, true));
  scenario.tracks.push_back(
    make_track("B", draft.plan_b, steps, params.dt, kCarLength, kCarWidth, true));

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k = 0; k < params.background_agents; ++k) {
    AgentPlan plan;
    plan.path = draft.bg_lane;
    plan.v = 7.0 + 0.7 * u(rng);
    plan.s0 = draft.bg_s0 + draft.bg_spacing * static_cast<double>(k);
    scenario.tracks.push_back(
      make_track("bg" + std::to_string(k), plan, steps, params.dt, 4.5, 2.0, false));
  }
  scenario.map = std::move(draft.map);
  validate_scenario(scenario);
  return scenario;
}

}  // namespace prospectnet
