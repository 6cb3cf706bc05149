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

#include "prospectnet/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

namespace
{

constexpr double kStandstillEps = 1e-9;
constexpr double kEdgeEps = 1e-12;
constexpr double kMergeEps = 1e-9;

void check_length(std::size_t got, std::size_t want, const char * what)
{
  if (got != want) {
    throw ValidationError(
      std::string(what) + " has length " + std::to_string(got) + ", expected " +
      std::to_string(want));
  }
}

double mode_displacement(const PairPrediction & pair, const TrajectoryPair & gt, bool final_only)
{
  const auto agent = [&](const std::vector<Vec2> & pred, const std::vector<Vec2> & truth) {
    if (final_only) {
      return distance(pred.back(), truth.back());
    }
    double acc = 0.0;
    for (std::size_t t = 0; t < pred.size(); ++t) {
      acc += distance(pred[t], truth[t]);
    }
    return acc / static_cast<double>(pred.size());
  };
  return 0.5 * (agent(pair.traj_a, gt.traj_a) + agent(pair.traj_b, gt.traj_b));
}

double min_displacement(const EvalRecord & record, bool final_only)
{
  validate_record(record);
  double best = mode_displacement(record.pairs.front(), record.gt, final_only);
  for (std::size_t k = 1; k < record.pairs.size(); ++k) {
    best = std::min(best, mode_displacement(record.pairs[k], record.gt, final_only));
  }
  return best;
}

std::size_t best_mode(const EvalRecord & record)
{
  std::size_t best = 0;
  for (std::size_t k = 1; k < record.pairs.size(); ++k) {
    if (record.pairs[k].score > record.pairs[best].score) {
      best = k;
    }
  }
  return best;
}

/// Box heading at one waypoint: direction to the next waypoint (from the
/// previous one at the last step), ground-truth heading at a standstill.
double step_heading(
  const std::vector<Vec2> & traj, std::size_t t, const std::vector<double> & gt_headings)
{
  Vec2 delta;
  if (traj.size() >= 2) {
    delta = t + 1 < traj.size() ? traj[t + 1] - traj[t] : traj[t] - traj[t - 1];
  }
  if (delta.norm() <= kStandstillEps) {
    return gt_headings[t];
  }
  return std::atan2(delta.y, delta.x);
}

std::array<Vec2, 4> box_corners(const Frame & pose, const AgentShape & shape)
{
  const double c = std::cos(pose.heading);
  const double s = std::sin(pose.heading);
  const Vec2 du = Vec2{c, s} * (0.5 * shape.length);
  const Vec2 dv = Vec2{-s, c} * (0.5 * shape.width);
  return {pose.origin + du + dv, pose.origin - du + dv, pose.origin - du - dv,
          pose.origin + du - dv};
}

bool inside_box(const Vec2 & p, const std::array<Vec2, 4> & corners)
{
  for (std::size_t i = 0; i < 4; ++i) {
    const Vec2 edge = corners[(i + 1) % 4] - corners[i];
    if (edge.cross(p - corners[i]) < -kEdgeEps) {
      return false;
    }
  }
  return true;
}

bool segments_cross(
  const Vec2 & p1, const Vec2 & p2, const Vec2 & q1, const Vec2 & q2, Vec2 & out)
{
  const Vec2 r = p2 - p1;
  const Vec2 s = q2 - q1;
  const double denom = r.cross(s);
  if (std::abs(denom) < 1e-15) {
    return false;
  }
  const Vec2 d = q1 - p1;
  const double t = d.cross(s) / denom;
  const double u = d.cross(r) / denom;
  if (t < -kEdgeEps || t > 1.0 + kEdgeEps || u < -kEdgeEps || u > 1.0 + kEdgeEps) {
    return false;
  }
  out = p1 + r * t;
  return true;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts)
{
  std::sort(pts.begin(), pts.end(), [](const Vec2 & a, const Vec2 & b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  const auto build = [&](auto begin, auto end) {
    std::vector<Vec2> chain;
    for (auto it = begin; it != end; ++it) {
      while (chain.size() >= 2 &&
             (chain[chain.size() - 1] - chain[chain.size() - 2])
                 .cross(*it - chain[chain.size() - 1]) <= 0.0) {
        chain.pop_back();
      }
      chain.push_back(*it);
    }
    return chain;
  };
  std::vector<Vec2> lower = build(pts.begin(), pts.end());
  std::vector<Vec2> upper = build(pts.rbegin(), pts.rend());
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  return lower;
}

double shoelace(const std::vector<Vec2> & poly)
{
  double acc = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    acc += poly[i].cross(poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(acc);
}

Frame box_pose(const std::vector<Vec2> & traj, std::size_t t, const std::vector<double> & headings)
{
  return Frame{traj[t], step_heading(traj, t, headings)};
}

}  // namespace

void validate_record(const EvalRecord & record)
{
  if (record.pairs.empty()) {
    throw ValidationError("record has no prediction modes");
  }
  const std::size_t horizon = record.gt.traj_a.size();
  if (horizon == 0) {
    throw ValidationError("record has an empty ground truth");
  }
  check_length(record.gt.traj_b.size(), horizon, "ground-truth trajectory b");
  check_length(record.gt_headings_a.size(), horizon, "ground-truth headings a");
  check_length(record.gt_headings_b.size(), horizon, "ground-truth headings b");
  for (const PairPrediction & pair : record.pairs) {
    check_length(pair.traj_a.size(), horizon, "predicted trajectory a");
    check_length(pair.traj_b.size(), horizon, "predicted trajectory b");
  }
  for (const OtherAgentFuture & other : record.others) {
    check_length(other.positions.size(), horizon, "other-agent positions");
    check_length(other.headings.size(), horizon, "other-agent headings");
  }
}

double min_ade(const EvalRecord & record) { return min_displacement(record, false); }

double min_fde(const EvalRecord & record) { return min_displacement(record, true); }

double miss_threshold(double speed, double base)
{
  double scale = 1.0;
  if (speed <= 1.4) {
    scale = 0.5;
  } else if (speed < 11.0) {
    scale = 0.5 + 0.5 * (speed - 1.4) / (11.0 - 1.4);
  }
  return base * scale;
}

bool pair_hit(
  const PairPrediction & pair, const TrajectoryPair & gt, double speed_a, double speed_b,
  double base)
{
  if (pair.traj_a.empty() || pair.traj_b.empty() || gt.traj_a.empty() || gt.traj_b.empty()) {
    throw ValidationError("hit test on empty trajectories");
  }
  return distance(pair.traj_a.back(), gt.traj_a.back()) <= miss_threshold(speed_a, base) &&
         distance(pair.traj_b.back(), gt.traj_b.back()) <= miss_threshold(speed_b, base);
}

double miss_rate(const std::vector<EvalRecord> & records, double base)
{
  if (records.empty()) {
    throw ContractError("no records to evaluate");
  }
  std::size_t misses = 0;
  for (const EvalRecord & record : records) {
    validate_record(record);
    bool any_hit = false;
    for (const PairPrediction & pair : record.pairs) {
      if (pair_hit(pair, record.gt, record.speed_a, record.speed_b, base)) {
        any_hit = true;
        break;
      }
    }
    misses += any_hit ? 0 : 1;
  }
  return static_cast<double>(misses) / static_cast<double>(records.size());
}

double oriented_rect_iou(
  const Frame & pose_a, const AgentShape & shape_a, const Frame & pose_b,
  const AgentShape & shape_b)
{
  if (shape_a.length <= 0.0 || shape_a.width <= 0.0 || shape_b.length <= 0.0 ||
      shape_b.width <= 0.0) {
    throw ValidationError("agent bounding box has no area");
  }
  const std::array<Vec2, 4> a = box_corners(pose_a, shape_a);
  const std::array<Vec2, 4> b = box_corners(pose_b, shape_b);

  std::vector<Vec2> pts;
  for (const Vec2 & p : a) {
    if (inside_box(p, b)) {
      pts.push_back(p);
    }
  }
  for (const Vec2 & p : b) {
    if (inside_box(p, a)) {
      pts.push_back(p);
    }
  }
  Vec2 crossing;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (segments_cross(a[i], a[(i + 1) % 4], b[j], b[(j + 1) % 4], crossing)) {
        pts.push_back(crossing);
      }
    }
  }

  std::vector<Vec2> unique;
  for (const Vec2 & p : pts) {
    bool seen = false;
    for (const Vec2 & q : unique) {
      if (distance(p, q) < kMergeEps) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      unique.push_back(p);
    }
  }

  double inter = 0.0;
  if (unique.size() >= 3) {
    const std::vector<Vec2> hull = convex_hull(unique);
    if (hull.size() >= 3) {
      inter = shoelace(hull);
    }
  }
  const double area_a = shape_a.length * shape_a.width;
  const double area_b = shape_b.length * shape_b.width;
  const double denom = area_a + area_b - inter;
  return std::clamp(inter / denom, 0.0, 1.0);
}

double overlap_rate(const std::vector<EvalRecord> & records, double iou_threshold)
{
  if (records.empty()) {
    throw ContractError("no records to evaluate");
  }
  std::size_t events = 0;
  for (const EvalRecord & record : records) {
    validate_record(record);
    const PairPrediction & mode = record.pairs[best_mode(record)];
    const std::size_t horizon = record.gt.traj_a.size();
    bool event = false;
    for (std::size_t t = 0; t < horizon && !event; ++t) {
      const Frame pose_a = box_pose(mode.traj_a, t, record.gt_headings_a);
      const Frame pose_b = box_pose(mode.traj_b, t, record.gt_headings_b);
      for (const OtherAgentFuture & other : record.others) {
        const Frame pose_o{other.positions[t], other.headings[t]};
        if (oriented_rect_iou(pose_a, record.shape_a, pose_o, other.shape) > iou_threshold ||
            oriented_rect_iou(pose_b, record.shape_b, pose_o, other.shape) > iou_threshold) {
          event = true;
          break;
        }
      }
    }
    events += event ? 1 : 0;
  }
  return static_cast<double>(events) / static_cast<double>(records.size());
}

double map_metric(const std::vector<EvalRecord> & records, double base)
{
  if (records.empty()) {
    throw ContractError("no records to evaluate");
  }
  struct Detection
  {
    double confidence;
    bool hit;
  };
  std::vector<Detection> detections;
  detections.reserve(records.size());
  for (const EvalRecord & record : records) {
    validate_record(record);
    const PairPrediction & mode = record.pairs[best_mode(record)];
    detections.push_back(Detection{
      mode.score, pair_hit(mode, record.gt, record.speed_a, record.speed_b, base)});
  }
  std::stable_sort(detections.begin(), detections.end(), [](const Detection & l, const Detection & r) {
    return l.confidence > r.confidence;
  });

  // One precision/recall point per distinct confidence threshold.
  const double total = static_cast<double>(records.size());
  std::vector<std::array<double, 2>> curve;  // {recall, precision}
  std::size_t tp = 0;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    tp += detections[i].hit ? 1 : 0;
    const bool group_end =
      i + 1 == detections.size() || detections[i + 1].confidence != detections[i].confidence;
    if (group_end) {
      const double seen = static_cast<double>(i + 1);
      curve.push_back({static_cast<double>(tp) / total, static_cast<double>(tp) / seen});
    }
  }

  double ap = 0.0;
  for (int j = 0; j <= 10; ++j) {
    const double anchor = static_cast<double>(j) / 10.0;
    double best = 0.0;
    for (const auto & point : curve) {
      if (point[0] >= anchor) {
        best = std::max(best, point[1]);
      }
    }
    ap += best;
  }
  return ap / 11.0;
}

MetricsReport evaluate_records(
  const std::vector<EvalRecord> & records, double base, double iou_threshold)
{
  if (records.empty()) {
    throw ContractError("no records to evaluate");
  }
  MetricsReport report;
  for (const EvalRecord & record : records) {
    report.min_ade += min_ade(record);
    report.min_fde += min_fde(record);
  }
  report.min_ade /= static_cast<double>(records.size());
  report.min_fde /= static_cast<double>(records.size());
  report.miss_rate = miss_rate(records, base);
  report.overlap_rate = overlap_rate(records, iou_threshold);
  report.map = map_metric(records, base);
  return report;
}

}  // namespace prospectnet
