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

#ifndef PROSPECTNET__METRICS_HPP_
#define PROSPECTNET__METRICS_HPP_

#include <cstddef>
#include <vector>

#include "prospectnet/geometry.hpp"
#include "prospectnet/pair_scorer.hpp"
#include "prospectnet/scenario.hpp"

namespace prospectnet
{

/**
 * @file
 * Pair-wise multi-modal evaluation: minADE, minFDE, miss rate, overlap
 * rate, and mean average precision. Displacement metrics average the two
 * agents; min is taken over the K predicted modes, which may differ between
 * ADE and FDE. The miss threshold is speed-scaled, and the overlap check
 * runs oriented bounding boxes of the best-scored mode against the other
 * agents' ground-truth boxes.
 */

/// Bounding box footprint, meters.
struct AgentShape
{
  double length = 4.5;
  double width = 2.0;
};

/// One non-pair agent's ground-truth future, aligned to the horizon grid.
struct OtherAgentFuture
{
  std::vector<Vec2> positions;
  std::vector<double> headings;
  AgentShape shape;
};

/// Everything needed to evaluate one scenario's pair prediction.
struct EvalRecord
{
  std::vector<PairPrediction> pairs;  ///< K scored modes.
  TrajectoryPair gt;                  ///< Ground-truth futures, same length.
  std::vector<double> gt_headings_a;  ///< Per future step, radians.
  std::vector<double> gt_headings_b;
  AgentShape shape_a;
  AgentShape shape_b;
  std::vector<OtherAgentFuture> others;
  double speed_a = 0.0;  ///< m/s at prediction time.
  double speed_b = 0.0;
};

/// Throws ValidationError unless there is at least one mode and every
/// trajectory, heading list, and other-agent track matches the ground-truth
/// horizon.
void validate_record(const EvalRecord & record);

/// Smallest per-mode displacement, meters: each mode's value averages the
/// two agents' mean (final) step errors for min_ade (min_fde).
double min_ade(const EvalRecord & record);
double min_fde(const EvalRecord & record);

/// Speed-scaled hit radius: base * scale(v) with scale 0.5 up to 1.4 m/s,
/// 1.0 from 11 m/s, linear in between.
double miss_threshold(double speed, double base = 2.0);

/// True when both agents' final points land within their thresholds.
bool pair_hit(
  const PairPrediction & pair, const TrajectoryPair & gt, double speed_a, double speed_b,
  double base = 2.0);

/// Fraction of records where no mode hits. Throws ContractError when empty.
double miss_rate(const std::vector<EvalRecord> & records, double base = 2.0);

/**
 * Intersection over union of two oriented rectangles. The intersection is
 * assembled from contained corners plus edge crossings, convex-hulled, and
 * measured by the shoelace formula; rectangle areas use length * width.
 * Throws ValidationError on a degenerate (zero-area) shape.
 */
double oriented_rect_iou(
  const Frame & pose_a, const AgentShape & shape_a, const Frame & pose_b,
  const AgentShape & shape_b);

/**
 * Fraction of records whose best-scored mode collides: at some future step
 * either predicted agent's box has IoU above iou_threshold with any other
 * agent's ground-truth box at that step. Box headings come from consecutive
 * waypoints; a step shorter than 1e-9 m falls back to the agent's
 * ground-truth heading at that step.
 */
double overlap_rate(const std::vector<EvalRecord> & records, double iou_threshold = 0.0);

/// 11-point interpolated average precision over one detection per record:
/// its top-scored pair, confidence = score, true positive iff it hits.
double map_metric(const std::vector<EvalRecord> & records, double base = 2.0);

/// The evaluation report: displacement metrics averaged over records.
struct MetricsReport
{
  double min_ade = 0.0;
  double min_fde = 0.0;
  double miss_rate = 0.0;
  double overlap_rate = 0.0;
  double map = 0.0;
};

MetricsReport evaluate_records(
  const std::vector<EvalRecord> & records, double base = 2.0, double iou_threshold = 0.0);

}  // namespace prospectnet

#endif  // PROSPECTNET__METRICS_HPP_
