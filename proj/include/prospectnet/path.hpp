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

#ifndef PROSPECTNET__PATH_HPP_
#define PROSPECTNET__PATH_HPP_

#include <vector>

#include "prospectnet/geometry.hpp"

namespace prospectnet
{

/**
 * @brief Arclength-parameterized polyline curve.
 *
 * Queries outside [0, length] extrapolate linearly along the end tangents,
 * so a vehicle can be placed before the modeled lane starts.
 */
class Path
{
public:
  /// Builds from polyline vertices; consecutive duplicates are dropped.
  /// Throws ValidationError if fewer than two distinct points remain.
  explicit Path(std::vector<Vec2> points);

  /// Straight segments through the corner list with circular fillets of the
  /// given radius replacing each interior corner, densely sampled.
  static Path with_fillets(
    const std::vector<Vec2> & corners, double radius, double sample_step = 0.25);

  double length() const { return arclen_.back(); }

  Vec2 position(double s) const;
  /// Tangent direction at arclength s, in [-pi, pi).
  double heading(double s) const;

  /// Arclength of the exact projection of p onto the curve.
  double nearest_arclength(const Vec2 & p) const;

  /// Vertices on a uniform arclength grid of the given step, endpoint
  /// included.
  std::vector<Vec2> resample(double step) const;

  const std::vector<Vec2> & points() const { return pts_; }

private:
  std::vector<Vec2> pts_;
  std::vector<double> arclen_;

  std::size_t segment_at(double s) const;
};

}  // namespace prospectnet

#endif  // PROSPECTNET__PATH_HPP_
