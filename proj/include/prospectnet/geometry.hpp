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

#ifndef PROSPECTNET__GEOMETRY_HPP_
#define PROSPECTNET__GEOMETRY_HPP_

#include <cmath>
#include <vector>

namespace prospectnet
{

struct Vec2
{
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2 & o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2 & o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
  double cross(const Vec2 & o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }

  bool operator==(const Vec2 & o) const { return x == o.x && y == o.y; }
};

inline double distance(const Vec2 & a, const Vec2 & b) { return (a - b).norm(); }

/// Wraps an angle into [-pi, pi).
double normalize_angle(double radians);

/// Local coordinate frame: origin in world meters, heading in [-pi, pi).
/// The frame's +x axis points along the heading.
struct Frame
{
  Vec2 origin;
  double heading = 0.0;
};

/// World point into frame coordinates: translate, then rotate the heading
/// onto +x. Inverse of from_frame within 1e-9.
Vec2 to_frame(const Vec2 & p, const Frame & frame);
Vec2 from_frame(const Vec2 & p, const Frame & frame);

std::vector<Vec2> to_frame(const std::vector<Vec2> & pts, const Frame & frame);
std::vector<Vec2> from_frame(const std::vector<Vec2> & pts, const Frame & frame);

}  // namespace prospectnet

#endif  // PROSPECTNET__GEOMETRY_HPP_
