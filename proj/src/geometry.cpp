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

#include "prospectnet/geometry.hpp"

namespace prospectnet
{

double normalize_angle(double radians)
{
  double a = std::fmod(radians + M_PI, 2.0 * M_PI);
  if (a < 0.0) {
    a += 2.0 * M_PI;
  }
  return a - M_PI;
}

Vec2 to_frame(const Vec2 & p, const Frame & frame)
{
  const double c = std::cos(frame.heading);
  const double s = std::sin(frame.heading);
  const Vec2 d = p - frame.origin;
  return {c * d.x + s * d.y, -s * d.x + c * d.y};
}

Vec2 from_frame(const Vec2 & p, const Frame & frame)
{
  const double c = std::cos(frame.heading);
  const double s = std::sin(frame.heading);
  return {c * p.x - s * p.y + frame.origin.x, s * p.x + c * p.y + frame.origin.y};
}

std::vector<Vec2> to_frame(const std::vector<Vec2> & pts, const Frame & frame)
{
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const Vec2 & p : pts) {
    out.push_back(to_frame(p, frame));
  }
  return out;
}

std::vector<Vec2> from_frame(const std::vector<Vec2> & pts, const Frame & frame)
{
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const Vec2 & p : pts) {
    out.push_back(from_frame(p, frame));
  }
  return out;
}

}  // namespace prospectnet
