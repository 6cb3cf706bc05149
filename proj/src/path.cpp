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

#include "prospectnet/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

Path::Path(std::vector<Vec2> points)
{
  pts_.reserve(points.size());
  for (const Vec2 & p : points) {
    if (pts_.empty() || distance(pts_.back(), p) > 1e-12) {
      pts_.push_back(p);
    }
  }
  if (pts_.size() < 2) {
    throw ValidationError("path needs at least two distinct points");
  }
  arclen_.resize(pts_.size());
  arclen_[0] = 0.0;
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    arclen_[i] = arclen_[i - 1] + distance(pts_[i - 1], pts_[i]);
  }
}

Path Path::with_fillets(const std::vector<Vec2> & corners, double radius, double sample_step)
{
  if (corners.size() < 2) {
    throw ValidationError("fillet path needs at least two corners");
  }
  if (radius <= 0.0 || sample_step <= 0.0) {
    throw ValidationError("fillet radius and sample step must be positive");
  }
  std::vector<Vec2> dense;
  const auto emit_straight = [&](const Vec2 & a, const Vec2 & b) {
    const double len = distance(a, b);
    const int n = std::max(1, static_cast<int>(std::ceil(len / sample_step)));
    for (int i = 0; i <= n; ++i) {
      const double t = static_cast<double>(i) / n;
      dense.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
    }
  };

  Vec2 cursor = corners.front();
  for (std::size_t i = 1; i + 1 < corners.size(); ++i) {
    const Vec2 & c = corners[i];
    const Vec2 in = c - corners[i - 1];
    const Vec2 out = corners[i + 1] - c;
    const Vec2 u = in * (1.0 / in.norm());
    const Vec2 w = out * (1.0 / out.norm());
    const double turn = std::atan2(u.cross(w), u.dot(w));
    if (std::abs(turn) < 1e-9) {
      continue;  // collinear corner, nothing to round
    }
    const double offset = radius * std::tan(std::abs(turn) / 2.0);
    const Vec2 tangent_in = c - u * offset;
    const Vec2 tangent_out = c + w * offset;
    // Center sits perpendicular to the incoming direction on the turn side.
    const double side = turn > 0.0 ? 1.0 : -1.0;
    const Vec2 normal{-u.y * side, u.x * side};
    const Vec2 center = tangent_in + normal * radius;

    emit_straight(cursor, tangent_in);
    const double a0 = std::atan2(tangent_in.y - center.y, tangent_in.x - center.x);
    const double sweep = turn;  // arc sweep equals the heading change
    const int n = std::max(2, static_cast<int>(std::ceil(radius * std::abs(sweep) / sample_step)));
    for (int k = 1; k <= n; ++k) {
      const double a = a0 + sweep * static_cast<double>(k) / n;
      dense.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    cursor = tangent_out;
  }
  emit_straight(cursor, corners.back());
  return Path(std::move(dense));
}

std::size_t Path::segment_at(double s) const
{
  if (s <= 0.0) {
    return 0;
  }
  if (s >= arclen_.back()) {
    return pts_.size() - 2;
  }
  const auto it = std::upper_bound(arclen_.begin(), arclen_.end(), s);
  const std::size_t idx = static_cast<std::size_t>(it - arclen_.begin());
  return std::min(idx - 1, pts_.size() - 2);
}

Vec2 Path::position(double s) const
{
  const std::size_t i = segment_at(s);
  const double seg_len = arclen_[i + 1] - arclen_[i];
  const double t = (s - arclen_[i]) / seg_len;  // may fall outside [0,1] at the ends
  const Vec2 & a = pts_[i];
  const Vec2 & b = pts_[i + 1];
  return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

double Path::heading(double s) const
{
  const std::size_t i = segment_at(s);
  const Vec2 d = pts_[i + 1] - pts_[i];
  return normalize_angle(std::atan2(d.y, d.x));
}

double Path::nearest_arclength(const Vec2 & p) const
{
  double best_d2 = std::numeric_limits<double>::max();
  double best_s = 0.0;
  for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
    const Vec2 & a = pts_[i];
    const Vec2 d = pts_[i + 1] - a;
    const double seg2 = d.dot(d);
    double t = seg2 > 0.0 ? (p - a).dot(d) / seg2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const Vec2 q{a.x + d.x * t, a.y + d.y * t};
    const double d2 = (p - q).dot(p - q);
    if (d2 < best_d2) {
      best_d2 = d2;
      best_s = arclen_[i] + std::sqrt(seg2) * t;
    }
  }
  return best_s;
}

std::vector<Vec2> Path::resample(double step) const
{
  if (step <= 0.0) {
    throw ValidationError("resample step must be positive");
  }
  std::vector<Vec2> out;
  for (double s = 0.0; s < length(); s += step) {
    out.push_back(position(s));
  }
  out.push_back(pts_.back());
  return out;
}

}  // namespace prospectnet
