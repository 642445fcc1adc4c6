// Copyright 2026 The drmbounds Authors
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

#include "drmb/hull.hpp"

#include <algorithm>
#include <cmath>

namespace drmb {

namespace {

// cross(o->a, o->b); <= 0 means b is clockwise of a (right turn or collinear)
double cross(const XY& o, const XY& a, const XY& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

std::vector<XY> lower_convex_hull(std::vector<XY> points) {
  std::sort(points.begin(), points.end(), [](const XY& a, const XY& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  std::vector<XY> hull;
  for (const XY& p : points) {
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], hull[hull.size() - 1], p) <= 0.0) {
      hull.pop_back();
    }
    // equal x: keep only the lowest point, which sorts first
    if (!hull.empty() && hull.back().x == p.x) continue;
    hull.push_back(p);
  }
  return hull;
}

std::vector<XY> upper_concave_hull(std::vector<XY> points) {
  for (XY& p : points) p.y = -p.y;
  std::vector<XY> hull = lower_convex_hull(std::move(points));
  for (XY& p : hull) p.y = -p.y;
  return hull;
}

double polyline_value(const std::vector<XY>& v, double x) {
  if (v.empty()) return 0.0;
  if (x <= v.front().x) return v.front().y;
  if (x >= v.back().x) return v.back().y;
  auto it = std::upper_bound(v.begin(), v.end(), x,
                             [](double xv, const XY& p) { return xv < p.x; });
  const XY& hi = *it;
  const XY& lo = *(it - 1);
  const double w = (x - lo.x) / (hi.x - lo.x);
  return lo.y + w * (hi.y - lo.y);
}

}  // namespace drmb
