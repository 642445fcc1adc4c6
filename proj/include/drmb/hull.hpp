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

#pragma once

#include <vector>

namespace drmb {

struct XY {
  double x = 0.0;
  double y = 0.0;
};

// Lower convex hull of a point cloud, returned left to right with strictly
// increasing x and nondecreasing slopes. Stacked points (equal x) are allowed;
// only the lowest one can be a hull vertex. This is the greatest convex
// minorant of the tabulated function when the input contains both closure
// values at every jump.
std::vector<XY> lower_convex_hull(std::vector<XY> points);

// Mirror: least concave majorant vertices.
std::vector<XY> upper_concave_hull(std::vector<XY> points);

// Evaluate a hull polyline at x (linear interpolation between vertices,
// clamped outside the vertex range).
double polyline_value(const std::vector<XY>& vertices, double x);

}  // namespace drmb
