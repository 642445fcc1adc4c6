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

#include <cstdint>
#include <string>
#include <vector>

#include "drmb/drm_bounds.hpp"

namespace drmb {

// Brute-force verification report: best feasible value found by searching
// the moment-matched candidate families against the analytic bound.
struct OracleReport {
  std::string distortion;
  ShapeClass cls = ShapeClass::General;
  BoundSide side = BoundSide::Sup;
  MomentSpec moments;

  double best_value = 0.0;
  std::string best_family;
  double best_param = 0.0;

  double analytic_value = 0.0;  // conservative end for brackets
  bool analytic_attainable = false;
  bool analytic_bracket = false;
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;

  // analytic - best for sup, best - analytic for inf; negative = violation
  double gap = 0.0;
  // gap to the constructive end of a bracket (should close to ~0)
  double constructive_gap = 0.0;

  std::vector<std::string> families_searched;
  long budget = 0;
  std::uint64_t seed = 0;
  bool violation = false;

  std::string to_json() const;
};

// Grid + seeded-random search over the extremal families of the class.
// Deterministic for a fixed seed. feas_tol is the validate_shape tolerance
// applied to every candidate before scoring.
OracleReport search(const DistortionFunction& h, ShapeClass cls, BoundSide side,
                    const MomentSpec& m, long budget = 10000,
                    std::uint64_t seed = 20260809, double feas_tol = 1e-9);

struct MorigutiCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// Verifies int x dH <= int x hbar dt with hbar the right derivative of the
// greatest convex minorant of H. Both inputs are tabulated polylines;
// repeated abscissae in H encode jumps. x must be nondecreasing.
MorigutiCheck moriguti_check(const std::vector<XY>& x_tab,
                             const std::vector<XY>& h_tab, double tol = 1e-9);

}  // namespace drmb
