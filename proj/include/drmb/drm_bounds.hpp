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

#include "drmb/quadrature.hpp"
#include "drmb/var_bounds.hpp"

namespace drmb {

// Worst/best-case distortion risk measures over the four shape classes.
//
// General and symmetric classes have exact Schwarz-type values; the
// unimodal classes are exact for simple and concave distortions and return
// a certified bracket otherwise, with `value` set to the conservative end
// (upper for sup, lower for inf).
BoundResult sup_general(const DistortionFunction& h, const MomentSpec& m);
BoundResult inf_general(const DistortionFunction& h, const MomentSpec& m);
BoundResult sup_symmetric(const DistortionFunction& h, const MomentSpec& m);
BoundResult inf_symmetric(const DistortionFunction& h, const MomentSpec& m);
BoundResult sup_unimodal(const DistortionFunction& h, const MomentSpec& m);
BoundResult inf_unimodal(const DistortionFunction& h, const MomentSpec& m);
BoundResult sup_us(const DistortionFunction& h, const MomentSpec& m);
BoundResult inf_us(const DistortionFunction& h, const MomentSpec& m);

// Closed-form worst-case TVaR over the unimodal / unimodal-symmetric
// classes, with the attaining kinked-affine laws.
BoundResult tvar_sup_unimodal(double alpha, const MomentSpec& m);
BoundResult tvar_sup_us(double alpha, const MomentSpec& m);

// Values of the one-parameter feasible families behind the bracket lower
// bounds. g is the integrator (the dual of the distortion being bounded).
double delta_R(const DistortionFunction& g, double b);
double delta_L(const DistortionFunction& g, double b);
double theta(const DistortionFunction& g, double b);

// Kernel integral of the unimodal-symmetric envelope formula against d(g')
// (atoms at kinks; signed measures supported).
IntegralResult upsilon(const DistortionFunction& g);
// Same for the unimodal formula.
IntegralResult unimodal_envelope_integral(const DistortionFunction& g);

struct OptimizerOutcome {
  double value = 0.0;
  double argmax_b = 0.0;
  char branch = '?';  // 'R', 'L' (delta) or 'T' (theta)
  int grid = 0;
  int refine_iters = 0;
};

// sup_b max{Delta_R(g,b), Delta_L(g,b)} / sup_{b in [1/2,1]} Theta(g,b):
// coarse scan plus golden-section refinement.
OptimizerOutcome optimize_delta(const DistortionFunction& g);
OptimizerOutcome optimize_theta(const DistortionFunction& g);

// Dispatcher used by the CLI.
BoundResult bound(const DistortionFunction& h, ShapeClass cls, BoundSide side,
                  const MomentSpec& m);

}  // namespace drmb
