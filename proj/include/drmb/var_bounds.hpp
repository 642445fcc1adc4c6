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

#include <optional>
#include <string>

#include "drmb/quantile.hpp"

namespace drmb {

enum class BoundSide { Sup, Inf };
enum class VarKind { Lower, Upper };  // VaR^- / VaR^+

struct BracketDetail {
  double lower = 0.0;
  double upper = 0.0;
  double argmax_b = 0.0;
  char branch = '?';  // 'R', 'L' or 'T'
  int grid = 0;
  int refine_iters = 0;
  bool lower_constructive = true;  // which end carries the feasible witness
};

struct BoundResult {
  BoundSide side = BoundSide::Sup;
  double value = 0.0;
  bool attainable = false;
  std::optional<QuantileFunction> extremal;
  enum class Method { ClosedForm, EnvelopeIntegral, Bracket } method =
      Method::ClosedForm;
  std::optional<BracketDetail> bracket;
  std::string diagnostic;
};

// Standardized (mean 0, variance 1) extremal families; all parameters are
// moment-matched in closed form.
namespace families {

// atoms -sqrt((1-t)/t) w.p. t and sqrt(t/(1-t)) w.p. 1-t
QuantileFunction two_point(double t);
// atoms +-1/sqrt(2m) w.p. m each, atom 0 w.p. 1-2m; m in (0, 1/2]
QuantileFunction three_point(double m);
// atom at the lower end w.p. b, uniform above; b in [0, 1)
QuantileFunction atom_below_uniform(double b);
// uniform below, atom at the upper end w.p. 1-b; b in (0, 1]
QuantileFunction uniform_below_atom(double b);
// symmetric uniform pair around a center atom of mass 2b-1; b in [1/2, 1)
QuantileFunction center_flat(double b);

}  // namespace families

// Sharp worst/best-case VaR over the shape class (closed forms).
BoundResult var_bound(ShapeClass cls, BoundSide side, VarKind kind,
                      double alpha, const MomentSpec& m);

// Law attaining var_bound for the attainable kind of the side (VaR^+ for
// sup, VaR^- for inf).
QuantileFunction extremal_var_distribution(ShapeClass cls, BoundSide side,
                                           double alpha, const MomentSpec& m);

}  // namespace drmb
