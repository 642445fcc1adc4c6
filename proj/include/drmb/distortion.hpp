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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "drmb/hull.hpp"

namespace drmb {

enum class Side { Left, Right };

enum class DistortionKind {
  Identity,
  VaR,
  TVaR,
  RVaR,
  ProportionalHazard,
  Power,  // h(p) = p^e
  PiecewiseLinear,
  PiecewiseConstant,
};

struct Continuity {
  bool left = true;
  bool right = true;
  bool continuous() const { return left && right; }
};

struct Classification {
  bool is_simple = false;
  bool is_concave = false;
  bool is_convex = false;
  Continuity continuity;
  bool boundary_ok = true;  // h(0+) == 0 and h(1-) == 1
  // grid used when the certification is numerical (0 = symbolic/exact)
  int grid = 0;
};

// Atom of a Stieltjes measure on [0,1]. q_side records which generalized
// inverse the atom pairs with in a quantile integral: a right-continuous
// jump of h pairs with F^{-1+}, a left-continuous jump with F^{-1}.
struct MassAtom {
  double p = 0.0;
  double mass = 0.0;
  Side q_side = Side::Right;
};

// Density piece of a derivative measure on the open interval (lo, hi).
struct DensityPiece {
  enum class Shape { Constant, PowerAtLo, PowerAtHi };
  double lo = 0.0;
  double hi = 1.0;
  Shape shape = Shape::Constant;
  double coef = 0.0;  // Constant: coef; PowerAtLo: coef*(p-lo)^e; PowerAtHi: coef*(hi-p)^e
  double e = 0.0;

  double density(double p) const;
};

// Signed Stieltjes measure built from the derivative(s) of a distortion
// function: atoms plus piecewise densities, disjoint and ordered.
struct DerivativeMeasure {
  std::vector<MassAtom> atoms;
  std::vector<DensityPiece> densities;

  DerivativeMeasure scaled(double factor) const;
  // Total mass; +/-inf when a density piece is not integrable.
  double total_mass() const;
};

class DistortionError : public std::runtime_error {
 public:
  explicit DistortionError(const std::string& what) : std::runtime_error(what) {}
};

struct PwcStep {
  double t = 0.0;       // jump location
  double level = 0.0;   // level on (t_{i-1}, t_i]-ish; see PiecewiseConstant docs
  Side side = Side::Right;  // continuity side at the jump
};

// A distortion function h: [0,1] -> [0,1], nondecreasing, h(0)=0, h(1)=1.
// Stored as a canonical list of open pieces (affine or power) plus explicit
// jumps with per-jump continuity sides.
class DistortionFunction {
 public:
  struct Piece {
    enum class Form { Affine, PowerAtLo, PowerAtHi };
    double lo = 0.0;
    double hi = 1.0;
    Form form = Form::Affine;
    // Affine:     v(p) = a + s*(p - lo)
    // PowerAtLo:  v(p) = a + c*(p - lo)^e
    // PowerAtHi:  v(p) = a - c*(hi - p)^e
    double a = 0.0;
    double s = 0.0;
    double c = 0.0;
    double e = 1.0;

    double value(double p) const;
    double slope(double p) const;
    double lo_value() const;
    double hi_value() const;
    double lo_slope() const;  // may be +inf for integrable power singularities
    double hi_slope() const;
  };

  static DistortionFunction identity();
  // Step distortion whose DRM is VaR_alpha; side selects VaR^- (Left,
  // default) or VaR^+ (Right) semantics.
  static DistortionFunction var(double alpha, Side side = Side::Left);
  static DistortionFunction tvar(double alpha);
  static DistortionFunction rvar(double alpha, double beta);
  static DistortionFunction ph(double alpha, double r);
  static DistortionFunction power(double e);  // h(p) = p^e, e > 0
  // points must start at (0,0), end at (1,1), nondecreasing in both coords.
  static DistortionFunction piecewise_linear(const std::vector<XY>& points);
  // steps (t_i, c_i): h = c_1 on [0, t_1], c_2 on (t_1, t_2], ..., with
  // 0 = c_1 <= ... <= c_n = 1 and the last t_n = 1; side per jump.
  static DistortionFunction piecewise_constant(const std::vector<PwcStep>& steps);

  DistortionKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double r() const { return r_; }

  // Evaluation honoring the declared continuity side at jumps.
  double operator()(double p) const;
  // Explicit one-sided limit (Side::Left => h(p-), Side::Right => h(p+)).
  double eval(double p, Side side) const;

  DistortionFunction dual() const;  // h~(p) = 1 - h(1-p)
  Classification classify() const;

  // order 1: dh as a measure; order 2: d(h') (throws DistortionError for
  // functions with value jumps, e.g. piecewise-constant kinds).
  DerivativeMeasure derivative_measure(int order) const;

  bool left_continuous() const;
  bool right_continuous() const;

  const std::vector<Piece>& pieces() const { return pieces_; }

  // Breakpoint cloud for hull construction: exact for affine pieces, sampled
  // on `grid` points for power pieces; jumps contribute both closure values.
  std::vector<XY> hull_points(int grid = 2001) const;

  std::string to_string() const;

 private:
  DistortionFunction() = default;
  void validate() const;

  DistortionKind kind_ = DistortionKind::Identity;
  double alpha_ = 0.0, beta_ = 0.0, r_ = 1.0;
  std::vector<Piece> pieces_;
  // continuity side at interior piece boundaries (size = pieces_.size() - 1);
  // only meaningful where the value actually jumps
  std::vector<Side> joint_sides_;
};

// Greatest convex minorant of h. Exact (breakpoint hull) for piecewise
// kinds, symbolic for the parametric families, grid-hull otherwise; slope
// accuracy of the grid fallback is O(1/grid).
DistortionFunction convex_envelope(const DistortionFunction& h, int grid = 2001);
// Least concave majorant; uses (-h)_* = -h^*.
DistortionFunction concave_envelope(const DistortionFunction& h, int grid = 2001);

// CLI/config grammar:
//   identity | var:<a> | tvar:<a> | rvar:<a>,<b> | ph:<a>,<r>
//   | pwl:p1,h1;p2,h2;... | steps:t1,c1;t2,c2;...
DistortionFunction parse_distortion(const std::string& spec);

}  // namespace drmb
