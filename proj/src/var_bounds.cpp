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

#include "drmb/var_bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace drmb {

namespace families {

QuantileFunction two_point(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("two_point: t in (0,1)");
  const double lo = -std::sqrt((1.0 - t) / t);
  const double hi = std::sqrt(t / (1.0 - t));
  return QuantileFunction({{0.0, t, lo, 0.0}, {t, 1.0, hi, 0.0}});
}

QuantileFunction three_point(double m) {
  if (!(m > 0.0 && m <= 0.5)) throw std::invalid_argument("three_point: m in (0,1/2]");
  const double v = 1.0 / std::sqrt(2.0 * m);
  if (m == 0.5) return QuantileFunction({{0.0, 0.5, -v, 0.0}, {0.5, 1.0, v, 0.0}});
  return QuantileFunction(
      {{0.0, m, -v, 0.0}, {m, 1.0 - m, 0.0, 0.0}, {1.0 - m, 1.0, v, 0.0}});
}

QuantileFunction atom_below_uniform(double b) {
  if (!(b >= 0.0 && b < 1.0))
    throw std::invalid_argument("atom_below_uniform: b in [0,1)");
  const double denom = std::sqrt((1.0 - b) * (1.0 - b) * (1.0 - b) * (1.0 / 3.0 + b));
  const double bottom = -std::sqrt((1.0 - b) / (1.0 / 3.0 + b));
  const double slope = 2.0 / denom;
  if (b == 0.0) return QuantileFunction({{0.0, 1.0, bottom, slope}});
  return QuantileFunction({{0.0, b, bottom, 0.0}, {b, 1.0, bottom, slope}});
}

QuantileFunction uniform_below_atom(double b) {
  if (!(b > 0.0 && b <= 1.0))
    throw std::invalid_argument("uniform_below_atom: b in (0,1]");
  const double denom = std::sqrt(b * b * b * (4.0 - 3.0 * b));
  const double top = std::sqrt(3.0 * b / (4.0 - 3.0 * b));
  const double slope = 2.0 * std::sqrt(3.0) / denom;
  const double start = top - slope * b;  // sqrt(3)(b^2-2b)/denom
  if (b == 1.0) return QuantileFunction({{0.0, 1.0, start, slope}});
  return QuantileFunction({{0.0, b, start, slope}, {b, 1.0, top, 0.0}});
}

QuantileFunction center_flat(double b) {
  if (!(b >= 0.5 && b < 1.0))
    throw std::invalid_argument("center_flat: b in [1/2,1)");
  const double c = 1.0 / std::sqrt((2.0 / 3.0) * std::pow(1.0 - b, 3.0));
  if (b == 0.5)
    return QuantileFunction({{0.0, 1.0, -0.5 * c, c}});
  return QuantileFunction({{0.0, 1.0 - b, -c * (1.0 - b), c},
                           {1.0 - b, b, 0.0, 0.0},
                           {b, 1.0, 0.0, c}});
}

}  // namespace families

namespace {

void check_args(double alpha, const MomentSpec& m) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("var_bound: alpha must lie in (0,1)");
  if (!(m.sigma > 0.0))
    throw std::invalid_argument("var_bound: sigma must be positive");
}

// standardized sup-side deviation; inf values follow by the reflection
// VaR^-_alpha(X) = -VaR^+_{1-alpha}(-X)
double sup_deviation(ShapeClass cls, double alpha) {
  switch (cls) {
    case ShapeClass::General:
      return std::sqrt(alpha / (1.0 - alpha));
    case ShapeClass::Symmetric:
      return alpha >= 0.5 ? std::sqrt(1.0 / (2.0 * (1.0 - alpha))) : 0.0;
    case ShapeClass::Unimodal:
      if (alpha < 5.0 / 6.0) return std::sqrt(3.0 * alpha / (4.0 - 3.0 * alpha));
      return std::sqrt(4.0 / (9.0 * (1.0 - alpha)) - 1.0);
    case ShapeClass::UnimodalSymmetric:
      if (alpha < 0.5) return 0.0;
      if (alpha < 5.0 / 6.0) return std::sqrt(3.0) * (2.0 * alpha - 1.0);
      return std::sqrt(2.0 / (9.0 * (1.0 - alpha)));
  }
  return 0.0;
}

}  // namespace

BoundResult var_bound(ShapeClass cls, BoundSide side, VarKind kind, double alpha,
                      const MomentSpec& m) {
  check_args(alpha, m);
  BoundResult r;
  r.side = side;
  r.method = BoundResult::Method::ClosedForm;
  if (side == BoundSide::Sup) {
    r.value = m.mu + m.sigma * sup_deviation(cls, alpha);
    r.attainable = kind == VarKind::Upper;
  } else {
    r.value = m.mu - m.sigma * sup_deviation(cls, 1.0 - alpha);
    r.attainable = kind == VarKind::Lower;
  }
  if (r.attainable) r.extremal = extremal_var_distribution(cls, side, alpha, m);
  return r;
}

namespace {

// three-point law with explicit flat boundaries (lo_b, hi_b); the masses
// lo_b and 1 - hi_b must agree up to rounding
QuantileFunction three_point_bounds(double lo_b, double hi_b) {
  const double v = 1.0 / std::sqrt(lo_b + (1.0 - hi_b));
  if (lo_b >= hi_b) {  // no center mass
    return QuantileFunction({{0.0, lo_b, -v, 0.0}, {lo_b, 1.0, v, 0.0}});
  }
  return QuantileFunction(
      {{0.0, lo_b, -v, 0.0}, {lo_b, hi_b, 0.0, 0.0}, {hi_b, 1.0, v, 0.0}});
}

}  // namespace

QuantileFunction extremal_var_distribution(ShapeClass cls, BoundSide side,
                                           double alpha, const MomentSpec& m) {
  check_args(alpha, m);
  const bool sup = side == BoundSide::Sup;
  // each construction keeps the quantile breakpoint the evaluation happens
  // at exactly at alpha, so the attained VaR is bit-clean
  QuantileFunction z = QuantileFunction::constant(0.0);
  switch (cls) {
    case ShapeClass::General:
      z = families::two_point(alpha);  // attains both the sup and the inf
      break;
    case ShapeClass::Symmetric:
      if (alpha >= 0.5) {
        z = three_point_bounds(1.0 - alpha, alpha);
      } else {
        z = three_point_bounds(alpha, 1.0 - alpha);
      }
      break;
    case ShapeClass::Unimodal:
      if (sup) {
        z = alpha < 5.0 / 6.0 ? families::uniform_below_atom(alpha)
                              : families::atom_below_uniform(3.0 * alpha - 2.0);
      } else {
        z = alpha >= 1.0 / 6.0 ? families::atom_below_uniform(alpha)
                               : families::uniform_below_atom(3.0 * alpha);
      }
      break;
    case ShapeClass::UnimodalSymmetric:
      if (sup) {
        if (alpha < 0.5) {
          z = families::center_flat(1.0 - 0.5 * alpha);
        } else if (alpha < 5.0 / 6.0) {
          z = families::center_flat(0.5);
        } else {
          z = families::center_flat(3.0 * alpha - 2.0);
        }
      } else {
        if (alpha > 0.5) {
          z = families::center_flat(0.5 * (1.0 + alpha));
        } else if (alpha > 1.0 / 6.0) {
          z = families::center_flat(0.5);
        } else {
          z = families::center_flat(1.0 - 3.0 * alpha);
        }
      }
      break;
  }
  return z.affine(m.sigma, m.mu);
}

}  // namespace drmb
