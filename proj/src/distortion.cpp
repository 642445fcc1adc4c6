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

#include "drmb/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace drmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kValueTol = 1e-12;

}  // namespace

double DensityPiece::density(double p) const {
  switch (shape) {
    case Shape::Constant:
      return coef;
    case Shape::PowerAtLo:
      return coef * std::pow(p - lo, e);
    case Shape::PowerAtHi:
      return coef * std::pow(hi - p, e);
  }
  return 0.0;
}

DerivativeMeasure DerivativeMeasure::scaled(double factor) const {
  DerivativeMeasure out = *this;
  for (auto& a : out.atoms) a.mass *= factor;
  for (auto& d : out.densities) d.coef *= factor;
  return out;
}

double DerivativeMeasure::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms) total += a.mass;
  for (const auto& d : densities) {
    const double len = d.hi - d.lo;
    if (len <= 0.0) continue;
    switch (d.shape) {
      case DensityPiece::Shape::Constant:
        total += d.coef * len;
        break;
      case DensityPiece::Shape::PowerAtLo:
      case DensityPiece::Shape::PowerAtHi:
        if (d.e <= -1.0) return d.coef >= 0.0 ? kInf : -kInf;
        total += d.coef * std::pow(len, d.e + 1.0) / (d.e + 1.0);
        break;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Piece

double DistortionFunction::Piece::value(double p) const {
  switch (form) {
    case Form::Affine:
      return a + s * (p - lo);
    case Form::PowerAtLo:
      return a + c * std::pow(p - lo, e);
    case Form::PowerAtHi:
      return a - c * std::pow(hi - p, e);
  }
  return a;
}

double DistortionFunction::Piece::slope(double p) const {
  switch (form) {
    case Form::Affine:
      return s;
    case Form::PowerAtLo:
      return c * e * std::pow(p - lo, e - 1.0);
    case Form::PowerAtHi:
      return c * e * std::pow(hi - p, e - 1.0);
  }
  return 0.0;
}

double DistortionFunction::Piece::lo_value() const {
  switch (form) {
    case Form::Affine:
    case Form::PowerAtLo:
      return a;
    case Form::PowerAtHi:
      return a - c * std::pow(hi - lo, e);
  }
  return a;
}

double DistortionFunction::Piece::hi_value() const {
  switch (form) {
    case Form::Affine:
      return a + s * (hi - lo);
    case Form::PowerAtLo:
      return a + c * std::pow(hi - lo, e);
    case Form::PowerAtHi:
      return a;
  }
  return a;
}

double DistortionFunction::Piece::lo_slope() const {
  switch (form) {
    case Form::Affine:
      return s;
    case Form::PowerAtLo:
      if (e < 1.0) return c == 0.0 ? 0.0 : kInf;
      if (e == 1.0) return c;
      return 0.0;
    case Form::PowerAtHi:
      return c * e * std::pow(hi - lo, e - 1.0);
  }
  return 0.0;
}

double DistortionFunction::Piece::hi_slope() const {
  switch (form) {
    case Form::Affine:
      return s;
    case Form::PowerAtLo:
      return c * e * std::pow(hi - lo, e - 1.0);
    case Form::PowerAtHi:
      if (e < 1.0) return c == 0.0 ? 0.0 : kInf;
      if (e == 1.0) return c;
      return 0.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Factories

DistortionFunction DistortionFunction::identity() {
  DistortionFunction h;
  h.kind_ = DistortionKind::Identity;
  Piece p;
  p.lo = 0.0;
  p.hi = 1.0;
  p.form = Piece::Form::Affine;
  p.a = 0.0;
  p.s = 1.0;
  h.pieces_ = {p};
  h.validate();
  return h;
}

DistortionFunction DistortionFunction::var(double alpha, Side side) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DistortionError("var: alpha must lie in (0,1)");
  DistortionFunction h;
  h.kind_ = DistortionKind::VaR;
  h.alpha_ = alpha;
  const double t = 1.0 - alpha;
  Piece lo{0.0, t, Piece::Form::Affine, 0.0, 0.0, 0.0, 1.0};
  Piece hi{t, 1.0, Piece::Form::Affine, 1.0, 0.0, 0.0, 1.0};
  h.pieces_ = {lo, hi};
  h.joint_sides_ = {side};
  h.validate();
  return h;
}

DistortionFunction DistortionFunction::tvar(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DistortionError("tvar: alpha must lie in (0,1)");
  DistortionFunction h;
  h.kind_ = DistortionKind::TVaR;
  h.alpha_ = alpha;
  const double t = 1.0 - alpha;
  Piece lo{0.0, t, Piece::Form::Affine, 0.0, 1.0 / t, 0.0, 1.0};
  Piece hi{t, 1.0, Piece::Form::Affine, 1.0, 0.0, 0.0, 1.0};
  h.pieces_ = {lo, hi};
  h.joint_sides_ = {Side::Right};
  h.validate();
  return h;
}

DistortionFunction DistortionFunction::rvar(double alpha, double beta) {
  if (!(alpha > 0.0 && alpha < beta && beta < 1.0))
    throw DistortionError("rvar: need 0 < alpha < beta < 1");
  DistortionFunction h;
  h.kind_ = DistortionKind::RVaR;
  h.alpha_ = alpha;
  h.beta_ = beta;
  Piece p0{0.0, 1.0 - beta, Piece::Form::Affine, 0.0, 0.0, 0.0, 1.0};
  Piece p1{1.0 - beta, 1.0 - alpha, Piece::Form::Affine, 0.0,
           1.0 / (beta - alpha), 0.0, 1.0};
  Piece p2{1.0 - alpha, 1.0, Piece::Form::Affine, 1.0, 0.0, 0.0, 1.0};
  h.pieces_ = {p0, p1, p2};
  h.joint_sides_ = {Side::Right, Side::Right};
  h.validate();
  return h;
}

DistortionFunction DistortionFunction::ph(double alpha, double r) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DistortionError("ph: alpha must lie in (0,1)");
  if (!(r > 0.0 && r <= 1.0)) throw DistortionError("ph: r must lie in (0,1]");
  DistortionFunction h;
  h.kind_ = DistortionKind::ProportionalHazard;
  h.alpha_ = alpha;
  h.r_ = r;
  const double t = 1.0 - alpha;
  Piece lo;
  lo.lo = 0.0;
  lo.hi = t;
  if (r == 1.0) {
    lo.form = Piece::Form::Affine;
    lo.a = 0.0;
    lo.s = 1.0 / t;
  } else {
    lo.form = Piece::Form::PowerAtLo;
    lo.a = 0.0;
    lo.c = std::pow(t, -r);
    lo.e = r;
  }
  Piece hi{t, 1.0, Piece::Form::Affine, 1.0, 0.0, 0.0, 1.0};
  h.pieces_ = {lo, hi};
  h.joint_sides_ = {Side::Right};
  h.validate();
  return h;
}

DistortionFunction DistortionFunction::power(double e) {
  if (!(e > 0.0)) throw DistortionError("power: exponent must be positive");
  DistortionFunction h;
  h.kind_ = DistortionKind::Power;
  h.r_ = e;
  Piece p;
  p.lo = 0.0;
  p.hi = 1.0;
  if (e == 1.0) {
    p.form = Piece::Form::Affine;
    p.a = 0.0;
    p.s = 1.0;
  } else {
    p.form = Piece::Form::PowerAtLo;
    p.a = 0.0;
    p.c = 1.0;
    p.e = e;
  }
  h.pieces_ = {p};
  h.validate();
  return h;
}

DistortionFunction DistortionFunction::piecewise_linear(
    const std::vector<XY>& points) {
  if (points.size() < 2) throw DistortionError("pwl: need at least two points");
  if (points.front().x != 0.0 || points.back().x != 1.0)
    throw DistortionError("pwl: breakpoints must span [0,1]");
  DistortionFunction h;
  h.kind_ = DistortionKind::PiecewiseLinear;
  for (size_t i = 0; i + 1 < points.size(); ++i) {
    const XY& a = points[i];
    const XY& b = points[i + 1];
    if (b.x < a.x || b.y < a.y - kValueTol)
      throw DistortionError("pwl: breakpoints must be nondecreasing");
    if (b.x == a.x) continue;  // vertical run = jump between neighboring pieces
    Piece p;
    p.lo = a.x;
    p.hi = b.x;
    p.form = Piece::Form::Affine;
    p.a = a.y;
    p.s = (b.y - a.y) / (b.x - a.x);
    h.pieces_.push_back(p);
    h.joint_sides_.push_back(Side::Right);
  }
  if (h.pieces_.empty()) throw DistortionError("pwl: no nondegenerate segment");
  h.joint_sides_.pop_back();  // joints live between pieces
  h.validate();
  return h;
}

DistortionFunction DistortionFunction::piecewise_constant(
    const std::vector<PwcStep>& steps) {
  if (steps.empty()) throw DistortionError("steps: empty");
  if (steps.back().t != 1.0 || steps.back().level != 1.0)
    throw DistortionError("steps: last entry must be (1, 1)");
  if (steps.front().t > 0.0 && steps.front().level != 0.0)
    throw DistortionError("steps: first level must be 0");
  double prev_t = 0.0;
  double prev_level = 0.0;
  DistortionFunction h;
  h.kind_ = DistortionKind::PiecewiseConstant;
  for (size_t i = 0; i < steps.size(); ++i) {
    const PwcStep& st = steps[i];
    if (st.t < prev_t || st.level < prev_level - kValueTol)
      throw DistortionError("steps: locations and levels must be nondecreasing");
    if (st.t > prev_t) {
      // level c_i applies on (t_{i-1}, t_i]; the jump at t_i carries the side
      Piece p{prev_t, st.t, Piece::Form::Affine, st.level, 0.0, 0.0, 1.0};
      h.pieces_.push_back(p);
      h.joint_sides_.push_back(st.side);
    }
    prev_t = st.t;
    prev_level = st.level;
  }
  if (h.pieces_.empty()) throw DistortionError("steps: no interval of positive length");
  h.joint_sides_.pop_back();
  h.validate();
  return h;
}

void DistortionFunction::validate() const {
  if (pieces_.empty()) throw DistortionError("empty distortion");
  if (pieces_.front().lo != 0.0 || pieces_.back().hi != 1.0)
    throw DistortionError("pieces must cover [0,1]");
  double prev_hi = 0.0;
  double prev_val = 0.0;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    if (i > 0 && p.lo != prev_hi) throw DistortionError("pieces must be contiguous");
    if (p.hi <= p.lo) throw DistortionError("piece of nonpositive length");
    if (p.form == Piece::Form::Affine && p.s < 0.0)
      throw DistortionError("distortion must be nondecreasing");
    if (p.form != Piece::Form::Affine && (p.c < 0.0 || p.e <= 0.0))
      throw DistortionError("power piece must be nondecreasing");
    if (p.lo_value() < prev_val - kValueTol)
      throw DistortionError("distortion must be nondecreasing across joints");
    if (p.lo_value() < -kValueTol || p.hi_value() > 1.0 + kValueTol)
      throw DistortionError("distortion values must lie in [0,1]");
    prev_val = p.hi_value();
    prev_hi = p.hi;
  }
  if (prev_val > 1.0 + kValueTol)
    throw DistortionError("h(1-) exceeds 1");
  if (joint_sides_.size() + 1 != pieces_.size())
    throw DistortionError("joint side metadata inconsistent");
}

// ---------------------------------------------------------------------------
// Evaluation

double DistortionFunction::eval(double p, Side side) const {
  if (p < 0.0 || p > 1.0) throw DistortionError("eval: p outside [0,1]");
  if (p == 0.0) return side == Side::Left ? 0.0 : pieces_.front().lo_value();
  if (p == 1.0) return side == Side::Right ? 1.0 : pieces_.back().hi_value();
  // locate piece with lo <= p < hi
  size_t i = 0;
  while (i + 1 < pieces_.size() && p >= pieces_[i].hi) ++i;
  const Piece& pc = pieces_[i];
  if (p == pc.lo && i > 0 && side == Side::Left) return pieces_[i - 1].hi_value();
  return pc.value(p);
}

double DistortionFunction::operator()(double p) const {
  if (p < 0.0 || p > 1.0) throw DistortionError("eval: p outside [0,1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  size_t i = 0;
  while (i + 1 < pieces_.size() && p >= pieces_[i].hi) ++i;
  const Piece& pc = pieces_[i];
  if (p == pc.lo && i > 0) {
    const Side side = joint_sides_[i - 1];
    return side == Side::Left ? pieces_[i - 1].hi_value() : pc.lo_value();
  }
  return pc.value(p);
}

bool DistortionFunction::left_continuous() const {
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double gap = pieces_[i + 1].lo_value() - pieces_[i].hi_value();
    if (gap > kValueTol && joint_sides_[i] != Side::Left) return false;
  }
  return true;
}

bool DistortionFunction::right_continuous() const {
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double gap = pieces_[i + 1].lo_value() - pieces_[i].hi_value();
    if (gap > kValueTol && joint_sides_[i] != Side::Right) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dual

DistortionFunction DistortionFunction::dual() const {
  DistortionFunction d;
  switch (kind_) {
    case DistortionKind::Identity:
      return identity();
    case DistortionKind::VaR:
    case DistortionKind::PiecewiseConstant:
      d.kind_ = DistortionKind::PiecewiseConstant;
      break;
    default:
      d.kind_ = DistortionKind::PiecewiseLinear;
      break;
  }
  d.alpha_ = alpha_;
  d.beta_ = beta_;
  d.r_ = r_;
  for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
    const Piece& p = *it;
    Piece q;
    q.lo = 1.0 - p.hi;
    q.hi = 1.0 - p.lo;
    switch (p.form) {
      case Piece::Form::Affine:
        q.form = Piece::Form::Affine;
        q.a = std::clamp(1.0 - p.hi_value(), 0.0, 1.0);
        q.s = p.s;
        break;
      case Piece::Form::PowerAtLo:
        q.form = Piece::Form::PowerAtHi;
        q.a = std::clamp(1.0 - p.lo_value(), 0.0, 1.0);
        q.c = p.c;
        q.e = p.e;
        break;
      case Piece::Form::PowerAtHi:
        q.form = Piece::Form::PowerAtLo;
        q.a = std::clamp(1.0 - p.hi_value(), 0.0, 1.0);
        q.c = p.c;
        q.e = p.e;
        break;
    }
    d.pieces_.push_back(q);
  }
  for (auto it = joint_sides_.rbegin(); it != joint_sides_.rend(); ++it)
    d.joint_sides_.push_back(*it == Side::Left ? Side::Right : Side::Left);
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Classification

Classification DistortionFunction::classify() const {
  Classification c;
  c.grid = 0;

  bool interior_jump = false;
  bool all_flat = true;
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double gap = pieces_[i + 1].lo_value() - pieces_[i].hi_value();
    if (gap > kValueTol) {
      interior_jump = true;
      if (joint_sides_[i] != Side::Left) c.continuity.left = false;
      if (joint_sides_[i] != Side::Right) c.continuity.right = false;
    }
  }
  const double h0p = pieces_.front().lo_value();
  const double h1m = pieces_.back().hi_value();
  const bool jump_at_0 = h0p > kValueTol;
  const bool jump_at_1 = h1m < 1.0 - kValueTol;
  if (jump_at_0) c.continuity.right = false;  // h(0) = 0 < h(0+)
  if (jump_at_1) c.continuity.left = false;   // h(1-) < 1 = h(1)
  c.boundary_ok = !jump_at_0 && !jump_at_1;

  for (const Piece& p : pieces_) {
    const bool flat =
        (p.form == Piece::Form::Affine && p.s == 0.0) || (p.c == 0.0 && p.form != Piece::Form::Affine);
    if (!flat) all_flat = false;
  }
  c.is_simple = all_flat;

  // slope monotonicity across the whole domain (one-sided slopes at joints)
  bool nondecr = true, nonincr = true;
  double prev_hi_slope = -kInf;
  bool first = true;
  for (const Piece& p : pieces_) {
    const double lo_s = p.lo_slope();
    const double hi_s = p.hi_slope();
    if (!first) {
      if (lo_s < prev_hi_slope - kValueTol) nondecr = false;
      if (lo_s > prev_hi_slope + kValueTol) nonincr = false;
    }
    // inside a piece the slope is monotone, so the endpoint slopes decide
    if (lo_s > hi_s + kValueTol) nondecr = false;
    if (lo_s < hi_s - kValueTol) nonincr = false;
    prev_hi_slope = hi_s;
    first = false;
  }
  c.is_convex = nondecr && !interior_jump && !jump_at_0;
  c.is_concave = nonincr && !interior_jump && !jump_at_1;
  return c;
}

// ---------------------------------------------------------------------------
// Derivative measures

DerivativeMeasure DistortionFunction::derivative_measure(int order) const {
  if (order != 1 && order != 2)
    throw DistortionError("derivative_measure: order must be 1 or 2");
  DerivativeMeasure m;
  if (order == 1) {
    // jump at 0 (h(0)=0 pinned below h(0+))
    const double j0 = pieces_.front().lo_value();
    if (j0 > kValueTol) m.atoms.push_back({0.0, j0, Side::Right});
    for (size_t i = 0; i < pieces_.size(); ++i) {
      const Piece& p = pieces_[i];
      switch (p.form) {
        case Piece::Form::Affine:
          if (p.s != 0.0)
            m.densities.push_back({p.lo, p.hi, DensityPiece::Shape::Constant, p.s, 0.0});
          break;
        case Piece::Form::PowerAtLo:
          if (p.c != 0.0)
            m.densities.push_back(
                {p.lo, p.hi, DensityPiece::Shape::PowerAtLo, p.c * p.e, p.e - 1.0});
          break;
        case Piece::Form::PowerAtHi:
          if (p.c != 0.0)
            m.densities.push_back(
                {p.lo, p.hi, DensityPiece::Shape::PowerAtHi, p.c * p.e, p.e - 1.0});
          break;
      }
      if (i + 1 < pieces_.size()) {
        const double jump = pieces_[i + 1].lo_value() - p.hi_value();
        if (jump > kValueTol) {
          const Side q_side =
              joint_sides_[i] == Side::Left ? Side::Right : Side::Left;
          m.atoms.push_back({p.hi, jump, q_side});
        }
      }
    }
    const double j1 = 1.0 - pieces_.back().hi_value();
    if (j1 > kValueTol) m.atoms.push_back({1.0, j1, Side::Left});
    return m;
  }

  // order 2: d(h') for functions without value jumps
  for (size_t i = 0; i + 1 < pieces_.size(); ++i) {
    if (pieces_[i + 1].lo_value() - pieces_[i].hi_value() > kValueTol)
      throw DistortionError(
          "derivative_measure: order 2 undefined for a function with jumps");
  }
  if (pieces_.front().lo_value() > kValueTol ||
      pieces_.back().hi_value() < 1.0 - kValueTol)
    throw DistortionError(
        "derivative_measure: order 2 undefined for a function with boundary jumps");

  for (size_t i = 0; i < pieces_.size(); ++i) {
    const Piece& p = pieces_[i];
    switch (p.form) {
      case Piece::Form::Affine:
        break;  // no curvature
      case Piece::Form::PowerAtLo:
        // v'' = c e (e-1) (p-lo)^{e-2}
        if (p.c != 0.0 && p.e != 1.0)
          m.densities.push_back({p.lo, p.hi, DensityPiece::Shape::PowerAtLo,
                                 p.c * p.e * (p.e - 1.0), p.e - 2.0});
        break;
      case Piece::Form::PowerAtHi:
        // v'' = -c e (e-1) (hi-p)^{e-2}
        if (p.c != 0.0 && p.e != 1.0)
          m.densities.push_back({p.lo, p.hi, DensityPiece::Shape::PowerAtHi,
                                 -p.c * p.e * (p.e - 1.0), p.e - 2.0});
        break;
    }
    if (i + 1 < pieces_.size()) {
      const double left_slope = p.hi_slope();
      const double right_slope = pieces_[i + 1].lo_slope();
      if (std::isinf(left_slope) || std::isinf(right_slope))
        continue;  // the power density already carries the blow-up
      const double jump = right_slope - left_slope;
      if (std::fabs(jump) > kValueTol)
        m.atoms.push_back({p.hi, jump, Side::Right});
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Hull points and envelopes

std::vector<XY> DistortionFunction::hull_points(int grid) const {
  std::vector<XY> pts;
  pts.push_back({0.0, 0.0});
  pts.push_back({1.0, 1.0});
  for (const Piece& p : pieces_) {
    pts.push_back({p.lo, p.lo_value()});
    pts.push_back({p.hi, p.hi_value()});
    if (p.form != Piece::Form::Affine && grid > 1) {
      const double step = (p.hi - p.lo) / grid;
      for (int k = 1; k < grid; ++k) {
        const double x = p.lo + k * step;
        pts.push_back({x, p.value(x)});
      }
    }
  }
  return pts;
}

namespace {

DistortionFunction pwl_from_vertices(const std::vector<XY>& v) {
  std::vector<XY> pts = v;
  for (XY& p : pts) p.y = std::clamp(p.y, 0.0, 1.0);  // shave rounding overshoot
  if (pts.front().x != 0.0) pts.insert(pts.begin(), {0.0, pts.front().y});
  if (pts.back().x != 1.0) pts.push_back({1.0, pts.back().y});
  return DistortionFunction::piecewise_linear(pts);
}

}  // namespace

DistortionFunction convex_envelope(const DistortionFunction& h, int grid) {
  const Classification c = h.classify();
  if (c.is_convex) return h;
  if (c.is_concave && c.boundary_ok) return DistortionFunction::identity();
  auto hull = lower_convex_hull(h.hull_points(grid));
  return pwl_from_vertices(hull);
}

DistortionFunction concave_envelope(const DistortionFunction& h, int grid) {
  const Classification c = h.classify();
  if (c.is_concave) return h;
  if (c.is_convex && c.boundary_ok) return DistortionFunction::identity();
  auto hull = upper_concave_hull(h.hull_points(grid));
  return pwl_from_vertices(hull);
}

// ---------------------------------------------------------------------------
// Parsing / printing

namespace {

std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw DistortionError("bad number: " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

DistortionFunction parse_distortion(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string args =
      colon == std::string::npos ? std::string() : spec.substr(colon + 1);
  if (name == "identity") return DistortionFunction::identity();
  if (name == "var") {
    const auto v = parse_numbers(args, ',');
    if (v.size() != 1) throw DistortionError("var:<alpha>");
    return DistortionFunction::var(v[0]);
  }
  if (name == "var+") {
    const auto v = parse_numbers(args, ',');
    if (v.size() != 1) throw DistortionError("var+:<alpha>");
    return DistortionFunction::var(v[0], Side::Right);
  }
  if (name == "tvar") {
    const auto v = parse_numbers(args, ',');
    if (v.size() != 1) throw DistortionError("tvar:<alpha>");
    return DistortionFunction::tvar(v[0]);
  }
  if (name == "rvar") {
    const auto v = parse_numbers(args, ',');
    if (v.size() != 2) throw DistortionError("rvar:<alpha>,<beta>");
    return DistortionFunction::rvar(v[0], v[1]);
  }
  if (name == "ph") {
    const auto v = parse_numbers(args, ',');
    if (v.size() != 2) throw DistortionError("ph:<alpha>,<r>");
    return DistortionFunction::ph(v[0], v[1]);
  }
  if (name == "pow") {
    const auto v = parse_numbers(args, ',');
    if (v.size() != 1) throw DistortionError("pow:<e>");
    return DistortionFunction::power(v[0]);
  }
  if (name == "pwl" || name == "steps") {
    std::vector<std::pair<double, double>> pairs;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto v = parse_numbers(item, ',');
      if (v.size() != 2) throw DistortionError("expected p,v pairs");
      pairs.emplace_back(v[0], v[1]);
    }
    if (name == "pwl") {
      std::vector<XY> pts;
      for (auto& pr : pairs) pts.push_back({pr.first, pr.second});
      return DistortionFunction::piecewise_linear(pts);
    }
    std::vector<PwcStep> steps;
    for (auto& pr : pairs) steps.push_back({pr.first, pr.second, Side::Right});
    return DistortionFunction::piecewise_constant(steps);
  }
  throw DistortionError("unknown distortion spec: " + spec);
}

std::string DistortionFunction::to_string() const {
  char buf[128];
  switch (kind_) {
    case DistortionKind::Identity:
      return "identity";
    case DistortionKind::VaR:
      std::snprintf(buf, sizeof buf, "var:%g", alpha_);
      return buf;
    case DistortionKind::TVaR:
      std::snprintf(buf, sizeof buf, "tvar:%g", alpha_);
      return buf;
    case DistortionKind::RVaR:
      std::snprintf(buf, sizeof buf, "rvar:%g,%g", alpha_, beta_);
      return buf;
    case DistortionKind::ProportionalHazard:
      std::snprintf(buf, sizeof buf, "ph:%g,%g", alpha_, r_);
      return buf;
    case DistortionKind::Power:
      std::snprintf(buf, sizeof buf, "pow:%g", r_);
      return buf;
    case DistortionKind::PiecewiseLinear:
      return "pwl";
    case DistortionKind::PiecewiseConstant:
      return "steps";
  }
  return "?";
}

}  // namespace drmb
