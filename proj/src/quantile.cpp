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

#include "drmb/quantile.hpp"

#include "drmb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace drmb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStructTol = 1e-11;
}  // namespace

const char* to_string(ShapeClass c) {
  switch (c) {
    case ShapeClass::General: return "general";
    case ShapeClass::Symmetric: return "symmetric";
    case ShapeClass::Unimodal: return "unimodal";
    case ShapeClass::UnimodalSymmetric: return "us";
  }
  return "?";
}

ShapeClass parse_shape_class(const std::string& name) {
  if (name == "general") return ShapeClass::General;
  if (name == "symmetric") return ShapeClass::Symmetric;
  if (name == "unimodal") return ShapeClass::Unimodal;
  if (name == "us" || name == "unimodal-symmetric") return ShapeClass::UnimodalSymmetric;
  throw std::invalid_argument("unknown shape class: " + name);
}

QuantileFunction::QuantileFunction(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("quantile: no segments");
  if (segments_.front().lo != 0.0 || segments_.back().hi != 1.0)
    throw std::invalid_argument("quantile: segments must cover (0,1)");
  double prev_hi = 0.0;
  double prev_val = -kInf;
  for (const Segment& s : segments_) {
    if (s.lo != prev_hi) throw std::invalid_argument("quantile: segments must be contiguous");
    if (s.hi <= s.lo) throw std::invalid_argument("quantile: empty segment");
    if (!(s.slope >= 0.0) || !std::isfinite(s.slope))
      throw std::invalid_argument("quantile: slope must be finite and nonnegative");
    // relative slack: steep segments carry rounding proportional to their values
    const double tol =
        kStructTol * std::max({1.0, std::fabs(s.a), std::fabs(prev_val)});
    if (s.a < prev_val - tol)
      throw std::invalid_argument("quantile: values must be nondecreasing");
    prev_val = s.hi_value();
    prev_hi = s.hi;
  }
}

QuantileFunction QuantileFunction::constant(double value) {
  return QuantileFunction({Segment{0.0, 1.0, value, 0.0}});
}

double QuantileFunction::value(double p, Side side) const {
  if (p <= 0.0) return segments_.front().a;
  if (p >= 1.0) return segments_.back().hi_value();
  size_t i = 0;
  while (i + 1 < segments_.size() && p >= segments_[i].hi) ++i;
  const Segment& s = segments_[i];
  if (p == s.lo && i > 0 && side == Side::Left) return segments_[i - 1].hi_value();
  return s.value(p);
}

QuantileFunction QuantileFunction::affine(double scale, double shift) const {
  if (!(scale > 0.0)) throw std::invalid_argument("quantile affine: scale must be > 0");
  std::vector<Segment> out = segments_;
  for (Segment& s : out) {
    s.a = scale * s.a + shift;
    s.slope *= scale;
  }
  return QuantileFunction(std::move(out));
}

QuantileFunction QuantileFunction::reflect() const {
  std::vector<Segment> out;
  for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
    Segment s;
    s.lo = 1.0 - it->hi;
    s.hi = 1.0 - it->lo;
    s.a = -it->hi_value();
    s.slope = it->slope;
    out.push_back(s);
  }
  return QuantileFunction(std::move(out));
}

double QuantileFunction::mean() const {
  double total = 0.0;
  for (const Segment& s : segments_) {
    const double w = s.hi - s.lo;
    total += s.a * w + 0.5 * s.slope * w * w;
  }
  return total;
}

double QuantileFunction::second_moment() const {
  double total = 0.0;
  for (const Segment& s : segments_) {
    const double w = s.hi - s.lo;
    if (s.slope == 0.0) {
      total += s.a * s.a * w;
    } else {
      const double b = s.a + s.slope * w;
      total += (b * b * b - s.a * s.a * s.a) / (3.0 * s.slope);
    }
  }
  return total;
}

double QuantileFunction::variance() const {
  const double m = mean();
  return second_moment() - m * m;
}

double mean(const QuantileFunction& q) { return q.mean(); }
double variance(const QuantileFunction& q) { return q.variance(); }

namespace {

// exact \int_{x0}^{x1} (v0 + B (p - x0)) * density(p) dp for one density
// piece, written through the local moments M0 = int density and
// M1 = int (p - x0) density so steep quantile segments never multiply a
// cancellation-prone power difference
double segment_density_integral(double v0, double B, double x0, double x1,
                                const DensityPiece& d) {
  if (x1 <= x0) return 0.0;
  const double w = x1 - x0;
  switch (d.shape) {
    case DensityPiece::Shape::Constant: {
      const double m0 = d.coef * w;
      const double m1 = d.coef * 0.5 * w * w;
      return v0 * m0 + B * m1;
    }
    case DensityPiece::Shape::PowerAtHi: {
      // u = hi - p decreases from u_hi to u_lo across [x0, x1]
      const double u_hi = d.hi - x0;
      const double u_lo = d.hi - x1;
      if (u_lo <= 0.0 && d.e <= -1.0) return d.coef > 0.0 ? kInf : -kInf;
      const double e1 = d.e + 1.0, e2 = d.e + 2.0;
      const double m0 = d.coef * stable_power_difference(u_hi, u_lo, w, e1) / e1;
      const double m1 =
          u_hi * m0 - d.coef * stable_power_difference(u_hi, u_lo, w, e2) / e2;
      return v0 * m0 + B * m1;
    }
    case DensityPiece::Shape::PowerAtLo: {
      const double u_lo = x0 - d.lo;
      const double u_hi = x1 - d.lo;
      if (u_lo <= 0.0 && d.e <= -1.0) return d.coef > 0.0 ? kInf : -kInf;
      const double e1 = d.e + 1.0, e2 = d.e + 2.0;
      const double m0 = d.coef * stable_power_difference(u_hi, u_lo, w, e1) / e1;
      const double m1 =
          d.coef * stable_power_difference(u_hi, u_lo, w, e2) / e2 - u_lo * m0;
      return v0 * m0 + B * m1;
    }
  }
  return 0.0;
}

}  // namespace

double integrate_quantile(const QuantileFunction& q, const DerivativeMeasure& m) {
  double total = 0.0;
  for (const MassAtom& a : m.atoms) total += a.mass * q.value(a.p, a.q_side);
  for (const DensityPiece& d : m.densities) {
    for (const auto& s : q.segments()) {
      const double x0 = std::max(d.lo, s.lo);
      const double x1 = std::min(d.hi, s.hi);
      if (x1 <= x0) continue;
      total += segment_density_integral(s.value(x0), s.slope, x0, x1, d);
    }
  }
  return total;
}

double rho(const DistortionFunction& h, const QuantileFunction& q) {
  return integrate_quantile(q, h.dual().derivative_measure(1));
}

namespace {

bool moments_match(const QuantileFunction& q, const MomentSpec& m, double tol) {
  return std::fabs(q.mean() - m.mu) <= tol &&
         std::fabs(q.variance() - m.sigma * m.sigma) <= tol;
}

// merge segments that continue one another with the same slope, so laws with
// different segmentations of the same quantile compare equal
std::vector<QuantileFunction::Segment> canonical_segments(
    const QuantileFunction& q) {
  std::vector<QuantileFunction::Segment> out;
  for (const auto& s : q.segments()) {
    if (!out.empty()) {
      auto& b = out.back();
      const double vtol = 1e-12 * std::max(1.0, std::fabs(b.hi_value()));
      const double stol = 1e-12 * std::max(1.0, b.slope);
      if (std::fabs(b.hi_value() - s.a) <= vtol &&
          std::fabs(b.slope - s.slope) <= stol) {
        b.hi = s.hi;
        continue;
      }
    }
    out.push_back(s);
  }
  return out;
}

// structural check: the law of 2 mu - X must coincide with the law of X.
// Comparing canonical segments keeps the test robust for members with very
// steep quantile pieces, where pointwise sums drown in rounding.
bool is_symmetric(const QuantileFunction& q, double mu, double tol) {
  const auto a = canonical_segments(q);
  const auto b = canonical_segments(q.reflect().affine(1.0, 2.0 * mu));
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a[i].lo - b[i].lo) > 1e-12) return false;
    if (std::fabs(a[i].hi - b[i].hi) > 1e-12) return false;
    const double vtol = tol * std::max({1.0, std::fabs(a[i].a), std::fabs(b[i].a)});
    if (std::fabs(a[i].a - b[i].a) > vtol) return false;
    const double stol = tol * std::max({1.0, a[i].slope, b[i].slope});
    if (std::fabs(a[i].slope - b[i].slope) > stol) return false;
  }
  return true;
}

bool is_unimodal(const QuantileFunction& q, double tol) {
  const auto& segs = q.segments();
  // contiguous support: no value gaps between segments
  for (size_t i = 0; i + 1 < segs.size(); ++i) {
    if (segs[i + 1].a - segs[i].hi_value() > tol) return false;
  }
  // slope profile nonincreasing then nondecreasing (mode at the flattest point)
  size_t turn = 0;
  for (size_t i = 0; i + 1 < segs.size(); ++i) {
    if (segs[i + 1].slope < segs[i].slope - tol)
      turn = i + 1;  // last strict decrease
  }
  for (size_t i = 0; i + 1 < segs.size(); ++i) {
    if (i + 1 <= turn) {
      if (segs[i + 1].slope > segs[i].slope + tol) return false;
    } else {
      if (segs[i + 1].slope < segs[i].slope - tol) return false;
    }
  }
  return true;
}

}  // namespace

bool validate_shape(const QuantileFunction& q, ShapeClass cls,
                    const MomentSpec& m, double tol) {
  if (!(m.sigma > 0.0)) return false;
  if (!moments_match(q, m, tol)) return false;
  if (cls == ShapeClass::General) return true;
  // structural checks run on the standardized quantile, so the tolerance is
  // scale-free
  const QuantileFunction z = q.affine(1.0 / m.sigma, -m.mu / m.sigma);
  const double stol = std::max(tol, 1e-9);
  switch (cls) {
    case ShapeClass::General:
      return true;
    case ShapeClass::Symmetric:
      return is_symmetric(z, 0.0, stol);
    case ShapeClass::Unimodal:
      return is_unimodal(z, stol);
    case ShapeClass::UnimodalSymmetric:
      return is_symmetric(z, 0.0, stol) && is_unimodal(z, stol);
  }
  return false;
}

double tail_bound(ShapeClass cls, double v) {
  if (v < 0.0) throw std::invalid_argument("tail_bound: v must be >= 0");
  switch (cls) {
    case ShapeClass::General:
      return 1.0 / (1.0 + v * v);
    case ShapeClass::Symmetric: {
      const double w = std::max(1.0, v);
      return 1.0 / (2.0 * w * w);
    }
    case ShapeClass::Unimodal: {
      const double branch = std::sqrt(5.0 / 3.0);
      if (v < branch) return (3.0 - v * v) / (3.0 * (1.0 + v * v));
      return 4.0 / (9.0 * (1.0 + v * v));
    }
    case ShapeClass::UnimodalSymmetric: {
      const double branch = 2.0 / std::sqrt(3.0);
      if (v < branch) return 0.5 * (1.0 - v / std::sqrt(3.0));
      return 2.0 / (9.0 * v * v);
    }
  }
  return 0.0;
}

void QuantileFunction::export_csv(std::ostream& os, int grid) const {
  os << "p,q\n";
  char buf[96];
  auto row = [&](double p, double v) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", p, v);
    os << buf;
  };
  for (const Segment& s : segments_) {
    row(s.lo, s.a);
    if (grid > 1) {
      const double step = (s.hi - s.lo) / grid;
      for (int k = 1; k < grid; ++k) row(s.lo + k * step, s.value(s.lo + k * step));
    }
    row(s.hi, s.hi_value());
  }
}

}  // namespace drmb
