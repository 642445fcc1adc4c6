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

#include "drmb/drm_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drmb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-12;

bool is_identity(const DistortionFunction& h) {
  for (const auto& p : h.pieces()) {
    if (p.form != DistortionFunction::Piece::Form::Affine) return false;
    if (std::fabs(p.s - 1.0) > kTol) return false;
  }
  return true;
}

// [support_lo, support_hi] of a derivative measure
std::pair<double, double> measure_support(const DerivativeMeasure& m) {
  double lo = 1.0, hi = 0.0;
  for (const auto& a : m.atoms) {
    lo = std::min(lo, a.p);
    hi = std::max(hi, a.p);
  }
  for (const auto& d : m.densities) {
    lo = std::min(lo, d.lo);
    hi = std::max(hi, d.hi);
  }
  return {lo, hi};
}

// \int_0^1 (g'(p) - 1)^2 dp for a continuous piecewise g; +inf when a power
// piece has a non-square-integrable derivative.
double sq_slope_minus_one(const DistortionFunction& g) {
  using Form = DistortionFunction::Piece::Form;
  double total = 0.0;
  for (const auto& p : g.pieces()) {
    const double len = p.hi - p.lo;
    if (p.form == Form::Affine) {
      total += (p.s - 1.0) * (p.s - 1.0) * len;
      continue;
    }
    // slope = c e u^{e-1} with u the distance to the anchor
    if (p.c == 0.0) {
      total += len;
      continue;
    }
    if (p.e <= 0.5) return kInf;
    const double ce = p.c * p.e;
    total += ce * ce * std::pow(len, 2.0 * p.e - 1.0) / (2.0 * p.e - 1.0) -
             2.0 * p.c * std::pow(len, p.e) + len;
  }
  return total;
}

// \int_0^1 g'(p)^2 dp, same conventions
double sq_slope(const DistortionFunction& g) {
  using Form = DistortionFunction::Piece::Form;
  double total = 0.0;
  for (const auto& p : g.pieces()) {
    const double len = p.hi - p.lo;
    if (p.form == Form::Affine) {
      total += p.s * p.s * len;
      continue;
    }
    if (p.c == 0.0) continue;
    if (p.e <= 0.5) return kInf;
    const double ce = p.c * p.e;
    total += ce * ce * std::pow(len, 2.0 * p.e - 1.0) / (2.0 * p.e - 1.0);
  }
  return total;
}

// cross term \int g'(p) g'(1-p) dp for continuous g
double slope_cross_term(const DistortionFunction& g) {
  using Form = DistortionFunction::Piece::Form;
  double total = 0.0;
  for (const auto& pi : g.pieces()) {
    for (const auto& pj : g.pieces()) {
      // overlap of pi with the reflection of pj
      const double lo = std::max(pi.lo, 1.0 - pj.hi);
      const double hi = std::min(pi.hi, 1.0 - pj.lo);
      if (hi <= lo) continue;
      const bool ai = pi.form == Form::Affine;
      const bool aj = pj.form == Form::Affine;
      if (ai && aj) {
        total += pi.s * pj.s * (hi - lo);
        continue;
      }
      if ((ai && pi.s == 0.0) || (aj && pj.s == 0.0)) continue;
      auto f = [&](double p) { return pi.slope(p) * pj.slope(1.0 - p); };
      // singular exponents only when an anchor touches the overlap boundary
      double s_lo = 0.0, s_hi = 0.0;
      if (!ai && pi.form == Form::PowerAtLo && lo == pi.lo) s_lo += pi.e - 1.0;
      if (!aj && pj.form == Form::PowerAtHi && 1.0 - lo == pj.hi) s_lo += pj.e - 1.0;
      if (!ai && pi.form == Form::PowerAtHi && hi == pi.hi) s_hi += pi.e - 1.0;
      if (!aj && pj.form == Form::PowerAtLo && 1.0 - hi == pj.lo) s_hi += pj.e - 1.0;
      if (s_lo <= -1.0 || s_hi <= -1.0) return kInf;
      const IntegralResult r = integrate_singular(f, lo, hi, s_lo, s_hi, 1e-12);
      total += r.value;
    }
  }
  return total;
}

// pwc quantile with value (slope(p) - shift)/norm over the pieces of g
QuantileFunction quantile_from_slopes(const DistortionFunction& g, double shift,
                                      double norm) {
  std::vector<QuantileFunction::Segment> segs;
  for (const auto& p : g.pieces()) {
    segs.push_back({p.lo, p.hi, (p.s - shift) / norm, 0.0});
  }
  return QuantileFunction(std::move(segs));
}

bool pieces_all_affine(const DistortionFunction& g) {
  for (const auto& p : g.pieces())
    if (p.form != DistortionFunction::Piece::Form::Affine) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// General distributions (modified Schwarz bound)

BoundResult sup_general(const DistortionFunction& h, const MomentSpec& m) {
  if (!(m.sigma > 0.0)) throw std::invalid_argument("sup_general: sigma > 0 required");
  BoundResult r;
  r.side = BoundSide::Sup;
  r.method = BoundResult::Method::EnvelopeIntegral;
  const DistortionFunction g = convex_envelope(h.dual());
  const double n2 = sq_slope_minus_one(g);
  if (std::isinf(n2)) {
    r.value = kInf;
    r.diagnostic = "integral of (envelope slope - 1)^2 diverges";
    return r;
  }
  const double norm = std::sqrt(n2);
  r.value = m.mu + m.sigma * norm;
  if (norm <= kTol) {
    r.value = m.mu;
    if (is_identity(h)) {
      r.attainable = true;
      r.extremal = families::center_flat(0.5).affine(m.sigma, m.mu);
    } else {
      r.diagnostic = "supremum equals mu; approached but not attained";
    }
    return r;
  }
  r.attainable = h.right_continuous();
  if (!r.attainable) {
    r.diagnostic = "attaining law requires a right-continuous distortion";
  }
  if (pieces_all_affine(g)) {
    QuantileFunction q = quantile_from_slopes(g, 1.0, norm);
    r.extremal = q.affine(m.sigma, m.mu);
  } else if (r.attainable) {
    r.diagnostic = "extremal quantile is not piecewise affine; omitted";
  }
  return r;
}

BoundResult inf_general(const DistortionFunction& h, const MomentSpec& m) {
  if (!(m.sigma > 0.0)) throw std::invalid_argument("inf_general: sigma > 0 required");
  BoundResult r;
  r.side = BoundSide::Inf;
  r.method = BoundResult::Method::EnvelopeIntegral;
  const DistortionFunction g = convex_envelope(h);
  const double n2 = sq_slope_minus_one(g);
  if (std::isinf(n2)) {
    r.value = -kInf;
    r.diagnostic = "integral of (envelope slope - 1)^2 diverges";
    return r;
  }
  const double norm = std::sqrt(n2);
  r.value = m.mu - m.sigma * norm;
  if (norm <= kTol) {
    r.value = m.mu;
    if (is_identity(h)) {
      r.attainable = true;
      r.extremal = families::center_flat(0.5).affine(m.sigma, m.mu);
    } else {
      r.diagnostic = "infimum equals mu; approached but not attained";
    }
    return r;
  }
  r.attainable = h.left_continuous();
  if (!r.attainable) {
    r.diagnostic = "attaining law requires a left-continuous distortion";
  }
  if (pieces_all_affine(g)) {
    // best case quantile: mu - sigma (g'(1-p) - 1)/norm, nondecreasing
    QuantileFunction q = quantile_from_slopes(g, 1.0, norm).reflect();
    r.extremal = q.affine(m.sigma, m.mu);
  } else if (r.attainable) {
    r.diagnostic = "extremal quantile is not piecewise affine; omitted";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Symmetric distributions

namespace {

struct SymmetrizedResult {
  double norm = 0.0;          // L2 norm of the gcm derivative of H
  bool diverged = false;
  bool have_slopes = false;   // hull slopes available as a pwc profile
  std::vector<XY> hull;       // gcm vertices when have_slopes
};

// H(p) = (g(p) + g(1-p))/2; returns the gcm derivative data
SymmetrizedResult symmetrized_gcm(const DistortionFunction& g) {
  SymmetrizedResult out;
  if (pieces_all_affine(g)) {
    std::vector<double> xs{0.0, 1.0};
    for (const auto& p : g.pieces()) {
      xs.push_back(p.lo);
      xs.push_back(p.hi);
      xs.push_back(1.0 - p.lo);
      xs.push_back(1.0 - p.hi);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<XY> pts;
    auto H = [&g](double x, Side sx, Side srx) {
      const double a = x == 0.0 && sx == Side::Left ? 0.0 : g.eval(x, sx);
      const double b = g.eval(1.0 - x, srx);
      return 0.5 * (a + b);
    };
    for (double x : xs) {
      if (x < 0.0 || x > 1.0) continue;
      pts.push_back({x, H(x, Side::Left, Side::Right)});
      pts.push_back({x, H(x, Side::Right, Side::Left)});
      if (x == 0.0) pts.push_back({x, 0.5 * (0.0 + 1.0)});
      if (x == 1.0) pts.push_back({x, 0.5 * (1.0 + 0.0)});
    }
    out.hull = lower_convex_hull(std::move(pts));
    double n2 = 0.0;
    for (size_t i = 0; i + 1 < out.hull.size(); ++i) {
      const double len = out.hull[i + 1].x - out.hull[i].x;
      const double s = (out.hull[i + 1].y - out.hull[i].y) / len;
      n2 += s * s * len;
    }
    out.norm = std::sqrt(n2);
    out.have_slopes = true;
    return out;
  }
  // continuous g with convex pieces (dual of a concave distortion): H is
  // convex, so the gcm is H itself and the norm follows from the slopes
  const Classification c = g.classify();
  if (c.is_convex && c.continuity.continuous()) {
    const double ss = sq_slope(g);
    if (std::isinf(ss)) {
      out.diverged = true;
      return out;
    }
    const double cross = slope_cross_term(g);
    out.norm = std::sqrt(std::max(0.0, 0.5 * (ss - cross)));
    return out;
  }
  // grid fallback: sample H and hull it (slope accuracy O(1/grid))
  const int grid = 4001;
  std::vector<XY> pts;
  pts.reserve(grid + 3);
  pts.push_back({0.0, 0.5});
  for (int k = 1; k < grid; ++k) {
    const double x = static_cast<double>(k) / grid;
    pts.push_back({x, 0.5 * (g.eval(x, Side::Right) + g.eval(1.0 - x, Side::Left))});
  }
  pts.push_back({1.0, 0.5});
  out.hull = lower_convex_hull(std::move(pts));
  double n2 = 0.0;
  for (size_t i = 0; i + 1 < out.hull.size(); ++i) {
    const double len = out.hull[i + 1].x - out.hull[i].x;
    const double s = (out.hull[i + 1].y - out.hull[i].y) / len;
    n2 += s * s * len;
  }
  out.norm = std::sqrt(n2);
  out.have_slopes = true;
  return out;
}

// witness for a degenerate (value = mu) symmetric bound: a three-point law
// whose flat quantile stretch covers the support of dg
std::optional<QuantileFunction> degenerate_symmetric_witness(
    const DistortionFunction& g) {
  const auto [lo, hi] = measure_support(g.derivative_measure(1));
  const double gap = std::min(lo, 1.0 - hi);
  if (gap <= 1e-9) return std::nullopt;
  return families::three_point(0.5 * gap);
}

BoundResult symmetric_bound(const DistortionFunction& h, const MomentSpec& m,
                            BoundSide side) {
  if (!(m.sigma > 0.0))
    throw std::invalid_argument("symmetric bound: sigma > 0 required");
  BoundResult r;
  r.side = side;
  r.method = BoundResult::Method::EnvelopeIntegral;
  const bool sup = side == BoundSide::Sup;
  const DistortionFunction g = sup ? h.dual() : h;
  const SymmetrizedResult sym = symmetrized_gcm(g);
  if (sym.diverged) {
    r.value = sup ? kInf : -kInf;
    r.diagnostic = "symmetrized derivative is not square integrable";
    return r;
  }
  const double sgn = sup ? 1.0 : -1.0;
  r.value = m.mu + sgn * m.sigma * sym.norm;
  const bool side_ok = sup ? h.right_continuous() : h.left_continuous();
  if (sym.norm <= kTol) {
    r.value = m.mu;
    if (is_identity(h)) {
      r.attainable = true;
      r.extremal = families::center_flat(0.5).affine(m.sigma, m.mu);
      return r;
    }
    // a flat quantile stretch strictly covering the support of dh~ gives
    // rho = mu exactly, for either continuity side
    auto witness = degenerate_symmetric_witness(g);
    if (witness) {
      r.attainable = true;
      r.extremal = witness->affine(m.sigma, m.mu);
    } else {
      r.diagnostic = "bound equals mu; no attaining law constructed";
    }
    return r;
  }
  r.attainable = side_ok;
  if (!side_ok)
    r.diagnostic = sup ? "attaining law requires a right-continuous distortion"
                       : "attaining law requires a left-continuous distortion";
  if (sym.have_slopes) {
    std::vector<QuantileFunction::Segment> segs;
    for (size_t i = 0; i + 1 < sym.hull.size(); ++i) {
      const double len = sym.hull[i + 1].x - sym.hull[i].x;
      const double s = (sym.hull[i + 1].y - sym.hull[i].y) / len;
      segs.push_back({sym.hull[i].x, sym.hull[i + 1].x, s / sym.norm, 0.0});
    }
    // the gcm derivative of a symmetric H is antisymmetric, so the same
    // profile serves both the sup and the inf laws
    r.extremal = QuantileFunction(std::move(segs)).affine(m.sigma, m.mu);
  } else if (r.attainable) {
    r.diagnostic = "extremal quantile is not piecewise affine; omitted";
  }
  return r;
}

}  // namespace

BoundResult sup_symmetric(const DistortionFunction& h, const MomentSpec& m) {
  return symmetric_bound(h, m, BoundSide::Sup);
}

BoundResult inf_symmetric(const DistortionFunction& h, const MomentSpec& m) {
  return symmetric_bound(h, m, BoundSide::Inf);
}

// ---------------------------------------------------------------------------
// Worst-case TVaR closed forms (unimodal and unimodal-symmetric)

BoundResult tvar_sup_unimodal(double alpha, const MomentSpec& m) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("tvar_sup_unimodal: alpha in (0,1)");
  if (!(m.sigma > 0.0)) throw std::invalid_argument("sigma > 0 required");
  BoundResult r;
  r.side = BoundSide::Sup;
  r.method = BoundResult::Method::ClosedForm;
  QuantileFunction z = QuantileFunction::constant(0.0);
  if (alpha < 0.5) {
    r.value = m.mu + m.sigma * std::sqrt(alpha * (8.0 / 9.0 - alpha)) / (1.0 - alpha);
    z = families::uniform_below_atom(1.5 * alpha);
  } else {
    r.value = m.mu + m.sigma * std::sqrt(8.0 / (9.0 * (1.0 - alpha)) - 1.0);
    z = families::atom_below_uniform(0.5 * (3.0 * alpha - 1.0));
  }
  r.attainable = true;
  r.extremal = z.affine(m.sigma, m.mu);
  return r;
}

BoundResult tvar_sup_us(double alpha, const MomentSpec& m) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("tvar_sup_us: alpha in (0,1)");
  if (!(m.sigma > 0.0)) throw std::invalid_argument("sigma > 0 required");
  BoundResult r;
  r.side = BoundSide::Sup;
  r.method = BoundResult::Method::ClosedForm;
  QuantileFunction z = QuantileFunction::constant(0.0);
  if (alpha < 1.0 / 3.0) {
    r.value = m.mu + m.sigma * 2.0 * std::sqrt(alpha) / (3.0 * (1.0 - alpha));
    z = families::center_flat(1.0 - 1.5 * alpha);
  } else if (alpha < 2.0 / 3.0) {
    r.value = m.mu + m.sigma * std::sqrt(3.0) * alpha;
    z = families::center_flat(0.5);
  } else {
    r.value = m.mu + m.sigma * (2.0 / 3.0) / std::sqrt(1.0 - alpha);
    z = families::center_flat(1.5 * alpha - 0.5);
  }
  r.attainable = true;
  r.extremal = z.affine(m.sigma, m.mu);
  return r;
}

// ---------------------------------------------------------------------------
// Delta / Theta family values and optimizers

namespace {

// exact \int_{lo}^{hi} g(p) dp over the pieces of g
double integral_of_value(const DistortionFunction& g, double lo, double hi) {
  using Form = DistortionFunction::Piece::Form;
  double total = 0.0;
  for (const auto& pc : g.pieces()) {
    const double x0 = std::max(lo, pc.lo);
    const double x1 = std::min(hi, pc.hi);
    if (x1 <= x0) continue;
    const double w = x1 - x0;
    switch (pc.form) {
      case Form::Affine:
        total += w * (pc.a + pc.s * (0.5 * (x0 + x1) - pc.lo));
        break;
      case Form::PowerAtLo: {
        // v = a + c (p - lo)^e
        const double u0 = x0 - pc.lo, u1 = x1 - pc.lo;
        total += pc.a * w +
                 pc.c * stable_power_difference(u1, u0, w, pc.e + 1.0) / (pc.e + 1.0);
        break;
      }
      case Form::PowerAtHi: {
        // v = a - c (hi - p)^e
        const double u0 = pc.hi - x1, u1 = pc.hi - x0;
        total += pc.a * w -
                 pc.c * stable_power_difference(u1, u0, w, pc.e + 1.0) / (pc.e + 1.0);
        break;
      }
    }
  }
  return total;
}

}  // namespace

double delta_R(const DistortionFunction& g, double b) {
  if (!(b >= 0.0 && b < 1.0)) throw std::invalid_argument("delta_R: b in [0,1)");
  const double one_minus_b = 1.0 - b;
  const double denom =
      std::sqrt(one_minus_b * one_minus_b * one_minus_b * (1.0 / 3.0 + b));
  // integration by parts of -(1+b^2) + 2b g(b) + 2 int_{(b,1]} p dg: the
  // residual integrand p - g(p) keeps the b -> 1 limit numerically clean
  const double resid =
      one_minus_b * 0.5 * (1.0 + b) - integral_of_value(g, b, 1.0);
  return 2.0 * resid / denom;
}

double delta_L(const DistortionFunction& g, double b) {
  if (!(b > 0.0 && b <= 1.0)) throw std::invalid_argument("delta_L: b in (0,1]");
  const double denom = std::sqrt(b * b * b * (4.0 - 3.0 * b));
  // int_{[0,b]} p dg - b g(b+) = -int_0^b g(p) dp
  return std::sqrt(3.0 * b / (4.0 - 3.0 * b)) -
         2.0 * std::sqrt(3.0) * integral_of_value(g, 0.0, b) / denom;
}

double theta(const DistortionFunction& g, double b) {
  if (!(b >= 0.5 && b < 1.0)) throw std::invalid_argument("theta: b in [1/2,1)");
  const double one_minus_b = 1.0 - b;
  const double denom =
      std::sqrt((2.0 / 3.0) * one_minus_b * one_minus_b * one_minus_b);
  // head and tail in integrated-by-parts form: -int_0^{1-b} g dp and
  // int_b^1 (1 - g) dp
  const double head = -integral_of_value(g, 0.0, one_minus_b);
  const double tail = one_minus_b - integral_of_value(g, b, 1.0);
  return (head + tail) / denom;
}

namespace {

struct ScanResult {
  double b = 0.0;
  double value = -kInf;
  int iters = 0;
};

// coarse scan + golden-section refinement of a piecewise-smooth objective
ScanResult maximize_on(const std::function<double(double)>& f, double lo,
                       double hi, const std::vector<double>& seeds, int grid) {
  ScanResult best;
  auto consider = [&](double b) {
    if (b < lo || b > hi) return;
    const double v = f(b);
    if (v > best.value) {
      best.value = v;
      best.b = b;
    }
  };
  for (int i = 0; i <= grid; ++i)
    consider(lo + (hi - lo) * static_cast<double>(i) / grid);
  for (double s : seeds) consider(s);

  // golden refinement around the incumbent
  const double cell = (hi - lo) / grid;
  double a = std::max(lo, best.b - cell);
  double b = std::min(hi, best.b + cell);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int iters = 0;
  while (b - a > 1e-10 && iters < 200) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
    ++iters;
  }
  const double mid = 0.5 * (a + b);
  consider(mid);
  best.iters = iters;
  return best;
}

std::vector<double> atom_seeds(const DistortionFunction& g) {
  std::vector<double> seeds;
  for (const auto& a : g.derivative_measure(1).atoms) {
    seeds.push_back(a.p);
    seeds.push_back(std::max(0.0, a.p - 1e-9));
    seeds.push_back(std::min(1.0, a.p + 1e-9));
  }
  return seeds;
}

}  // namespace

OptimizerOutcome optimize_delta(const DistortionFunction& g) {
  const int grid = 1024;
  const auto seeds = atom_seeds(g);
  const double eps = 1e-9;
  const ScanResult r =
      maximize_on([&g](double b) { return delta_R(g, b); }, 0.0, 1.0 - eps, seeds, grid);
  const ScanResult l =
      maximize_on([&g](double b) { return delta_L(g, b); }, eps, 1.0 - eps, seeds, grid);
  OptimizerOutcome out;
  out.grid = grid;
  if (r.value >= l.value) {
    out.value = r.value;
    out.argmax_b = r.b;
    out.branch = 'R';
    out.refine_iters = r.iters;
  } else {
    out.value = l.value;
    out.argmax_b = l.b;
    out.branch = 'L';
    out.refine_iters = l.iters;
  }
  return out;
}

OptimizerOutcome optimize_theta(const DistortionFunction& g) {
  const int grid = 1024;
  const auto seeds = atom_seeds(g);
  const double eps = 1e-9;
  const ScanResult t =
      maximize_on([&g](double b) { return theta(g, b); }, 0.5, 1.0 - eps, seeds, grid);
  OptimizerOutcome out;
  out.value = t.value;
  out.argmax_b = t.b;
  out.branch = 'T';
  out.grid = grid;
  out.refine_iters = t.iters;
  return out;
}

// ---------------------------------------------------------------------------
// Envelope kernel integrals

namespace {

IntegralResult kernel_integral_unimodal(const DerivativeMeasure& dgp) {
  IntegralSpec left;
  left.kernel = Kernel::sqrt_p_8m9p(1.0 / 3.0);
  left.measure = dgp;
  left.lo = 0.0;
  left.hi = 0.5;
  left.include_hi = true;
  left.tol = 1e-12;
  IntegralResult lr = integrate(left);
  if (lr.diverged) return lr;
  IntegralSpec right;
  right.kernel = Kernel::sqrt_1mp_9pm1(1.0 / 3.0);
  right.measure = dgp;
  right.lo = 0.5;
  right.hi = 1.0;
  right.include_lo = false;
  right.tol = 1e-12;
  IntegralResult rr = integrate(right);
  rr.value += lr.value;
  rr.evals += lr.evals;
  rr.converged = rr.converged && lr.converged;
  return rr;
}

IntegralResult kernel_integral_us(const DerivativeMeasure& dgp) {
  const double third = 1.0 / 3.0;
  IntegralSpec a;
  a.kernel = Kernel::sqrt_p(2.0 / 3.0);
  a.measure = dgp;
  a.lo = 0.0;
  a.hi = third;
  a.tol = 1e-12;
  IntegralResult ra = integrate(a);
  if (ra.diverged) return ra;
  IntegralSpec b;
  b.kernel = Kernel::p_one_minus_p(std::sqrt(3.0));
  b.measure = dgp;
  b.lo = third;
  b.hi = 2.0 * third;
  b.include_lo = false;
  b.tol = 1e-12;
  IntegralResult rb = integrate(b);
  if (rb.diverged) return rb;
  IntegralSpec c;
  c.kernel = Kernel::sqrt_one_minus_p(2.0 / 3.0);
  c.measure = dgp;
  c.lo = 2.0 * third;
  c.hi = 1.0;
  c.include_lo = false;
  c.tol = 1e-12;
  IntegralResult rc = integrate(c);
  rc.value += ra.value + rb.value;
  rc.evals += ra.evals + rb.evals;
  rc.converged = rc.converged && ra.converged && rb.converged;
  return rc;
}

}  // namespace

IntegralResult upsilon(const DistortionFunction& g) {
  return kernel_integral_us(g.derivative_measure(2));
}

IntegralResult unimodal_envelope_integral(const DistortionFunction& g) {
  return kernel_integral_unimodal(g.derivative_measure(2));
}

// ---------------------------------------------------------------------------
// Unimodal / unimodal-symmetric dispatch

namespace {

double var_curve_unimodal(double p) {
  if (p <= 0.0) return 0.0;
  if (p < 5.0 / 6.0) return std::sqrt(3.0 * p / (4.0 - 3.0 * p));
  if (p >= 1.0) return kInf;
  return std::sqrt(4.0 / (9.0 * (1.0 - p)) - 1.0);
}

double var_curve_us(double p) {
  if (p < 0.5) return 0.0;
  if (p < 5.0 / 6.0) return std::sqrt(3.0) * (2.0 * p - 1.0);
  if (p >= 1.0) return kInf;
  return std::sqrt(2.0 / (9.0 * (1.0 - p)));
}

QuantileFunction std_tvar_extremal(double alpha, bool us) {
  if (us) {
    if (alpha < 1.0 / 3.0) return families::center_flat(1.0 - 1.5 * alpha);
    if (alpha < 2.0 / 3.0) return families::center_flat(0.5);
    return families::center_flat(1.5 * alpha - 0.5);
  }
  if (alpha < 0.5) return families::uniform_below_atom(1.5 * alpha);
  return families::atom_below_uniform(0.5 * (3.0 * alpha - 1.0));
}

QuantileFunction std_var_extremal(double alpha, bool us) {
  if (us) {
    if (alpha < 0.5) return families::center_flat(0.5 * (1.0 + std::max(alpha, 1.0 - alpha)));
    if (alpha < 5.0 / 6.0) return families::center_flat(0.5);
    return families::center_flat(3.0 * alpha - 2.0);
  }
  if (alpha < 5.0 / 6.0) return families::uniform_below_atom(alpha);
  return families::atom_below_uniform(3.0 * alpha - 2.0);
}

// standardized supremum of rho_g over the shape class (V_U or V_US)
struct StdShapedBound {
  double value = 0.0;
  bool attainable = false;
  std::optional<QuantileFunction> extremal;
  BoundResult::Method method = BoundResult::Method::ClosedForm;
  std::optional<BracketDetail> bracket;
  std::string diagnostic;
};

StdShapedBound std_sup_shaped(const DistortionFunction& g, bool us) {
  StdShapedBound out;
  const Classification cls = g.classify();
  const DistortionFunction dual_g = g.dual();

  if (cls.is_simple) {
    out.method = BoundResult::Method::ClosedForm;
    const DerivativeMeasure dm = dual_g.derivative_measure(1);
    double total = 0.0;
    for (const auto& a : dm.atoms) {
      if (a.p >= 1.0 && a.mass > 0.0) {
        out.value = kInf;
        out.diagnostic = "derivative mass at p=1 (h(0+)>0): worst case unbounded";
        return out;
      }
      total += a.mass * (us ? var_curve_us(a.p) : var_curve_unimodal(a.p));
    }
    out.value = total;
    if (dm.atoms.size() == 1 && dm.densities.empty() && dm.atoms[0].p > 0.0 &&
        dm.atoms[0].p < 1.0) {
      out.attainable = true;
      out.extremal = std_var_extremal(dm.atoms[0].p, us);
    }
    return out;
  }

  if (cls.is_concave) {
    out.method = BoundResult::Method::EnvelopeIntegral;
    if (!cls.boundary_ok) {
      if (g.eval(0.0, Side::Right) > 0.0) {
        out.value = kInf;
        out.diagnostic = "h(0+) > 0 puts derivative mass on the essential supremum";
        return out;
      }
      throw DistortionError("shaped bound: h(1-) < 1 not supported");
    }
    const DerivativeMeasure dm2 = dual_g.derivative_measure(2);
    const IntegralResult ir = us ? kernel_integral_us(dm2) : kernel_integral_unimodal(dm2);
    if (ir.diverged) {
      out.value = kInf;
      out.diagnostic = "envelope kernel integral diverges: " + ir.note;
      return out;
    }
    if (!ir.converged) out.diagnostic = "quadrature budget exhausted: " + ir.note;
    out.value = ir.value;
    if (dm2.atoms.empty() && dm2.densities.empty()) {
      // affine dual derivative: rho_g is the mean for every member
      out.attainable = true;
      out.extremal = families::center_flat(0.5);
      return out;
    }
    if (dm2.atoms.size() == 1 && dm2.densities.empty() && dm2.atoms[0].mass > 0.0 &&
        dm2.atoms[0].p > 0.0 && dm2.atoms[0].p < 1.0) {
      out.attainable = true;
      out.extremal = std_tvar_extremal(dm2.atoms[0].p, us);
    }
    return out;
  }

  if (!cls.boundary_ok)
    throw DistortionError(
        "shaped bound: the bracket case requires h(0+)=0 and h(1-)=1");

  out.method = BoundResult::Method::Bracket;
  const OptimizerOutcome lower =
      us ? optimize_theta(dual_g) : optimize_delta(dual_g);
  const DistortionFunction env = convex_envelope(dual_g);
  const DerivativeMeasure dm2 = env.derivative_measure(2);
  const IntegralResult ir = us ? kernel_integral_us(dm2) : kernel_integral_unimodal(dm2);
  if (ir.diverged) {
    out.value = kInf;
    out.diagnostic = "envelope kernel integral diverges";
    return out;
  }
  BracketDetail det;
  det.lower = lower.value;
  det.upper = ir.value;
  det.argmax_b = lower.argmax_b;
  det.branch = lower.branch;
  det.grid = lower.grid;
  det.refine_iters = lower.refine_iters;
  det.lower_constructive = true;
  out.bracket = det;
  out.value = ir.value;  // conservative end
  out.attainable = false;
  // feasible witness achieving the lower bound
  if (us) {
    out.extremal = families::center_flat(std::min(lower.argmax_b, 1.0 - 1e-12));
  } else if (lower.branch == 'R') {
    out.extremal = families::atom_below_uniform(std::min(lower.argmax_b, 1.0 - 1e-12));
  } else {
    out.extremal = families::uniform_below_atom(std::max(lower.argmax_b, 1e-12));
  }
  return out;
}

BoundResult shaped_bound(const DistortionFunction& h, const MomentSpec& m,
                         BoundSide side, bool us) {
  if (!(m.sigma > 0.0)) throw std::invalid_argument("shaped bound: sigma > 0 required");
  const bool sup = side == BoundSide::Sup;
  const StdShapedBound s = std_sup_shaped(sup ? h : h.dual(), us);
  BoundResult r;
  r.side = side;
  r.method = s.method;
  r.attainable = s.attainable;
  r.diagnostic = s.diagnostic;
  if (sup) {
    r.value = m.mu + m.sigma * s.value;
    if (s.bracket) {
      BracketDetail det = *s.bracket;
      det.lower = m.mu + m.sigma * det.lower;
      det.upper = m.mu + m.sigma * det.upper;
      det.lower_constructive = true;
      r.bracket = det;
      r.value = det.upper;
    }
    if (s.extremal) r.extremal = s.extremal->affine(m.sigma, m.mu);
  } else {
    r.value = m.mu - m.sigma * s.value;
    if (s.bracket) {
      BracketDetail det = *s.bracket;
      det.lower = m.mu - m.sigma * s.bracket->upper;
      det.upper = m.mu - m.sigma * s.bracket->lower;
      det.argmax_b = s.bracket->argmax_b;
      det.lower_constructive = false;  // the feasible member sits at the upper end
      r.bracket = det;
      r.value = det.lower;
    }
    if (s.extremal) r.extremal = s.extremal->reflect().affine(m.sigma, m.mu);
  }
  return r;
}

}  // namespace

BoundResult sup_unimodal(const DistortionFunction& h, const MomentSpec& m) {
  return shaped_bound(h, m, BoundSide::Sup, false);
}

BoundResult inf_unimodal(const DistortionFunction& h, const MomentSpec& m) {
  return shaped_bound(h, m, BoundSide::Inf, false);
}

BoundResult sup_us(const DistortionFunction& h, const MomentSpec& m) {
  return shaped_bound(h, m, BoundSide::Sup, true);
}

BoundResult inf_us(const DistortionFunction& h, const MomentSpec& m) {
  return shaped_bound(h, m, BoundSide::Inf, true);
}

BoundResult bound(const DistortionFunction& h, ShapeClass cls, BoundSide side,
                  const MomentSpec& m) {
  switch (cls) {
    case ShapeClass::General:
      return side == BoundSide::Sup ? sup_general(h, m) : inf_general(h, m);
    case ShapeClass::Symmetric:
      return side == BoundSide::Sup ? sup_symmetric(h, m) : inf_symmetric(h, m);
    case ShapeClass::Unimodal:
      return side == BoundSide::Sup ? sup_unimodal(h, m) : inf_unimodal(h, m);
    case ShapeClass::UnimodalSymmetric:
      return side == BoundSide::Sup ? sup_us(h, m) : inf_us(h, m);
  }
  throw std::invalid_argument("bound: unknown class");
}

}  // namespace drmb
