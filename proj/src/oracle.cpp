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

#include "drmb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

namespace drmb {

namespace {

struct Family {
  std::string name;
  double lo, hi;
  std::function<QuantileFunction(double)> make;
};

std::vector<Family> families_for(ShapeClass cls) {
  const double eps = 1e-7;
  // the kinked families must reach as close to degeneracy as the bracket
  // optimizers do, so their constructive ends stay reachable
  const double beps = 1e-9;
  Family two{"two-point", eps, 1.0 - eps,
             [](double t) { return families::two_point(t); }};
  Family three{"three-point", eps, 0.5,
               [](double m) { return families::three_point(m); }};
  Family abu{"atom-below-uniform", 0.0, 1.0 - beps,
             [](double b) { return families::atom_below_uniform(b); }};
  Family uba{"uniform-below-atom", beps, 1.0,
             [](double b) { return families::uniform_below_atom(b); }};
  Family flat{"center-flat", 0.5, 1.0 - beps,
              [](double b) { return families::center_flat(b); }};
  switch (cls) {
    case ShapeClass::General:
      return {two, three, abu, uba, flat};
    case ShapeClass::Symmetric:
      return {three, flat};
    case ShapeClass::Unimodal:
      return {abu, uba, flat};
    case ShapeClass::UnimodalSymmetric:
      return {flat};
  }
  return {};
}

// discretized version of the Schwarz-equality quantile (general class) or of
// the symmetrized profile (symmetric class), standardized exactly: cell
// averages of the envelope slope, so the mean telescopes to zero and the
// Cauchy-Schwarz argument keeps the candidate on the feasible side
std::vector<QuantileFunction> matched_candidates(const DistortionFunction& h,
                                                 ShapeClass cls, BoundSide side) {
  std::vector<QuantileFunction> out;
  if (cls != ShapeClass::General && cls != ShapeClass::Symmetric) return out;
  const bool sup = side == BoundSide::Sup;
  DistortionFunction g = convex_envelope(sup ? h.dual() : h);

  // grid refined geometrically toward the piece boundaries (slope blow-ups
  // sit there), mirrored so the symmetric profile lands on exact pairs
  std::vector<double> grid;
  const int coarse = 1024;
  for (int i = 0; i <= coarse; ++i) grid.push_back(static_cast<double>(i) / coarse);
  for (const auto& pc : g.pieces()) {
    const double len = pc.hi - pc.lo;
    // depth-capped so cell widths stay far above ulp scale: the cell slopes
    // come from value differences and must not be dominated by rounding
    double w = len;
    while (w > 1e-9 * len) {
      w *= 0.92;
      grid.push_back(pc.lo + w);
      grid.push_back(pc.hi - w);
    }
    grid.push_back(pc.lo);
    grid.push_back(pc.hi);
  }
  const size_t base = grid.size();
  for (size_t i = 0; i < base; ++i) grid.push_back(1.0 - grid[i]);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  while (!grid.empty() && grid.front() < 0.0) grid.erase(grid.begin());
  while (!grid.empty() && grid.back() > 1.0) grid.pop_back();

  auto val = [&g](double x) { return x <= 0.0 ? 0.0 : g.eval(x, Side::Right); };

  std::vector<QuantileFunction::Segment> segs;
  if (cls == ShapeClass::General) {
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      const double lo = grid[i], hi = grid[i + 1];
      if (hi <= lo) continue;
      segs.push_back({lo, hi, (val(hi) - val(lo)) / (hi - lo) - 1.0, 0.0});
    }
    // guard against rounding at cell boundaries
    for (size_t i = 1; i < segs.size(); ++i)
      segs[i].a = std::max(segs[i].a, segs[i - 1].a);
  } else {
    // build the upper half and mirror it, so the candidate is exactly
    // antisymmetric by construction
    grid.push_back(0.5);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::vector<QuantileFunction::Segment> upper;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
      const double lo = grid[i], hi = grid[i + 1];
      if (hi <= lo || lo < 0.5) continue;
      const double w =
          0.5 * ((val(hi) - val(lo)) - (val(1.0 - lo) - val(1.0 - hi))) /
          (hi - lo);
      upper.push_back({lo, hi, w, 0.0});
    }
    for (size_t i = 0; i < upper.size(); ++i)
      upper[i].a = std::max(upper[i].a, i == 0 ? 0.0 : upper[i - 1].a);
    for (auto it = upper.rbegin(); it != upper.rend(); ++it)
      segs.push_back({1.0 - it->hi, 1.0 - it->lo, -it->a, 0.0});
    segs.insert(segs.end(), upper.begin(), upper.end());
  }
  QuantileFunction q{std::move(segs)};
  const double mu0 = q.mean();
  const double sd0 = std::sqrt(q.variance());
  if (!(sd0 > 0.0)) return out;
  QuantileFunction z = q.affine(1.0 / sd0, -mu0 / sd0);
  if (!sup && cls == ShapeClass::General) z = z.reflect();
  out.push_back(std::move(z));
  return out;
}

}  // namespace

OracleReport search(const DistortionFunction& h, ShapeClass cls, BoundSide side,
                    const MomentSpec& m, long budget, std::uint64_t seed,
                    double feas_tol) {
  OracleReport rep;
  rep.distortion = h.to_string();
  rep.cls = cls;
  rep.side = side;
  rep.moments = m;
  rep.budget = budget;
  rep.seed = seed;

  const BoundResult analytic = bound(h, cls, side, m);
  rep.analytic_value = analytic.value;
  rep.analytic_attainable = analytic.attainable;
  rep.analytic_bracket = analytic.bracket.has_value();
  if (analytic.bracket) {
    rep.bracket_lower = analytic.bracket->lower;
    rep.bracket_upper = analytic.bracket->upper;
  }

  const bool sup = side == BoundSide::Sup;
  const MomentSpec std_m{0.0, 1.0};
  double best = sup ? -std::numeric_limits<double>::infinity()
                    : std::numeric_limits<double>::infinity();
  std::string best_family = "none";
  double best_param = 0.0;
  long used = 0;

  auto consider = [&](const QuantileFunction& z, const std::string& fam,
                      double param) {
    if (!validate_shape(z, cls, std_m, feas_tol)) return;
    const double value = rho(h, z.affine(m.sigma, m.mu));
    ++used;
    if ((sup && value > best) || (!sup && value < best)) {
      best = value;
      best_family = fam;
      best_param = param;
    }
  };

  auto fams = families_for(cls);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // seeds from the analytic result
  if (analytic.extremal) {
    const QuantileFunction z =
        analytic.extremal->affine(1.0 / m.sigma, -m.mu / m.sigma);
    consider(z, "analytic-extremal", 0.0);
  }
  double bracket_seed = -1.0;
  if (analytic.bracket) bracket_seed = analytic.bracket->argmax_b;

  const long per_family =
      std::max<long>(8, budget / std::max<size_t>(1, fams.size()));
  for (const auto& fam : fams) {
    rep.families_searched.push_back(fam.name);
    const long n_grid = per_family / 2;
    for (long k = 0; k <= n_grid; ++k) {
      const double t =
          fam.lo + (fam.hi - fam.lo) * static_cast<double>(k) / std::max<long>(1, n_grid);
      try {
        consider(fam.make(t), fam.name, t);
      } catch (const std::exception&) {
      }
    }
    for (long k = 0; k < per_family - n_grid; ++k) {
      const double t = fam.lo + (fam.hi - fam.lo) * unif(rng);
      try {
        consider(fam.make(t), fam.name, t);
      } catch (const std::exception&) {
      }
    }
    if (bracket_seed >= fam.lo && bracket_seed <= fam.hi) {
      try {
        consider(fam.make(bracket_seed), fam.name + "@bracket-argmax", bracket_seed);
      } catch (const std::exception&) {
      }
    }
  }
  for (const auto& z : matched_candidates(h, cls, side)) {
    rep.families_searched.push_back("matched-derivative");
    consider(z, "matched-derivative", 0.0);
  }

  rep.best_value = best;
  rep.best_family = best_family;
  rep.best_param = best_param;
  rep.budget = used;
  rep.gap = sup ? rep.analytic_value - best : best - rep.analytic_value;
  if (rep.analytic_bracket) {
    const double constructive = analytic.bracket->lower_constructive
                                    ? rep.bracket_lower
                                    : rep.bracket_upper;
    rep.constructive_gap = sup ? constructive - best : best - constructive;
  } else {
    rep.constructive_gap = rep.gap;
  }
  rep.violation = rep.gap < -1e-7;
  return rep;
}

std::string OracleReport::to_json() const {
  char buf[160];
  std::ostringstream os;
  auto num = [&buf](double v) -> std::string {
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
  };
  os << "{";
  os << "\"distortion\":\"" << distortion << "\",";
  os << "\"class\":\"" << drmb::to_string(cls) << "\",";
  os << "\"side\":\"" << (side == BoundSide::Sup ? "sup" : "inf") << "\",";
  os << "\"mu\":" << num(moments.mu) << ",\"sigma\":" << num(moments.sigma) << ",";
  os << "\"best_value\":" << num(best_value) << ",";
  os << "\"best_family\":\"" << best_family << "\",";
  os << "\"best_param\":" << num(best_param) << ",";
  os << "\"analytic_value\":" << num(analytic_value) << ",";
  os << "\"attainable\":" << (analytic_attainable ? "true" : "false") << ",";
  if (analytic_bracket) {
    os << "\"bracket\":[" << num(bracket_lower) << "," << num(bracket_upper) << "],";
  }
  os << "\"gap\":" << num(gap) << ",";
  os << "\"constructive_gap\":" << num(constructive_gap) << ",";
  os << "\"families\":[";
  for (size_t i = 0; i < families_searched.size(); ++i) {
    os << "\"" << families_searched[i] << "\"";
    if (i + 1 < families_searched.size()) os << ",";
  }
  os << "],";
  os << "\"budget\":" << budget << ",";
  os << "\"seed\":" << seed << ",";
  os << "\"violation\":" << (violation ? "true" : "false");
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// Moriguti inequality check

namespace {

// exact \int x(t) dH(t) for tabulated x (pwl, continuous) and H (pwl with
// repeated-abscissa jumps)
double stieltjes_pwl(const std::vector<XY>& x_tab, const std::vector<XY>& h_tab) {
  double total = 0.0;
  for (size_t i = 0; i + 1 < h_tab.size(); ++i) {
    const XY& a = h_tab[i];
    const XY& b = h_tab[i + 1];
    if (b.x == a.x) {
      total += polyline_value(x_tab, a.x) * (b.y - a.y);  // jump
      continue;
    }
    const double slope = (b.y - a.y) / (b.x - a.x);
    if (slope == 0.0) continue;
    // integrate x * slope over [a.x, b.x], splitting at x-breakpoints
    double prev = a.x;
    double prev_val = polyline_value(x_tab, prev);
    for (const XY& bp : x_tab) {
      if (bp.x <= a.x || bp.x >= b.x) continue;
      const double val = polyline_value(x_tab, bp.x);
      total += slope * 0.5 * (prev_val + val) * (bp.x - prev);
      prev = bp.x;
      prev_val = val;
    }
    const double end_val = polyline_value(x_tab, b.x);
    total += slope * 0.5 * (prev_val + end_val) * (b.x - prev);
  }
  return total;
}

}  // namespace

MorigutiCheck moriguti_check(const std::vector<XY>& x_tab,
                             const std::vector<XY>& h_tab, double tol) {
  if (x_tab.size() < 2 || h_tab.size() < 2)
    throw std::invalid_argument("moriguti_check: need at least two points");
  for (size_t i = 0; i + 1 < x_tab.size(); ++i) {
    if (x_tab[i + 1].x < x_tab[i].x || x_tab[i + 1].y < x_tab[i].y - 1e-12)
      throw std::invalid_argument("moriguti_check: x must be a nondecreasing tabulation");
  }
  MorigutiCheck out;
  out.lhs = stieltjes_pwl(x_tab, h_tab);
  const std::vector<XY> hull = lower_convex_hull(h_tab);
  out.rhs = stieltjes_pwl(x_tab, hull);
  out.holds = out.lhs <= out.rhs + tol;
  return out;
}

}  // namespace drmb
