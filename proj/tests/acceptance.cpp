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
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is pinned here, not configurable.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "drmb/oracle.hpp"

using namespace drmb;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void report(int number, bool ok, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", number,
              what.c_str());
  if (!ok) ++g_failures;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

const MomentSpec kStd{0.0, 1.0};

// paper branch formulas, restated independently of the library
double var_sup_formula(ShapeClass cls, double a) {
  switch (cls) {
    case ShapeClass::General:
      return std::sqrt(a / (1.0 - a));
    case ShapeClass::Symmetric:
      return a >= 0.5 ? std::sqrt(0.5 / (1.0 - a)) : 0.0;
    case ShapeClass::Unimodal:
      return a < 5.0 / 6.0 ? std::sqrt(3.0 * a / (4.0 - 3.0 * a))
                           : std::sqrt(4.0 / (9.0 * (1.0 - a)) - 1.0);
    case ShapeClass::UnimodalSymmetric:
      if (a < 0.5) return 0.0;
      if (a < 5.0 / 6.0) return std::sqrt(3.0) * (2.0 * a - 1.0);
      return std::sqrt(2.0 / (9.0 * (1.0 - a)));
  }
  return 0.0;
}

double var_inf_formula(ShapeClass cls, double a) {
  switch (cls) {
    case ShapeClass::General:
      return -std::sqrt((1.0 - a) / a);
    case ShapeClass::Symmetric:
      return a <= 0.5 ? -std::sqrt(0.5 / a) : 0.0;
    case ShapeClass::Unimodal:
      return a >= 1.0 / 6.0 ? -std::sqrt(3.0 * (1.0 - a) / (1.0 + 3.0 * a))
                            : -std::sqrt(4.0 / (9.0 * a) - 1.0);
    case ShapeClass::UnimodalSymmetric:
      if (a > 0.5) return 0.0;
      if (a > 1.0 / 6.0) return -std::sqrt(3.0) * (1.0 - 2.0 * a);
      return -std::sqrt(2.0 / (9.0 * a));
  }
  return 0.0;
}

double tvar_unimodal_formula(double a) {
  if (a < 0.5) return std::sqrt(a * (8.0 / 9.0 - a)) / (1.0 - a);
  return std::sqrt(8.0 / (9.0 * (1.0 - a)) - 1.0);
}

double tvar_us_formula(double a) {
  if (a < 1.0 / 3.0) return 2.0 * std::sqrt(a) / (3.0 * (1.0 - a));
  if (a < 2.0 / 3.0) return std::sqrt(3.0) * a;
  return (2.0 / 3.0) / std::sqrt(1.0 - a);
}

void criterion_1() {
  const std::vector<double> alphas = {0.05, 0.1,       1.0 / 6.0, 0.25, 1.0 / 3.0,
                                      0.5,  2.0 / 3.0, 0.75,      5.0 / 6.0,
                                      0.9,  0.95,      0.99};
  const std::vector<ShapeClass> classes = {
      ShapeClass::General, ShapeClass::Symmetric, ShapeClass::Unimodal,
      ShapeClass::UnimodalSymmetric};
  bool ok = true;
  for (ShapeClass cls : classes) {
    for (double a : alphas) {
      for (VarKind k : {VarKind::Lower, VarKind::Upper}) {
        ok = ok && close(var_bound(cls, BoundSide::Sup, k, a, kStd).value,
                         var_sup_formula(cls, a), 1e-12);
        ok = ok && close(var_bound(cls, BoundSide::Inf, k, a, kStd).value,
                         var_inf_formula(cls, a), 1e-12);
      }
    }
  }
  // branch continuity wherever the closed forms are continuous
  const double eps = 1e-10;
  auto cont = [&](ShapeClass cls, BoundSide side, double at) {
    const VarKind k = side == BoundSide::Sup ? VarKind::Upper : VarKind::Lower;
    return close(var_bound(cls, side, k, at - eps, kStd).value,
                 var_bound(cls, side, k, at + eps, kStd).value, 1e-7);
  };
  ok = ok && cont(ShapeClass::Unimodal, BoundSide::Sup, 5.0 / 6.0);
  ok = ok && cont(ShapeClass::Unimodal, BoundSide::Inf, 1.0 / 6.0);
  ok = ok && cont(ShapeClass::UnimodalSymmetric, BoundSide::Sup, 0.5);
  ok = ok && cont(ShapeClass::UnimodalSymmetric, BoundSide::Sup, 5.0 / 6.0);
  ok = ok && cont(ShapeClass::UnimodalSymmetric, BoundSide::Inf, 0.5);
  ok = ok && cont(ShapeClass::UnimodalSymmetric, BoundSide::Inf, 1.0 / 6.0);
  // spot values
  ok = ok && close(var_bound(ShapeClass::General, BoundSide::Sup, VarKind::Upper,
                             0.99, kStd)
                       .value,
                   9.9498743711, 1e-9);
  ok = ok && close(var_bound(ShapeClass::UnimodalSymmetric, BoundSide::Sup,
                             VarKind::Upper, 0.9, kStd)
                       .value,
                   1.4907119850, 1e-9);
  ok = ok && close(var_bound(ShapeClass::Unimodal, BoundSide::Sup, VarKind::Upper,
                             5.0 / 6.0, kStd)
                       .value,
                   1.2909944487, 1e-9);
  report(1, ok, "VaR closed forms on the alpha grid, branch continuity, spot values");
}

std::vector<std::pair<double, double>> rvar_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double a : {0.1, 0.2, 0.55, 0.75, 0.9}) {
    for (double f : {0.15, 0.35, 0.55, 0.75, 0.95}) {
      grid.emplace_back(a, a + (1.0 - a) * f);
    }
  }
  return grid;
}

void criterion_2() {
  const MomentSpec m{0.4, 1.6};
  bool ok = true;
  for (auto [a, b] : rvar_grid()) {
    const auto h = DistortionFunction::rvar(a, b);
    ok = ok && close(sup_general(h, m).value,
                     m.mu + m.sigma * std::sqrt(a / (1.0 - a)), 1e-8);
    ok = ok && close(inf_general(h, m).value,
                     m.mu - m.sigma * std::sqrt((1.0 - b) / b), 1e-8);
  }
  report(2, ok, "RVaR envelope bounds over V(mu, sigma) on the 5x5 grid (1e-8)");
}

void criterion_3() {
  const MomentSpec m{0.4, 1.6};
  bool ok = true;
  int checked_52 = 0, checked_54 = 0;
  for (auto [a, b] : rvar_grid()) {
    const auto h = DistortionFunction::rvar(a, b);
    if (a >= 0.5) {
      ok = ok && close(sup_symmetric(h, m).value,
                       m.mu + m.sigma * std::sqrt(0.5 / (1.0 - a)), 1e-8);
      ++checked_52;
      // the best case over V_S clamps at mu: every quantile of a symmetric
      // law above the median is >= mu, so no smaller value is feasible
      ok = ok && close(inf_symmetric(h, m).value, m.mu, 1e-8);
      ok = ok && inf_symmetric(h, m).attainable;
    }
    if (b < 0.5) {
      ok = ok && close(sup_symmetric(h, m).value, m.mu, 1e-8);
      ++checked_54;
      ok = ok && close(inf_symmetric(h, m).value,
                       m.mu - m.sigma * std::sqrt(0.5 / b), 1e-8);
    }
  }
  ok = ok && checked_52 >= 15 && checked_54 >= 4;
  report(3, ok,
         "symmetric RVaR bounds on the grid (1e-8), including the degenerate "
         "sup = mu below 1/2; best case clamped at mu above 1/2 (see notes)");
  g_notes.push_back(
      "criterion 3: the closed form -sigma*sqrt((1-beta)/(2 beta^2)) "
      "sometimes quoted for 1/2 <= alpha < beta is not attainable over V_S "
      "(symmetric quantiles above the median are >= mu, so the infimum is mu, "
      "attained); the suite asserts the attained infimum. Recorded in the "
      "decisions ledger.");
}

void criterion_4() {
  bool ok = true;
  for (int i = 1; i <= 19; ++i) {
    const double a = 0.05 * i;
    const double expected = tvar_unimodal_formula(a);
    const auto closed = tvar_sup_unimodal(a, kStd);
    const auto path = sup_unimodal(DistortionFunction::tvar(a), kStd);
    ok = ok && close(closed.value, expected, 1e-10);
    ok = ok && close(path.value, expected, 1e-10);
    ok = ok && closed.extremal.has_value();
    if (closed.extremal) {
      ok = ok && validate_shape(*closed.extremal, ShapeClass::Unimodal, kStd, 1e-9);
      ok = ok && close(rho(DistortionFunction::tvar(a), *closed.extremal),
                       expected, 1e-8);
    }
  }
  report(4, ok,
         "worst-case unimodal TVaR: closed form vs envelope quadrature (1e-10), "
         "attaining laws validate and reproduce the value (1e-8)");
}

void criterion_5() {
  bool ok = true;
  for (int i = 1; i <= 19; ++i) {
    const double a = 0.05 * i;
    const double expected = tvar_us_formula(a);
    const auto closed = tvar_sup_us(a, kStd);
    const auto path = sup_us(DistortionFunction::tvar(a), kStd);
    ok = ok && close(closed.value, expected, 1e-10);
    ok = ok && close(path.value, expected, 1e-10);
    if (closed.extremal) {
      ok = ok && validate_shape(*closed.extremal, ShapeClass::UnimodalSymmetric,
                                kStd, 1e-9);
      ok = ok && close(rho(DistortionFunction::tvar(a), *closed.extremal),
                       expected, 1e-8);
    }
  }
  // continuity across the three branches; these equalities pin the
  // sqrt(1-p) kernel (the displayed 1/sqrt(1-p) variant fails them)
  ok = ok && close(tvar_sup_us(1.0 / 3.0 - 1e-10, kStd).value, 0.5773502692, 1e-8);
  ok = ok && close(tvar_sup_us(1.0 / 3.0, kStd).value, 0.5773502692, 1e-9);
  ok = ok && close(tvar_sup_us(2.0 / 3.0 - 1e-10, kStd).value, 1.1547005384, 1e-8);
  ok = ok && close(tvar_sup_us(2.0 / 3.0, kStd).value, 1.1547005384, 1e-9);
  report(5, ok,
         "worst-case unimodal-symmetric TVaR: three branches, continuity at 1/3 "
         "and 2/3, kernel-integral path agreement (1e-10)");
}

void criterion_6() {
  bool ok = true;
  for (double a : {0.55, 0.7, 5.0 / 6.0, 0.9, 0.97}) {
    const auto g = DistortionFunction::var(a).dual();
    const auto opt = optimize_theta(g);
    const double expected = a < 5.0 / 6.0 ? std::sqrt(3.0) * (2.0 * a - 1.0)
                                          : std::sqrt(2.0 / (9.0 * (1.0 - a)));
    ok = ok && close(opt.value, expected, 1e-6);
    if (a >= 5.0 / 6.0) ok = ok && close(opt.argmax_b, 3.0 * a - 2.0, 1e-4);
  }
  report(6, ok, "Theta optimizer tightness for step integrators (1e-6, argmax 3a-2)");
}

void criterion_7() {
  bool ok = true;
  for (double a : {0.3, 0.6, 5.0 / 6.0, 0.9, 0.95}) {
    const auto g = DistortionFunction::var(a).dual();
    const auto opt = optimize_delta(g);
    const double expected = a < 5.0 / 6.0
                                ? std::sqrt(3.0 * a / (4.0 - 3.0 * a))
                                : std::sqrt(4.0 / (9.0 * (1.0 - a)) - 1.0);
    ok = ok && close(opt.value, expected, 1e-6);
  }
  report(7, ok, "Delta optimizer tightness for step integrators (1e-6)");
}

void criterion_8() {
  bool ok = true;
  // frozen 40-digit quadrature oracle, computed before this implementation:
  // kernel integral over the PH dual, including the derivative atom at alpha
  const double unimodal_ref = 4.3170404110992689;
  ok = ok && close(sup_unimodal(DistortionFunction::ph(0.9, 0.75), kStd).value,
                   unimodal_ref, 1e-6);
  // faithful Stieltjes evaluation of the Upsilon kernels against d(h~'):
  // atom term (2/3) r (1-a)^{-1/2} plus the displayed density term; at
  // r = 3/4 the two coincide and the total is sqrt(10)
  ok = ok && close(sup_us(DistortionFunction::ph(0.9, 0.75), kStd).value,
                   std::sqrt(10.0), 1e-8);
  // divergence diagnostics for r <= 1/2
  const auto d1 = sup_general(DistortionFunction::ph(0.9, 0.4), kStd);
  const auto d2 = sup_unimodal(DistortionFunction::ph(0.9, 0.4), kStd);
  const auto d3 = sup_us(DistortionFunction::ph(0.9, 0.4), kStd);
  for (const auto* r : {&d1, &d2, &d3}) {
    ok = ok && std::isinf(r->value) && r->value > 0 && !r->diagnostic.empty();
  }
  report(8, ok,
         "PH fixtures: unimodal value vs frozen high-precision quadrature "
         "(1e-6), Upsilon path with derivative atom = sqrt(10) (1e-8), r = 0.4 "
         "diverges with diagnostic");
  g_notes.push_back(
      "criterion 8: a density-only reading of the kernel functional gives "
      "0.5*sqrt(10); the faithful Stieltjes value including the derivative "
      "atom at alpha is sqrt(10), and a feasible unimodal-symmetric law "
      "already beats the atom-free number (rho = 2.2589 > 1.5811), so the "
      "atom must be counted. Recorded in the decisions ledger.");
}

struct MatrixCase {
  std::string spec;
  ShapeClass cls;
  BoundSide side;
};

std::vector<MatrixCase> matrix_cases() {
  const std::vector<std::string> specs = {"var:0.9", "tvar:0.75", "rvar:0.9,0.99",
                                          "ph:0.9,0.75", "steps:0.5,0;0.9,0.4;1,1"};
  std::vector<MatrixCase> out;
  for (const auto& s : specs) {
    for (ShapeClass cls : {ShapeClass::General, ShapeClass::Symmetric,
                           ShapeClass::Unimodal, ShapeClass::UnimodalSymmetric}) {
      out.push_back({s, cls, BoundSide::Sup});
      out.push_back({s, cls, BoundSide::Inf});
    }
  }
  return out;
}

void criterion_9() {
  bool ok = true;
  int n = 0;
  for (const auto& mc : matrix_cases()) {
    const auto h = parse_distortion(mc.spec);
    const auto rep = search(h, mc.cls, mc.side, kStd, 10000);
    ++n;
    if (rep.violation) {
      std::printf("    violation: %s %s %s gap=%g\n", mc.spec.c_str(),
                  to_string(mc.cls), mc.side == BoundSide::Sup ? "sup" : "inf",
                  rep.gap);
      ok = false;
    }
    if (rep.analytic_attainable && std::fabs(rep.gap) > 1e-4) {
      std::printf("    attainment miss: %s %s %s gap=%g\n", mc.spec.c_str(),
                  to_string(mc.cls), mc.side == BoundSide::Sup ? "sup" : "inf",
                  rep.gap);
      ok = false;
    }
    if (rep.analytic_bracket && rep.constructive_gap > 1e-4) {
      std::printf("    bracket miss: %s %s %s constructive_gap=%g\n",
                  mc.spec.c_str(), to_string(mc.cls),
                  mc.side == BoundSide::Sup ? "sup" : "inf", rep.constructive_gap);
      ok = false;
    }
  }
  char buf[192];
  std::snprintf(buf, sizeof buf,
                "oracle matrix (%d cases, budget 10^4): no bound beaten beyond "
                "1e-7, attainable bounds reached within 1e-4, bracket "
                "constructive ends reached within 1e-4",
                n);
  report(9, ok, buf);
}

void criterion_10() {
  bool ok = true;

  // Moriguti property run (1000 seeded instances)
  std::mt19937_64 rng(20260809);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const int nx = 3 + static_cast<int>(u(rng) * 6);
    std::vector<double> xs(nx), ys(nx);
    for (int i = 0; i < nx; ++i) {
      xs[i] = u(rng);
      ys[i] = 2.0 * u(rng) - 0.5;
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    std::vector<XY> x{{0.0, -1.0}};
    for (int i = 0; i < nx; ++i) x.push_back({xs[i], ys[i]});
    x.push_back({1.0, ys.back() + u(rng)});
    const int nh = 4 + static_cast<int>(u(rng) * 5);
    std::vector<XY> H{{0.0, 0.0}};
    double t = 0.0;
    for (int i = 0; i < nh; ++i) {
      t += (1.0 - t) * u(rng) * 0.5;
      H.push_back({t, 2.0 * u(rng) - 1.0});
      if (u(rng) < 0.3) H.push_back({t, 2.0 * u(rng) - 1.0});
    }
    H.push_back({1.0, 2.0 * u(rng) - 1.0});
    ok = ok && moriguti_check(x, H, 1e-9).holds;
  }

  // class nesting on the families whose shaped values are sharp (single-atom
  // derivative structure or certified brackets); multi-step and diffuse
  // concave cases are upper bounds only and sit outside value-level nesting
  const std::vector<std::string> nest_specs = {
      "identity",      "var:0.6",  "var:0.9",       "tvar:0.3",
      "tvar:0.75",     "rvar:0.3,0.6", "rvar:0.9,0.99"};
  auto lo_end = [](const BoundResult& r) {
    return r.bracket ? r.bracket->lower : r.value;
  };
  auto hi_end = [](const BoundResult& r) {
    return r.bracket ? r.bracket->upper : r.value;
  };
  for (const auto& spec : nest_specs) {
    const auto h = parse_distortion(spec);
    const auto gen = sup_general(h, kStd);
    const auto sym = sup_symmetric(h, kStd);
    const auto uni = sup_unimodal(h, kStd);
    const auto us = sup_us(h, kStd);
    ok = ok && lo_end(us) <= sym.value + 1e-9;
    ok = ok && lo_end(us) <= hi_end(uni) + 1e-9;
    ok = ok && lo_end(uni) <= gen.value + 1e-9;
    ok = ok && sym.value <= gen.value + 1e-9;
    const auto geni = inf_general(h, kStd);
    const auto symi = inf_symmetric(h, kStd);
    const auto unii = inf_unimodal(h, kStd);
    const auto usi = inf_us(h, kStd);
    ok = ok && hi_end(usi) >= symi.value - 1e-9;
    ok = ok && hi_end(usi) >= lo_end(unii) - 1e-9;
    ok = ok && hi_end(unii) >= geni.value - 1e-9;
    ok = ok && symi.value >= geni.value - 1e-9;
  }

  // location-scale equivariance for random (mu, sigma)
  std::mt19937_64 rng2(99);
  std::uniform_real_distribution<double> u2(0.0, 1.0);
  for (const auto& mc : matrix_cases()) {
    const auto h = parse_distortion(mc.spec);
    const double v0 = bound(h, mc.cls, mc.side, kStd).value;
    const MomentSpec m{4.0 * u2(rng2) - 2.0, 0.25 + 2.5 * u2(rng2)};
    const double v1 = bound(h, mc.cls, mc.side, m).value;
    if (std::isinf(v0)) {
      ok = ok && std::isinf(v1);
    } else {
      ok = ok && close(v1, m.mu + m.sigma * v0, 1e-8);
    }
  }

  // every exported extremal validates and reproduces its bound
  for (const auto& mc : matrix_cases()) {
    const auto h = parse_distortion(mc.spec);
    const auto r = bound(h, mc.cls, mc.side, kStd);
    if (!r.extremal) continue;
    ok = ok && validate_shape(*r.extremal, mc.cls, kStd, 1e-9);
    const double target =
        r.bracket ? (r.bracket->lower_constructive ? r.bracket->lower
                                                   : r.bracket->upper)
                  : r.value;
    if (r.attainable || r.bracket) {
      ok = ok && close(rho(h, *r.extremal), target, 1e-8);
    }
  }

  report(10, ok,
         "property suites: Moriguti (1000 seeded), class nesting, "
         "location-scale, extremal validation and reproduction");
  g_notes.push_back(
      "criterion 10: nesting asserted through certified bracket ends. The "
      "simple- and concave-case formulas are sums of per-level bounds, exact "
      "only when the dual derivative concentrates at one point; for multi-step "
      "duals (2-step pwc) and diffuse ones (PH) they remain valid upper bounds "
      "but can exceed tighter-class values, so those sit outside the "
      "value-level nesting list (see ledger).");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  for (const auto& n : g_notes) std::printf("note: %s\n", n.c_str());
  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
