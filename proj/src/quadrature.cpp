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

#include "drmb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace drmb {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double stable_power_difference(double hi_u, double lo_u, double width, double s) {
  if (lo_u <= 0.0) return std::pow(hi_u, s);
  if (width < 0.25 * lo_u) {
    return std::pow(lo_u, s) * std::expm1(s * std::log1p(width / lo_u));
  }
  return std::pow(hi_u, s) - std::pow(lo_u, s);
}

double Kernel::value(double p) const {
  switch (id) {
    case Id::P:
      return scale * p;
    case Id::SqrtP:
      return scale * std::sqrt(std::max(0.0, p));
    case Id::SqrtOneMinusP:
      return scale * std::sqrt(std::max(0.0, 1.0 - p));
    case Id::SqrtP8m9p:
      return scale * std::sqrt(std::max(0.0, p * (8.0 - 9.0 * p)));
    case Id::SqrtOneMinusP9pm1:
      return scale * std::sqrt(std::max(0.0, (1.0 - p) * (9.0 * p - 1.0)));
    case Id::POneMinusP:
      return scale * p * (1.0 - p);
    case Id::Custom:
      return scale * fn(p);
  }
  return 0.0;
}

Kernel Kernel::p(double scale) { return Kernel{Id::P, scale, {}, 1.0, 0.0}; }
Kernel Kernel::sqrt_p(double scale) { return Kernel{Id::SqrtP, scale, {}, 0.5, 0.0}; }
Kernel Kernel::sqrt_one_minus_p(double scale) {
  return Kernel{Id::SqrtOneMinusP, scale, {}, 0.0, 0.5};
}
Kernel Kernel::sqrt_p_8m9p(double scale) {
  return Kernel{Id::SqrtP8m9p, scale, {}, 0.5, 0.0};
}
Kernel Kernel::sqrt_1mp_9pm1(double scale) {
  return Kernel{Id::SqrtOneMinusP9pm1, scale, {}, 0.0, 0.5};
}
Kernel Kernel::p_one_minus_p(double scale) {
  return Kernel{Id::POneMinusP, scale, {}, 1.0, 1.0};
}
Kernel Kernel::custom(std::function<double(double)> fn, double exp_at0,
                      double exp_at1, double scale) {
  Kernel k;
  k.id = Id::Custom;
  k.scale = scale;
  k.fn = std::move(fn);
  k.exp_at0 = exp_at0;
  k.exp_at1 = exp_at1;
  return k;
}

namespace {

// kernel value at p = hi - u, computed without the cancellation that
// evaluating at p directly would suffer for tiny u
double kernel_at_hi_distance(const Kernel& k, double hi, double u) {
  const double one_minus_hi = 1.0 - hi;
  const double p = hi - u;
  switch (k.id) {
    case Kernel::Id::P:
      return k.scale * p;
    case Kernel::Id::SqrtP:
      return k.scale * std::sqrt(std::max(0.0, p));
    case Kernel::Id::SqrtOneMinusP:
      return k.scale * std::sqrt(std::max(0.0, one_minus_hi + u));
    case Kernel::Id::SqrtP8m9p:
      return k.scale * std::sqrt(std::max(0.0, p * (8.0 - 9.0 * p)));
    case Kernel::Id::SqrtOneMinusP9pm1:
      return k.scale *
             std::sqrt(std::max(0.0, (one_minus_hi + u) * (9.0 * p - 1.0)));
    case Kernel::Id::POneMinusP:
      return k.scale * p * (one_minus_hi + u);
    case Kernel::Id::Custom:
      return k.scale * k.fn(p);
  }
  return 0.0;
}

}  // namespace

namespace {

struct Budget {
  long remaining = 1000000;
  bool exhausted = false;
};

// plain adaptive Simpson on a finite, bounded integrand
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth, Budget& budget) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  if (budget.remaining < 2) {
    budget.exhausted = true;
    return whole;
  }
  budget.remaining -= 2;
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) {
    budget.exhausted = true;
    return left + right + delta / 15.0;
  }
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget);
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol, Budget& budget) {
  if (b <= a) return 0.0;
  if (budget.remaining < 3) {
    budget.exhausted = true;
    return 0.0;
  }
  budget.remaining -= 3;
  const double fa = f(a);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48, budget);
}

// integral over [0, L] of g(u) with g ~ C u^s near 0 (s > -1), via u = t^m
// with m large enough that the transformed integrand is C^1 at 0; fractional
// nonnegative s (sqrt-type cusps) get the same treatment
double integrate_left_singular(const std::function<double(double)>& g, double L,
                               double s, double tol, Budget& budget) {
  if (L <= 0.0) return 0.0;
  const bool smooth = s >= 0.0 && std::fabs(s - std::round(s)) < 1e-9;
  if (smooth) return adaptive(g, 0.0, L, tol, budget);
  const int m = std::max(2, static_cast<int>(std::ceil(2.0 / (1.0 + s))));
  auto transformed = [&g, m](double t) {
    if (t <= 0.0) return 0.0;
    const double u = std::pow(t, m);
    if (u < 1e-280) return 0.0;  // underflow guard; true value is ~0 here
    return g(u) * m * std::pow(t, m - 1);
  };
  return adaptive(transformed, 0.0, std::pow(L, 1.0 / m), tol, budget);
}

}  // namespace

namespace {

// \int_{u0}^{u1} f(u) du with power behavior u^{s_near} at u0 (only relevant
// when u0 == 0) and (u1-u)^{s_far} at u1
IntegralResult integrate_distance(const std::function<double(double)>& f,
                                  double u0, double u1, double s_near,
                                  double s_far, double tol,
                                  long budget_evals = 1000000);

}  // namespace

IntegralResult integrate_singular(const std::function<double(double)>& fn,
                                  double a, double b, double s_a, double s_b,
                                  double tol, long budget_evals) {
  IntegralResult res;
  if (b <= a) return res;
  if (s_a <= -1.0 || s_b <= -1.0) {
    res.diverged = true;
    res.value = kInf;
    res.note = "endpoint exponent <= -1";
    return res;
  }
  Budget budget{budget_evals, false};
  const double mid = 0.5 * (a + b);
  // left half: u = p - a
  auto left = [&fn, a](double u) { return fn(a + u); };
  // right half: u = b - p
  auto right = [&fn, b](double u) { return fn(b - u); };
  double total = integrate_left_singular(left, mid - a, s_a, 0.5 * tol, budget);
  total += integrate_left_singular(right, b - mid, s_b, 0.5 * tol, budget);
  res.value = total;
  res.converged = !budget.exhausted;
  res.evals = budget_evals - budget.remaining;
  if (!res.converged) res.note = "subdivision budget exhausted";
  return res;
}

namespace {

IntegralResult integrate_distance(const std::function<double(double)>& f,
                                  double u0, double u1, double s_near,
                                  double s_far, double tol, long budget_evals) {
  IntegralResult res;
  if (u1 <= u0) return res;
  if (u0 <= 0.0 && s_near <= -1.0) {
    res.diverged = true;
    res.value = kInf;
    res.note = "endpoint exponent <= -1";
    return res;
  }
  Budget budget{budget_evals, false};
  const double mid = 0.5 * (u0 + u1);
  auto lower = [&f, u0](double w) { return f(u0 + w); };
  auto upper = [&f, u1](double w) { return f(u1 - w); };
  double total =
      integrate_left_singular(lower, mid - u0, u0 <= 0.0 ? s_near : 0.0,
                              0.5 * tol, budget);
  total += integrate_left_singular(upper, u1 - mid, s_far, 0.5 * tol, budget);
  res.value = total;
  res.converged = !budget.exhausted;
  res.evals = budget_evals - budget.remaining;
  if (!res.converged) res.note = "subdivision budget exhausted";
  return res;
}

// closed-form \int kernel(p) dp for constant-density pieces
bool kernel_antiderivative(const Kernel& k, double p, double* out) {
  switch (k.id) {
    case Kernel::Id::P:
      *out = k.scale * 0.5 * p * p;
      return true;
    case Kernel::Id::SqrtP:
      *out = k.scale * (2.0 / 3.0) * std::pow(p, 1.5);
      return true;
    case Kernel::Id::SqrtOneMinusP:
      *out = -k.scale * (2.0 / 3.0) * std::pow(1.0 - p, 1.5);
      return true;
    case Kernel::Id::POneMinusP:
      *out = k.scale * (0.5 * p * p - p * p * p / 3.0);
      return true;
    default:
      return false;
  }
}

// closed-form \int kernel(p) * coef * (1-p)^e dp on [x0,x1] for kernels that
// factor exactly through powers of (1-p); requires the density anchored at 1.
bool power_at_one_closed_form(const Kernel& k, double coef, double e, double x0,
                              double x1, double* out) {
  auto pow_term = [&](double s) {
    // \int (1-p)^s dp = -(1-p)^{s+1}/(s+1)
    return -(std::pow(1.0 - x1, s + 1.0) - std::pow(1.0 - x0, s + 1.0)) / (s + 1.0);
  };
  switch (k.id) {
    case Kernel::Id::SqrtOneMinusP:
      *out = k.scale * coef * pow_term(e + 0.5);
      return true;
    case Kernel::Id::P:
      // p (1-p)^e = (1-p)^e - (1-p)^{e+1}
      *out = k.scale * coef * (pow_term(e) - pow_term(e + 1.0));
      return true;
    case Kernel::Id::POneMinusP:
      // p(1-p)(1-p)^e = (1-p)^{e+1} - (1-p)^{e+2}
      *out = k.scale * coef * (pow_term(e + 1.0) - pow_term(e + 2.0));
      return true;
    default:
      return false;
  }
}

bool power_at_zero_closed_form(const Kernel& k, double coef, double e, double x0,
                               double x1, double* out) {
  auto pow_term = [&](double s) {
    return (std::pow(x1, s + 1.0) - std::pow(x0, s + 1.0)) / (s + 1.0);
  };
  switch (k.id) {
    case Kernel::Id::SqrtP:
      *out = k.scale * coef * pow_term(e + 0.5);
      return true;
    case Kernel::Id::P:
      *out = k.scale * coef * pow_term(e + 1.0);
      return true;
    case Kernel::Id::POneMinusP:
      // p(1-p) p^e = p^{e+1} - p^{e+2}
      *out = k.scale * coef * (pow_term(e + 1.0) - pow_term(e + 2.0));
      return true;
    default:
      return false;
  }
}

}  // namespace

IntegralResult integrate(const IntegralSpec& spec) {
  IntegralResult res;
  double total = 0.0;
  long evals = 0;
  bool converged = true;

  for (const MassAtom& a : spec.measure.atoms) {
    if (a.p < spec.lo || a.p > spec.hi) continue;
    if (a.p == spec.lo && !spec.include_lo) continue;
    if (a.p == spec.hi && !spec.include_hi) continue;
    const double v = spec.kernel.value(a.p);
    if (std::isinf(v) && a.mass != 0.0) {
      res.diverged = true;
      res.value = v * (a.mass > 0.0 ? 1.0 : -1.0);
      res.note = "kernel unbounded at an atom";
      return res;
    }
    total += v * a.mass;
  }

  for (const DensityPiece& d : spec.measure.densities) {
    const double x0 = std::max(d.lo, spec.lo);
    const double x1 = std::min(d.hi, spec.hi);
    if (x1 <= x0 || d.coef == 0.0) continue;

    const bool is_const = d.shape == DensityPiece::Shape::Constant;
    if (is_const) {
      double F0, F1;
      if (kernel_antiderivative(spec.kernel, x0, &F0) &&
          kernel_antiderivative(spec.kernel, x1, &F1)) {
        total += d.coef * (F1 - F0);
        continue;
      }
    }

    const bool at_hi = d.shape == DensityPiece::Shape::PowerAtHi;
    const double de = is_const ? 0.0 : d.e;
    const bool touches_anchor =
        !is_const && (at_hi ? (x1 == d.hi) : (x0 == d.lo));
    // combined exponents at the clip endpoints (density anchor + kernel zero)
    double sx0 = x0 == 0.0 ? spec.kernel.exp_at0 : 0.0;
    double sx1 = x1 == 1.0 ? spec.kernel.exp_at1 : 0.0;
    if (touches_anchor) (at_hi ? sx1 : sx0) += de;
    if ((sx0 <= -1.0) || (sx1 <= -1.0)) {
      res.diverged = true;
      res.value = d.coef > 0.0 ? kInf : -kInf;
      res.note = "combined endpoint exponent <= -1";
      res.evals = evals;
      return res;
    }

    double closed = 0.0;
    if (!is_const && at_hi && d.hi == 1.0 &&
        power_at_one_closed_form(spec.kernel, d.coef, d.e, x0, x1, &closed)) {
      total += closed;
      continue;
    }
    if (!is_const && !at_hi && d.lo == 0.0 &&
        power_at_zero_closed_form(spec.kernel, d.coef, d.e, x0, x1, &closed)) {
      total += closed;
      continue;
    }

    // work in the distance u to the anchor so the power factor stays exact
    IntegralResult part;
    if (at_hi) {
      auto f_u = [&](double u) {
        if (u < 1e-300) u = 1e-300;
        return kernel_at_hi_distance(spec.kernel, d.hi, u) * d.coef *
               std::pow(u, d.e);
      };
      part = integrate_distance(f_u, d.hi - x1, d.hi - x0, sx1, sx0, spec.tol);
    } else {
      auto f_u = [&](double u) {
        if (u < 1e-300) u = 1e-300;
        const double dens = is_const ? d.coef : d.coef * std::pow(u, d.e);
        return spec.kernel.value(d.lo + u) * dens;
      };
      part = integrate_distance(f_u, x0 - d.lo, x1 - d.lo, sx0, sx1, spec.tol);
    }
    total += part.value;
    evals += part.evals;
    converged = converged && part.converged;
    if (part.diverged) {
      res.diverged = true;
      res.value = part.value * (d.coef > 0.0 ? 1.0 : -1.0);
      res.note = part.note;
      res.evals = evals;
      return res;
    }
  }

  res.value = total;
  res.evals = evals;
  res.converged = converged;
  if (!converged) res.note = "subdivision budget exhausted";
  return res;
}

}  // namespace drmb
