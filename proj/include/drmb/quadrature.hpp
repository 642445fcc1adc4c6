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

#include <functional>
#include <string>

#include "drmb/distortion.hpp"

namespace drmb {

// Bounded analytic kernels appearing in the envelope-integral formulas, with
// their power behavior at the interval ends (exponent of p at 0, of (1-p)
// at 1; 0 means regular and nonzero).
struct Kernel {
  enum class Id {
    P,                 // p
    SqrtP,             // sqrt(p)
    SqrtOneMinusP,     // sqrt(1-p)
    SqrtP8m9p,         // sqrt(p(8-9p)), natural domain [0, 8/9]
    SqrtOneMinusP9pm1, // sqrt((1-p)(9p-1)), natural domain [1/9, 1]
    POneMinusP,        // p(1-p)
    Custom,
  };

  Id id = Id::P;
  double scale = 1.0;
  std::function<double(double)> fn;  // Custom only
  double exp_at0 = 0.0;
  double exp_at1 = 0.0;

  double value(double p) const;

  static Kernel p(double scale = 1.0);
  static Kernel sqrt_p(double scale = 1.0);
  static Kernel sqrt_one_minus_p(double scale = 1.0);
  static Kernel sqrt_p_8m9p(double scale = 1.0);
  static Kernel sqrt_1mp_9pm1(double scale = 1.0);
  static Kernel p_one_minus_p(double scale = 1.0);
  static Kernel custom(std::function<double(double)> fn, double exp_at0,
                       double exp_at1, double scale = 1.0);
};

struct IntegralSpec {
  Kernel kernel;
  DerivativeMeasure measure;
  double lo = 0.0;
  double hi = 1.0;
  bool include_lo = true;  // atom inclusion at the interval ends
  bool include_hi = true;
  double tol = 1e-10;
};

struct IntegralResult {
  double value = 0.0;
  bool diverged = false;
  bool converged = true;  // tolerance reached within the evaluation budget
  long evals = 0;
  std::string note;
};

// Atoms summed exactly; polynomial/sqrt kernels against constant and
// power-law densities in closed form; everything else by adaptive
// subdivision with endpoint-singularity substitution. Divergence
// (combined endpoint exponent <= -1) reported as +/-inf.
IntegralResult integrate(const IntegralSpec& spec);

// Adaptive integral of fn over [a,b]; fn must be finite on the open
// interval with integrable power behavior u^{s_a}, u^{s_b} at the ends
// (s = 0 for a regular endpoint).
IntegralResult integrate_singular(const std::function<double(double)>& fn,
                                  double a, double b, double s_a, double s_b,
                                  double tol = 1e-10, long budget = 1000000);

// hi_u^s - lo_u^s without cancellation when the bases are close; `width`
// is the exactly-known difference hi_u - lo_u >= 0.
double stable_power_difference(double hi_u, double lo_u, double width, double s);

}  // namespace drmb
