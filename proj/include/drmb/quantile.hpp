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

#include <iosfwd>
#include <string>
#include <vector>

#include "drmb/distortion.hpp"

namespace drmb {

enum class ShapeClass { General, Symmetric, Unimodal, UnimodalSymmetric };

const char* to_string(ShapeClass c);
ShapeClass parse_shape_class(const std::string& name);

struct MomentSpec {
  double mu = 0.0;
  double sigma = 1.0;  // must be > 0
};

// Piecewise constant/affine generalized inverse on (0,1). A constant segment
// of width w is an atom of mass w; a value gap between adjacent segments is a
// gap in the support. Segment values must be nondecreasing.
class QuantileFunction {
 public:
  struct Segment {
    double lo = 0.0;
    double hi = 1.0;
    double a = 0.0;      // value at lo
    double slope = 0.0;  // >= 0; constant segment when 0

    double value(double p) const { return a + slope * (p - lo); }
    double hi_value() const { return a + slope * (hi - lo); }
  };

  QuantileFunction() = default;
  explicit QuantileFunction(std::vector<Segment> segments);

  static QuantileFunction constant(double value);

  // F^{-1}(p) for Side::Left, F^{-1+}(p) for Side::Right; p in (0,1).
  double value(double p, Side side) const;

  const std::vector<Segment>& segments() const { return segments_; }

  QuantileFunction affine(double scale, double shift) const;  // scale > 0
  // Law of -X: reflected, reversed quantile.
  QuantileFunction reflect() const;

  double mean() const;
  double second_moment() const;
  double variance() const;

  // CSV with header p,q; rows at segment endpoints plus `grid` interior
  // points; atoms appear as repeated q over the mass interval.
  void export_csv(std::ostream& os, int grid = 0) const;

 private:
  std::vector<Segment> segments_;
};

double mean(const QuantileFunction& q);
double variance(const QuantileFunction& q);

// rho_h[X] via the quantile representation against the dual measure:
// h right-continuous pairs F^{-1+}, left-continuous pairs F^{-1}
// (per-atom sides carried by the derivative measure).
double rho(const DistortionFunction& h, const QuantileFunction& q);

// Stieltjes integral of the quantile against an explicit measure.
double integrate_quantile(const QuantileFunction& q, const DerivativeMeasure& m);

bool validate_shape(const QuantileFunction& q, ShapeClass cls,
                    const MomentSpec& m, double tol = 1e-9);

// Sharp upper bound on P((X-mu)/sigma >= v) for the class, v >= 0.
double tail_bound(ShapeClass cls, double v);

}  // namespace drmb
