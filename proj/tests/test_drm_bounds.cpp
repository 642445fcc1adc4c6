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

#include <cmath>
#include <random>

#include "doctest.h"
#include "drmb/drm_bounds.hpp"

using namespace drmb;

namespace {
const MomentSpec kStd{0.0, 1.0};
}

TEST_CASE("general-class Schwarz bounds") {
  const MomentSpec m{1.2, 0.8};
  const auto id = sup_general(DistortionFunction::identity(), m);
  CHECK(id.value == doctest::Approx(m.mu));
  CHECK(id.attainable);

  const auto rv = sup_general(DistortionFunction::rvar(0.9, 0.99), kStd);
  CHECK(rv.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(rv.attainable);
  REQUIRE(rv.extremal);
  CHECK(rho(DistortionFunction::rvar(0.9, 0.99), *rv.extremal) ==
        doctest::Approx(rv.value).epsilon(1e-10));

  CHECK(sup_general(DistortionFunction::tvar(0.75), kStd).value ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

  const auto rv_inf = inf_general(DistortionFunction::rvar(0.9, 0.99), kStd);
  CHECK(rv_inf.value == doctest::Approx(-0.1005037815).epsilon(1e-9));
  REQUIRE(rv_inf.extremal);
  CHECK(rho(DistortionFunction::rvar(0.9, 0.99), *rv_inf.extremal) ==
        doctest::Approx(rv_inf.value).epsilon(1e-10));

  const auto tv_inf = inf_general(DistortionFunction::tvar(0.6), kStd);
  CHECK(tv_inf.value == doctest::Approx(0.0));
  CHECK_FALSE(tv_inf.attainable);
}

TEST_CASE("symmetric-class bounds reproduce the worked RVaR cases") {
  const auto h = DistortionFunction::rvar(0.9, 0.99);
  const auto s = sup_symmetric(h, kStd);
  CHECK(s.value == doctest::Approx(2.2360679775).epsilon(1e-10));
  CHECK(s.attainable);
  REQUIRE(s.extremal);
  CHECK(rho(h, *s.extremal) == doctest::Approx(s.value).epsilon(1e-10));
  CHECK(validate_shape(*s.extremal, ShapeClass::Symmetric, kStd, 1e-9));

  // alpha < beta < 1/2: degenerate supremum mu, attained
  const auto h2 = DistortionFunction::rvar(0.2, 0.4);
  const MomentSpec m{3.0, 2.0};
  const auto s2 = sup_symmetric(h2, m);
  CHECK(s2.value == doctest::Approx(m.mu));
  CHECK(s2.attainable);
  REQUIRE(s2.extremal);
  CHECK(rho(h2, *s2.extremal) == doctest::Approx(m.mu).epsilon(1e-10));

  const auto i2 = inf_symmetric(h2, kStd);
  CHECK(i2.value == doctest::Approx(-std::sqrt(1.0 / 0.8)).epsilon(1e-10));
  REQUIRE(i2.extremal);
  CHECK(rho(h2, *i2.extremal) == doctest::Approx(i2.value).epsilon(1e-10));

  // upper-window infimum clamps at mu: quantiles above the median of a
  // symmetric law sit at or above the mean, so no value below mu is feasible
  const auto i = inf_symmetric(h, kStd);
  CHECK(i.value == doctest::Approx(0.0));
  CHECK(i.attainable);
  REQUIRE(i.extremal);
  CHECK(rho(h, *i.extremal) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(sup_symmetric(DistortionFunction::identity(), kStd).value ==
        doctest::Approx(0.0));
}

TEST_CASE("symmetric engine reproduces the three-point VaR bounds") {
  for (double a : {0.55, 0.75, 0.9}) {
    const auto h = DistortionFunction::var(a, Side::Right);
    CHECK(sup_symmetric(h, kStd).value ==
          doctest::Approx(std::sqrt(1.0 / (2.0 * (1.0 - a)))).epsilon(1e-10));
  }
  for (double a : {0.1, 0.25, 0.45}) {
    const auto h = DistortionFunction::var(a, Side::Right);
    CHECK(sup_symmetric(h, kStd).value == doctest::Approx(0.0));
  }
}

TEST_CASE("worst-case TVaR closed forms over the unimodal class") {
  CHECK(tvar_sup_unimodal(0.75, kStd).value ==
        doctest::Approx(1.5986105078).epsilon(1e-9));
  CHECK(tvar_sup_unimodal(0.5, kStd).value ==
        doctest::Approx(0.8819171037).epsilon(1e-9));
  CHECK(tvar_sup_unimodal(0.25, kStd).value ==
        doctest::Approx(0.5328701693).epsilon(1e-9));
  // branch continuity at 1/2
  CHECK(std::fabs(tvar_sup_unimodal(0.5 - 1e-10, kStd).value -
                  tvar_sup_unimodal(0.5 + 1e-10, kStd).value) < 1e-8);
  // the attaining law and the quadrature path agree
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto r = tvar_sup_unimodal(a, kStd);
    REQUIRE(r.extremal);
    CHECK(validate_shape(*r.extremal, ShapeClass::Unimodal, kStd, 1e-9));
    CHECK(rho(DistortionFunction::tvar(a), *r.extremal) ==
          doctest::Approx(r.value).epsilon(1e-9));
    CHECK(sup_unimodal(DistortionFunction::tvar(a), kStd).value ==
          doctest::Approx(r.value).epsilon(1e-10));
  }
}

TEST_CASE("worst-case TVaR closed forms over the unimodal-symmetric class") {
  CHECK(tvar_sup_us(0.75, kStd).value == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(tvar_sup_us(1.0 / 3.0, kStd).value ==
        doctest::Approx(0.5773502692).epsilon(1e-9));
  CHECK(tvar_sup_us(2.0 / 3.0, kStd).value ==
        doctest::Approx(1.1547005384).epsilon(1e-9));
  CHECK(std::fabs(tvar_sup_us(1.0 / 3.0 - 1e-10, kStd).value -
                  tvar_sup_us(1.0 / 3.0 + 1e-10, kStd).value) < 1e-8);
  CHECK(std::fabs(tvar_sup_us(2.0 / 3.0 - 1e-10, kStd).value -
                  tvar_sup_us(2.0 / 3.0 + 1e-10, kStd).value) < 1e-8);
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto r = tvar_sup_us(a, kStd);
    REQUIRE(r.extremal);
    CHECK(validate_shape(*r.extremal, ShapeClass::UnimodalSymmetric, kStd, 1e-9));
    CHECK(rho(DistortionFunction::tvar(a), *r.extremal) ==
          doctest::Approx(r.value).epsilon(1e-9));
    CHECK(sup_us(DistortionFunction::tvar(a), kStd).value ==
          doctest::Approx(r.value).epsilon(1e-10));
  }
}

TEST_CASE("unimodal dispatch per classification") {
  // simple: the VaR step integrates the VaR curve
  const auto v = sup_unimodal(DistortionFunction::var(0.95), kStd);
  CHECK(v.method == BoundResult::Method::ClosedForm);
  CHECK(v.value == doctest::Approx(2.8087165911).epsilon(1e-9));
  CHECK(v.attainable);

  const auto vi = inf_unimodal(DistortionFunction::var(0.95), kStd);
  CHECK(vi.value == doctest::Approx(-0.1973855067).epsilon(1e-8));
  REQUIRE(vi.extremal);
  CHECK(validate_shape(*vi.extremal, ShapeClass::Unimodal, kStd, 1e-9));
  CHECK(rho(DistortionFunction::var(0.95), *vi.extremal) ==
        doctest::Approx(vi.value).epsilon(1e-9));

  CHECK(inf_unimodal(DistortionFunction::identity(), kStd).value ==
        doctest::Approx(0.0));

  // concave with a singular derivative measure: high-precision reference
  // computed with 40-digit quadrature ahead of this implementation
  const auto ph = sup_unimodal(DistortionFunction::ph(0.9, 0.75), kStd);
  CHECK(ph.method == BoundResult::Method::EnvelopeIntegral);
  CHECK(ph.value == doctest::Approx(4.3170404111).epsilon(1e-9));
  const auto ph2 = sup_unimodal(DistortionFunction::ph(0.3, 0.75), kStd);
  CHECK(ph2.value == doctest::Approx(1.2205389221).epsilon(1e-8));

  // general: certified bracket
  const auto rv = sup_unimodal(DistortionFunction::rvar(0.9, 0.99), kStd);
  CHECK(rv.method == BoundResult::Method::Bracket);
  REQUIRE(rv.bracket);
  CHECK(rv.bracket->lower <= rv.bracket->upper + 1e-12);
  CHECK(rv.bracket->upper == doctest::Approx(2.8087165911).epsilon(1e-9));
  CHECK(rv.bracket->lower > 2.0);
  REQUIRE(rv.extremal);
  CHECK(validate_shape(*rv.extremal, ShapeClass::Unimodal, kStd, 1e-9));
  CHECK(rho(DistortionFunction::rvar(0.9, 0.99), *rv.extremal) ==
        doctest::Approx(rv.bracket->lower).epsilon(1e-8));

  // best case of TVaR over the unimodal class brackets down to mu
  const auto ti = inf_unimodal(DistortionFunction::tvar(0.75), kStd);
  REQUIRE(ti.bracket);
  CHECK(ti.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(ti.bracket->upper >= 0.0);
  CHECK(ti.bracket->upper <= std::sqrt(3.0) * 0.75 + 1e-9);
}

TEST_CASE("delta family values") {
  // step dual of VaR(0.9): interior stationary point matches the unimodal VaR bound
  const auto g = DistortionFunction::var(0.9).dual();
  CHECK(delta_R(g, 0.7) == doctest::Approx(1.8559214543).epsilon(1e-9));
  CHECK(delta_L(g, 0.9) ==
        doctest::Approx(std::sqrt(3.0 * 0.9 / (4.0 - 2.7))).epsilon(1e-10));
  // identity dual: every member has rho = mean, so both families sit at 0
  const auto id = DistortionFunction::identity();
  for (double b : {0.1, 0.4, 0.8}) {
    CHECK(delta_R(id, b) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(delta_L(id, b) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("delta optimizer reproduces the unimodal VaR bounds for steps") {
  for (double a : {0.3, 0.6, 5.0 / 6.0, 0.9, 0.95}) {
    const auto g = DistortionFunction::var(a).dual();
    const auto opt = optimize_delta(g);
    const double expected =
        a < 5.0 / 6.0 ? std::sqrt(3.0 * a / (4.0 - 3.0 * a))
                      : std::sqrt(4.0 / (9.0 * (1.0 - a)) - 1.0);
    CHECK(opt.value == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("theta optimizer: closed-form maxima for steps") {
  for (double a : {0.55, 0.7, 5.0 / 6.0, 0.9, 0.97}) {
    const auto g = DistortionFunction::var(a).dual();
    const auto opt = optimize_theta(g);
    const double expected = a < 5.0 / 6.0
                                ? std::sqrt(3.0) * (2.0 * a - 1.0)
                                : std::sqrt(2.0 / (9.0 * (1.0 - a)));
    CHECK(opt.value == doctest::Approx(expected).epsilon(1e-6));
    if (a >= 5.0 / 6.0) {
      CHECK(opt.argmax_b == doctest::Approx(3.0 * a - 2.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("upsilon atom rule pins the sqrt(1-p) kernel") {
  const auto g = convex_envelope(DistortionFunction::tvar(0.9).dual());
  const auto r = upsilon(g);
  CHECK_FALSE(r.diverged);
  CHECK(r.value == doctest::Approx(2.1081851068).epsilon(1e-10));
}

TEST_CASE("unimodal-symmetric dispatch") {
  CHECK(sup_us(DistortionFunction::var(0.9), kStd).value ==
        doctest::Approx(1.4907119850).epsilon(1e-9));
  CHECK(sup_us(DistortionFunction::tvar(0.5), kStd).value ==
        doctest::Approx(0.8660254038).epsilon(1e-9));

  // Upsilon evaluation of the PH dual with the derivative atom counted;
  // dropping the atom would halve this value (see the decisions ledger)
  const auto ph = sup_us(DistortionFunction::ph(0.9, 0.75), kStd);
  CHECK(ph.value == doctest::Approx(std::sqrt(10.0)).epsilon(1e-10));

  // convex distortion p^2: three closed-form kernel integrals against dh' = 2dp
  const auto sq = inf_us(DistortionFunction::power(2.0), kStd);
  CHECK(sq.value == doctest::Approx(-29.0 * std::sqrt(3.0) / 81.0).epsilon(1e-10));

  // divergence diagnostics for r <= 1/2
  const auto div = sup_us(DistortionFunction::ph(0.9, 0.4), kStd);
  CHECK(std::isinf(div.value));
  CHECK_FALSE(div.diagnostic.empty());

  // general: bracket
  const auto rv = sup_us(DistortionFunction::rvar(0.9, 0.99), kStd);
  REQUIRE(rv.bracket);
  CHECK(rv.bracket->lower <= rv.bracket->upper + 1e-12);
  CHECK(rv.bracket->upper == doctest::Approx(2.1081851068).epsilon(1e-9));
  REQUIRE(rv.extremal);
  CHECK(validate_shape(*rv.extremal, ShapeClass::UnimodalSymmetric, kStd, 1e-9));
  CHECK(rho(DistortionFunction::rvar(0.9, 0.99), *rv.extremal) ==
        doctest::Approx(rv.bracket->lower).epsilon(1e-8));
}

TEST_CASE("location-scale and sup >= inf across the dispatcher") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<DistortionFunction> hs = {
      DistortionFunction::identity(), DistortionFunction::var(0.9),
      DistortionFunction::tvar(0.75), DistortionFunction::rvar(0.6, 0.85),
      DistortionFunction::ph(0.9, 0.75)};
  const std::vector<ShapeClass> classes = {
      ShapeClass::General, ShapeClass::Symmetric, ShapeClass::Unimodal,
      ShapeClass::UnimodalSymmetric};
  for (const auto& h : hs) {
    for (ShapeClass cls : classes) {
      const double s0 = bound(h, cls, BoundSide::Sup, kStd).value;
      const double i0 = bound(h, cls, BoundSide::Inf, kStd).value;
      CHECK(s0 >= i0 - 1e-10);
      const MomentSpec m{u(rng) * 4.0 - 2.0, 0.3 + 2.0 * u(rng)};
      CHECK(bound(h, cls, BoundSide::Sup, m).value ==
            doctest::Approx(m.mu + m.sigma * s0).epsilon(1e-9));
      CHECK(bound(h, cls, BoundSide::Inf, m).value ==
            doctest::Approx(m.mu + m.sigma * i0).epsilon(1e-9));
    }
  }
}

TEST_CASE("boundary-flagged distortions are rejected in the bracket case") {
  // mass at the top of the distortion (h(0+) > 0) makes the worst case blow up
  const auto flagged = DistortionFunction::piecewise_linear(
      {{0.0, 0.0}, {0.0, 0.2}, {0.4, 0.3}, {0.7, 0.5}, {1.0, 1.0}});
  CHECK_THROWS_AS(sup_unimodal(flagged, kStd), DistortionError);
}
