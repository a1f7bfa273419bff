// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "breather/fundamental.hpp"
#include "breather/reconstruction.hpp"
#include "checks.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace breather;
using namespace fixtures;

namespace {

struct Case {
  ProblemSpec spec;
  DerivedCoefficients dc;
  FundamentalSolutionTable table;
};

Case make(const ProblemSpec& s) {
  Case c{s, derive_coefficients(s), {}};
  c.table = build_table(c.spec, c.dc);
  return c;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Composite Simpson of w(r)·φ(r)² on [R, R + L] with n panels per unit length.
double brute_l2sq(const ExteriorSolution& ext, double R, double L, int n_per_unit) {
  const int n = static_cast<int>(L * n_per_unit) * 2;
  const double h = L / n;
  const bool radial = ext.geometry == Geometry::Cylindrical;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = R + i * h, v = ext.value(r);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    s += w * v * v * (radial ? r : 1.0);
  }
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("radial periodic boundary ratios against the 40-digit oracle") {
  const Case c = make(fig1(Geometry::Cylindrical, Nonlinearity::Instantaneous, 33, 64, 8 * 34));
  CHECK(rel(c.table.at(1).q, 1.4642675433450102799) <= 1e-12);
  CHECK(rel(c.table.at(3).q, -6.3385755210286334044) <= 1e-12);
  CHECK(rel(c.table.at(5).q, 9.3505923976857491109) <= 1e-12);
  CHECK(rel(c.table.at(7).q, -14.198692033185466138) <= 1e-12);
  CHECK(rel(c.table.at(33).q, 64.334955923208856089) <= 1e-12);
}

TEST_CASE("radial step boundary ratios against the 40-digit oracle") {
  const Case c = make(fig2(Geometry::Cylindrical, Nonlinearity::Instantaneous, 33, 64, 8 * 34));
  CHECK(rel(c.table.at(1).q, 1.1061173291927270335) <= 1e-12);
  CHECK(rel(c.table.at(3).q, 4.3031606712786286672) <= 1e-12);
  CHECK(rel(c.table.at(5).q, 7.4580006516141258743) <= 1e-12);
  CHECK(rel(c.table.at(33).q, 51.458025160023570218) <= 1e-12);
}

TEST_CASE("slab step closed form") {
  // α = β = 1, ξ = π/4: the angle kωρ + ξ is 3π/4 mod π for every odd k, so q_k = kω.
  const Case c = make(fig2(Geometry::Slab));
  for (int k = 1; k <= 33; k += 2) CHECK(rel(c.table.at(k).q, k * std::numbers::pi / 2) <= 1e-10);
  const auto& w = c.table.audit.a6_witnesses;
  CHECK(std::find(w.begin(), w.end(), 1) != w.end());
}

TEST_CASE("slab periodic Floquet data") {
  const Case c = make(fig1(Geometry::Slab));
  const double omega = std::numbers::pi / 2;
  for (int k = 1; k <= 15; k += 2) {
    const auto& e = c.table.at(k);
    CHECK(std::fabs(std::fabs(e.multiplier) - 2.0 / 3.0) <= 1e-10);
    CHECK(std::fabs(std::fabs(e.other_multiplier) - 1.5) <= 1e-10);
    CHECK(e.multiplier < 0.0);
    const double sign = ((k + 1) / 2) % 2 ? 1.0 : -1.0;
    CHECK(rel(e.q, sign * k * omega * 1.25) <= 1e-10);
    const auto T = slab_period_transfer(k, c.spec, c.dc);
    CHECK(std::fabs(T[0] * T[3] - T[1] * T[2] - 1.0) <= 1e-10);
  }
}

TEST_CASE("propagation determinants") {
  // evanescent s·h stays moderate: cosh² - sinh² cancels catastrophically beyond that
  for (bool osc : {true, false})
    for (double s : osc ? std::vector<double>{0.7, 5.0, 40.0} : std::vector<double>{0.7, 2.0, 4.0}) {
      const auto P = propagation_matrix(Geometry::Cylindrical, osc, s, 3.1, 2.0);
      CHECK(std::fabs((P[0] * P[3] - P[1] * P[2]) / (2.0 / 3.1) - 1.0) <= 1e-10);
      const auto Q = propagation_matrix(Geometry::Slab, osc, s, 3.1, 2.0);
      CHECK(std::fabs(Q[0] * Q[3] - Q[1] * Q[2] - 1.0) <= 1e-10);
    }
}

TEST_CASE("exterior solutions solve the mode equation with second-order residual decay") {
  for (const ProblemSpec& s : {fig1(Geometry::Cylindrical), fig1(Geometry::Slab), fig2(Geometry::Cylindrical),
                               fig2(Geometry::Slab)}) {
    const Case c = make(s);
    const MaterialProfile mat = material_profile(c.spec, c.dc);
    for (int k : {1, 5, 33}) {
      const auto& ext = c.table.exterior(k);
      const double r1 = checks::ode_residual(ext, mat, c.dc.omega, k, 2e-3);
      const double r2 = checks::ode_residual(ext, mat, c.dc.omega, k, 1e-3);
      CAPTURE(k);
      CHECK(r2 <= 1e-6);
      CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
    }
  }
}

TEST_CASE("tail norms against brute-force quadrature") {
  for (const ProblemSpec& s : {fig1(Geometry::Cylindrical), fig1(Geometry::Slab), fig2(Geometry::Cylindrical),
                               fig2(Geometry::Slab)}) {
    const Case c = make(s);
    for (int k : {1, 3}) {
      const auto& e = c.table.at(k);
      const double R = c.spec.R.value;
      const double brute = brute_l2sq(c.table.exterior(k), R, 130.0, 200);
      CAPTURE(k);
      CHECK(rel(e.l2_norm * e.l2_norm, brute) <= 1e-7);
      CHECK(rel(e.tail_norm, e.l2_norm / std::fabs(e.value_at_R)) <= 1e-12);
    }
  }
}

TEST_CASE("assumption audit of the radial periodic example") {
  const Case c = make(fig1(Geometry::Cylindrical));
  CHECK(c.table.audit.passes());
  CHECK(c.table.audit.a5_lower > 0.0);
  bool witness_in_range = false;
  for (int k : c.table.audit.a6_witnesses) witness_in_range |= k <= 16;
  CHECK(witness_in_range);
  for (int k : c.table.audit.a6_witnesses)
    CHECK(c.table.at(k).q > a6_threshold(Geometry::Cylindrical, c.dc.lambda, k, 2.0));
}

TEST_CASE("radial step ratio approaches the slab value for large k") {
  ProblemSpec s = fig2(Geometry::Cylindrical, Nonlinearity::Instantaneous, 401, 64, 8 * 402);
  const DerivedCoefficients dc = derive_coefficients(s);
  const auto e = fundsol(401, s, dc);
  CHECK(std::fabs(e.q / (401 * dc.omega) - 1.0) <= 1e-2);
}

TEST_CASE("forced exclusion marks the mode") {
  const ProblemSpec s = fig1(Geometry::Cylindrical);
  const DerivedCoefficients dc = derive_coefficients(s);
  FundsolOptions opt;
  opt.forced_exclusions = {3};
  const auto t = build_table(s, dc, 0, opt);
  CHECK(t.excluded(3));
  CHECK_FALSE(t.excluded(1));
}
