// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <vector>

#include "breather/bessel.hpp"
#include "breather/error.hpp"
#include "doctest.h"

using namespace breather;

namespace {

// Power series in long double, independent of the library's evaluation paths.
long double series_i(int n, long double x) {
  long double term = std::pow(x / 2, n), sum = 0;
  for (int m = 1; n > 1 && m <= n; ++m) term /= m;
  if (n == 1) term = x / 2;
  for (int m = 0; m < 80; ++m) {
    sum += term;
    term *= (x * x / 4) / ((m + 1.0L) * (m + 1.0L + n));
  }
  return sum;
}

std::vector<double> log_points(double lo, double hi, int count) {
  std::vector<double> x(count);
  for (int i = 0; i < count; ++i) x[i] = lo * std::pow(hi / lo, i / (count - 1.0));
  return x;
}

}  // namespace

TEST_CASE("values at one") {
  CHECK(std::fabs(bessel_i1(1.0) - 0.5651591039924850) <= 1e-15);
  CHECK(std::fabs(bessel_i0(1.0) - 1.2660658777520084) <= 1e-15);
  CHECK(std::fabs(bessel_i1(1.0) - static_cast<double>(series_i(1, 1.0L))) <= 1e-15);
  CHECK(std::fabs(bessel_j0(1.0) - 0.7651976865579666) <= 1e-15);
  CHECK(std::fabs(bessel_y1(1.0) - -0.7812128213002887) <= 1e-14);
  CHECK(std::fabs(bessel_k0(1.0) - 0.42102443824070834) <= 1e-15);
}

TEST_CASE("modified functions match the series") {
  for (double x : {1e-3, 0.1, 0.7, 2.0, 5.0, 11.0}) {
    CHECK(bessel_i0(x) == doctest::Approx(static_cast<double>(series_i(0, x))).epsilon(1e-14));
    CHECK(bessel_i1(x) == doctest::Approx(static_cast<double>(series_i(1, x))).epsilon(1e-14));
  }
}

TEST_CASE("Wronskians on log-spaced points") {
  for (double x : log_points(1e-3, 1e3, 200)) {
    const BesselJY jy = bessel_jy(x);
    const double w_jy = jy.j1 * jy.y0 - jy.j0 * jy.y1;
    CHECK(std::fabs(w_jy * std::numbers::pi * x / 2 - 1.0) <= 1e-9);
    const BesselIK ik = bessel_ik_scaled(x);
    const double w_ik = ik.i0 * ik.k1 + ik.i1 * ik.k0;
    CHECK(std::fabs(w_ik * x - 1.0) <= 1e-9);
  }
}

TEST_CASE("scaled and unscaled agree") {
  for (double x : {0.5, 3.0, 20.0}) {
    CHECK(bessel_i1e(x) == doctest::Approx(bessel_i1(x) * std::exp(-x)).epsilon(1e-14));
    CHECK(bessel_k1e(x) == doctest::Approx(bessel_k1(x) * std::exp(x)).epsilon(1e-14));
  }
}

TEST_CASE("derivatives") {
  const double x = 1.7;
  CHECK(eval_bessel_derivative({BesselFamily::J, 0}, x) == doctest::Approx(-bessel_j1(x)).epsilon(1e-14));
  CHECK(eval_bessel_derivative({BesselFamily::I, 0}, x) == doctest::Approx(bessel_i1(x)).epsilon(1e-14));
  CHECK(eval_bessel_derivative({BesselFamily::I, 1}, x) ==
        doctest::Approx(bessel_i0(x) - bessel_i1(x) / x).epsilon(1e-14));
  CHECK(eval_bessel_derivative({BesselFamily::K, 1}, x) ==
        doctest::Approx(-bessel_k0(x) - bessel_k1(x) / x).epsilon(1e-14));
}

TEST_CASE("domain") {
  CHECK_THROWS_AS(eval_bessel({BesselFamily::Y, 0}, 0.0), Error);
  CHECK_THROWS_AS(eval_bessel({BesselFamily::K, 1}, -1.0), Error);
  CHECK(eval_bessel({BesselFamily::I, 1}, 0.0) == 0.0);
  CHECK(eval_bessel({BesselFamily::J, 0}, 0.0) == 1.0);
}
