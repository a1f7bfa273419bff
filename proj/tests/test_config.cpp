// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"

using namespace breather;
using namespace fixtures;

TEST_CASE("derived coefficients are exact rationals") {
  const DerivedCoefficients d1 = derive_coefficients(fig1(Geometry::Cylindrical));
  REQUIRE(d1.alpha.exact);
  CHECK(*d1.c2m1.exact == Rational(5, 4));
  CHECK(*d1.alpha.exact == Rational(25, 16));
  CHECK(*d1.beta.exact == Rational(25, 36));
  CHECK(*d1.delta.exact == Rational(1, 2));
  CHECK(d1.omega == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(d1.lambda == doctest::Approx(std::numbers::pi / 2 * std::sqrt(0.5)).epsilon(1e-14));

  const DerivedCoefficients d2 = derive_coefficients(fig2(Geometry::Slab));
  CHECK(*d2.alpha.exact == Rational(1));
  CHECK(*d2.beta.exact == Rational(1));
  CHECK(*d2.delta.exact == Rational(1, 10));
}

TEST_CASE("core potential and nonlinearity") {
  const DerivedCoefficients d = derive_coefficients(fig1(Geometry::Slab));
  CHECK(d.V_core == doctest::Approx(0.5));
  CHECK(d.Gamma_core == doctest::Approx(1.0));
}

TEST_CASE("periodic example arithmetic") {
  const PeriodicValidation v = validate_periodic(fig1(Geometry::Cylindrical));
  CHECK(v.m == 1);
  CHECK(v.n == 1);
  CHECK(*v.ratio.exact == Rational(1));
  CHECK(*v.T_required.exact == Rational(4));
}

TEST_CASE("periodic example with an even ratio denominator") {
  ProblemSpec s = fig1(Geometry::Cylindrical);
  std::get<PeriodicStep>(s.potential.cladding).theta = Rational(1, 3);
  CHECK(error_kind([&] { validate_periodic(s); }) == ErrorKind::NotOddRational);
}

TEST_CASE("periodic example with a mismatched period") {
  ProblemSpec s = fig1(Geometry::Cylindrical);
  s.T = Rational(5);
  CHECK(error_kind([&] { validate_periodic(s); }) == ErrorKind::PeriodMismatch);
}

TEST_CASE("step example arithmetic") {
  const StepValidation v = validate_step(fig2(Geometry::Cylindrical));
  CHECK(v.m == 1);
  CHECK(v.n == 1);
  CHECK(std::fabs(v.xi - std::numbers::pi / 4) <= 1e-12);
  CHECK(std::fabs(v.xi_bound - std::atan(std::sqrt(10.0))) <= 1e-12);
  CHECK(*v.T_required.exact == Rational(4));
}

TEST_CASE("step example searches (m, n) when none is given") {
  ProblemSpec s = fig2(Geometry::Cylindrical);
  auto& st = std::get<PureStep>(s.potential.cladding);
  st.m.reset();
  st.n.reset();
  const StepValidation v = validate_step(s);
  CHECK(*v.T_required.exact == Rational(4));
  CHECK_FALSE(v.matches.empty());
}

TEST_CASE("inequality violations name the broken condition") {
  ProblemSpec s = fig1(Geometry::Cylindrical);
  s.potential.d = Rational(2);
  try {
    derive_coefficients(s);
    FAIL("expected SignViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SignViolation);
    CHECK(std::string(e.what()).find("0<d<c⁻²−1") != std::string::npos);
  }
}

TEST_CASE("range checks") {
  ProblemSpec s = fig1(Geometry::Cylindrical);
  s.disc.K = 0;
  CHECK(error_kind([&] { s.check_ranges(); }) == ErrorKind::InvalidArgument);
  s = fig1(Geometry::Cylindrical);
  s.c = Rational(3, 2);
  CHECK(error_kind([&] { s.check_ranges(); }) == ErrorKind::InvalidArgument);
  s = fig1(Geometry::Cylindrical);
  s.disc.M = 40;
  CHECK(error_kind([&] { s.check_ranges(); }) == ErrorKind::InvalidArgument);
  s = fig1(Geometry::Cylindrical);
  s.disc.K = 8;
  CHECK_NOTHROW(s.check_ranges());
}

TEST_CASE("one-sided distance") {
  CHECK(dist_plus(0.3, 0.0, 1.0) == doctest::Approx(0.7));
  CHECK(dist_plus(1.0, 0.0, 1.0) == doctest::Approx(0.0));
  CHECK(dist_plus(-0.25, 0.5, 2.0) == doctest::Approx(0.75));
}

TEST_CASE("rational parsing") {
  CHECK(Rational::parse("45/16") == Rational(45, 16));
  CHECK(Rational::parse("0.4") == Rational(2, 5));
  CHECK(Rational::parse("-6/4") == Rational(-3, 2));
  CHECK(Rational(25, 16).sqrt() == Rational(5, 4));
  CHECK_FALSE(Rational(2).sqrt().has_value());
}
