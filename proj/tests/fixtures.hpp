// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "breather/config.hpp"
#include "breather/error.hpp"

namespace fixtures {

using namespace breather;

// Caption parameters of the two example families. The averaged cylindrical runs use the
// enlarged cores R = 43/20 and R = 9/4.
inline ProblemSpec fig1(Geometry g, Nonlinearity nl = Nonlinearity::Instantaneous, int K = 16, int N = 64,
                        int M = 136) {
  ProblemSpec s;
  s.name = "fig1";
  s.geometry = g;
  s.nonlinearity = nl;
  s.c = Rational(2, 3);
  s.T = Rational(4);
  s.R = (nl == Nonlinearity::Averaged && g == Geometry::Cylindrical) ? Rational(43, 20) : Rational(2);
  s.gamma = Rational(1);
  s.potential.d = Rational(3, 4);
  s.potential.cladding = PeriodicStep{Rational(45, 16), Rational(35, 18), Rational(2, 5), Rational(2)};
  s.disc = {K, N, M};
  return s;
}

inline ProblemSpec fig2(Geometry g, Nonlinearity nl = Nonlinearity::Instantaneous, int K = 16, int N = 64,
                        int M = 136) {
  ProblemSpec s;
  s.name = "fig2";
  s.geometry = g;
  s.nonlinearity = nl;
  s.c = Rational(2, 3);
  s.T = Rational(4);
  s.R = (nl == Nonlinearity::Averaged && g == Geometry::Cylindrical) ? Rational(9, 4) : Rational(2);
  s.gamma = Rational(1);
  s.potential.d = Rational(23, 20);
  s.potential.cladding = PureStep{Rational(9, 4), Rational(1, 4), Rational(1), 1, 1};
  s.disc = {K, N, M};
  return s;
}

inline std::optional<ErrorKind> error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace fixtures
