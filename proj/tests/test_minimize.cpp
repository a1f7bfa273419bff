// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "breather/minimize.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace breather;
using namespace fixtures;

TEST_CASE("descent from the ansatz reaches a nontrivial critical point") {
  const ProblemSpec s = fig1(Geometry::Cylindrical, Nonlinearity::Instantaneous, 8, 32, 72);
  const SolveSetup setup = prepare(s);
  MinimizeOptions opt;
  const SolveResult r = solve(s, setup, opt);
  CHECK(r.result.converged);
  CHECK(r.seed.energy < 0.0);
  CHECK(r.result.report.E_total <= r.seed.energy);
  CHECK(r.result.report.grad_norm <= 1e-8 * std::max(1.0, std::fabs(r.result.report.E_total)));
  CHECK(r.result.start_energies.size() == 3);
  for (std::size_t i = 1; i < r.result.trace.size(); ++i)
    if (r.result.trace[i].start == r.result.trace[i - 1].start)
      CHECK(r.result.trace[i].E <= r.result.trace[i - 1].E + 2e-14 * std::max(1.0, std::fabs(r.result.trace[i - 1].E)));
}

TEST_CASE("identical seeds give identical results") {
  const ProblemSpec s = fig2(Geometry::Slab, Nonlinearity::Averaged, 8, 16, 72);
  const SolveSetup setup = prepare(s);
  MinimizeOptions opt;
  opt.rng_seed = 42;
  const SolveResult a = solve(s, setup, opt), b = solve(s, setup, opt);
  CHECK(a.result.profile.coeffs() == b.result.profile.coeffs());
  CHECK(a.result.report.E_total == b.result.report.E_total);
}

TEST_CASE("subspace restriction matches the re-indexed problem") {
  ProblemSpec s = fig2(Geometry::Cylindrical, Nonlinearity::Instantaneous, 15, 32, 128);
  const SolveSetup setup = prepare(s, {}, true);
  MinimizeOptions opt;
  opt.subspace_k0 = 3;
  opt.seed_k0 = 3;
  opt.restarts = 1;
  const SolveResult sub = solve(s, setup, opt);
  for (int k = 1; k <= 15; k += 2)
    if (k % 3 != 0)
      for (int j = 0; j <= 32; ++j) CHECK(sub.result.profile.at(k, j) == cplx(0.0));

  // T' = T/3 and K' = K/3: mode j of the new problem is mode 3j of the old one
  ProblemSpec t = s;
  t.T = Rational(4, 3);
  t.disc = {5, 32, 48};
  const SolveSetup setup_t = prepare(t, {}, true);
  for (int j = 1; j <= 5; j += 2) CHECK(setup_t.table.at(j).q == doctest::Approx(setup.table.at(3 * j).q).epsilon(1e-12));
  MinimizeOptions opt_t;
  opt_t.seed_k0 = 1;
  opt_t.restarts = 1;
  const SolveResult full = solve(t, setup_t, opt_t);
  CHECK(sub.result.report.E_total == doctest::Approx(full.result.report.E_total).epsilon(1e-7));
}

TEST_CASE("excluded traces stay pinned through the descent") {
  const ProblemSpec s = fig1(Geometry::Slab, Nonlinearity::Instantaneous, 8, 16, 72);
  FundsolOptions fopt;
  fopt.forced_exclusions = {3};
  const SolveSetup setup = prepare(s, fopt);
  MinimizeOptions opt;
  opt.restarts = 2;
  const SolveResult r = solve(s, setup, opt);
  CHECK(r.result.profile.at(3, 16) == cplx(0.0));
  CHECK(r.result.report.E_total < 0.0);
}

TEST_CASE("option checks") {
  MinimizeOptions opt;
  opt.grad_tol = 0.0;
  CHECK(error_kind([&] { opt.check(); }) == ErrorKind::InvalidArgument);
  opt = {};
  opt.subspace_k0 = 2;
  CHECK(error_kind([&] { opt.check(); }) == ErrorKind::InvalidArgument);
}
