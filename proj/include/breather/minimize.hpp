// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "breather/energy.hpp"

namespace breather {

enum class SeedKind { PaperAnsatz, Random, Provided };

struct MinimizeOptions {
  int max_iters = 20000;
  double grad_tol = 1e-8;  // relative: stop once grad_norm <= grad_tol * max(1, |E|)
  SeedKind seed = SeedKind::PaperAnsatz;
  int seed_k0 = 0;         // ansatz mode, 0 picks the smallest witness in the subspace
  double seed_epsilon = 0.0;  // 0 runs the golden-section search
  std::uint64_t rng_seed = 1;
  int subspace_k0 = 1;
  int restarts = 3;  // the first start is the seed, the others are random
  int memory = 10;
  double backtrack = 0.5;
  double armijo = 1e-4;

  void check() const;
};

struct TraceRow {
  int start = 0;
  int iter = 0;
  double E = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct MinimizeResult {
  DiscreteProfile profile;
  EnergyReport report;
  std::vector<TraceRow> trace;
  std::vector<double> start_energies;  // final energy of every start, seed first
  int best_start = 0;
  bool converged = false;
  int iterations = 0;
};

// Limited-memory quasi-Newton descent from a single start.
MinimizeResult descend(const DiscreteProfile& p0, const EnergyFunctional& ef, const MinimizeOptions& opt,
                       int start_index = 0);

// Runs from p0 and from restarts-1 random small-amplitude starts; returns the lowest energy.
MinimizeResult minimize(const DiscreteProfile& p0, const EnergyFunctional& ef, const MinimizeOptions& opt);

// Random profile on the free coordinates with entries uniform in [-amplitude, amplitude].
DiscreteProfile random_profile(const EnergyFunctional& ef, double amplitude, std::uint64_t seed);

struct SolveSetup {
  DerivedCoefficients dc;
  FundamentalSolutionTable table;
  std::vector<double> kernel;
};

// Coefficients, fundamental-solution table and kernel samples for a spec.
// Without force, a failed assumption audit raises NoWitness.
SolveSetup prepare(const ProblemSpec& spec, const FundsolOptions& fopt = {}, bool force = false);

struct SolveResult {
  MinimizeResult result;
  SeedResult seed;
  int seed_k0 = 0;
};

// Seed (ansatz, random or provided) followed by minimize.
SolveResult solve(const ProblemSpec& spec, const SolveSetup& setup, const MinimizeOptions& opt,
                  const std::optional<DiscreteProfile>& provided = std::nullopt);

}  // namespace breather
