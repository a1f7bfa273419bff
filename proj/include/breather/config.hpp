// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "breather/rational.hpp"

namespace breather {

enum class Geometry { Cylindrical, Slab };

// Outside the core: a on |y| mod P < θP/2 (y = |x| - R), b elsewhere.
struct PeriodicStep {
  Number a, b, theta, P;
};

// a on [R, R+ρ], b beyond.
struct PureStep {
  Number a, b, rho;
  std::optional<int> m, n;  // supplied pair for the ξ condition, else searched
};

struct PotentialSpec {
  Number d;
  std::variant<PeriodicStep, PureStep> cladding;

  bool periodic() const { return std::holds_alternative<PeriodicStep>(cladding); }
};

enum class Nonlinearity { Instantaneous, Averaged };

struct KernelSpec {
  enum class Form { ConstantOne, PeriodizedLorentz, StepSeries, Sampled, DebyeContinuous };
  Form form = Form::ConstantOne;
  std::vector<double> weights;  // StepSeries
  std::vector<double> samples;  // Sampled, length M
  double alpha_holder = 1.0;
};

struct Discretization {
  int K = 64;
  int N = 128;
  int M = 0;  // 0 selects 8(K+1)

  int samples() const { return M > 0 ? M : 8 * (K + 1); }
};

struct ProblemSpec {
  std::string name;
  Geometry geometry = Geometry::Cylindrical;
  PotentialSpec potential;
  Nonlinearity nonlinearity = Nonlinearity::Instantaneous;
  KernelSpec kernel;
  Number c, T, R, gamma;
  Discretization disc;

  double omega() const;
  // Range checks on c, T, R, γ, K, N, M; throws InvalidArgument.
  void check_ranges() const;
};

struct DerivedCoefficients {
  Number c2m1;   // c⁻² - 1
  Number alpha;  // a + 1 - c⁻²
  Number beta;   // periodic: b + 1 - c⁻²; step: -(b + 1 - c⁻²)
  Number delta;  // -(d + 1 - c⁻²) = V in the core
  double V_core = 0.0;
  double Gamma_core = 0.0;
  double omega = 0.0;
  double lambda = 0.0;  // ω√δ
  bool delta_below_alpha = true;
};

// Checks the Thm 1.1 inequalities; SignViolation names the broken one.
DerivedCoefficients derive_coefficients(const ProblemSpec& spec);

struct PeriodicValidation {
  int m = 0, n = 0;
  Number ratio;
  Number T_required;
};

struct StepValidation {
  int m = 0, n = 0;
  double xi = 0.0;
  double xi_bound = 0.0;
  Number T_required;
  // every coprime pair (m, n <= 64) satisfying the ξ condition, in search order
  std::vector<std::pair<int, int>> matches;
};

PeriodicValidation validate_periodic(const ProblemSpec& spec);
StepValidation validate_step(const ProblemSpec& spec);

// dist⁺(p, offset + spacing ℤ): distance to the nearest set element ≥ p.
double dist_plus(double p, double offset, double spacing);

// True if the Number equals the other within 1e-12 relative (exactly when both exact).
bool same_value(const Number& x, const Number& y);

}  // namespace breather
