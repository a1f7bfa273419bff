// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "breather/energy.hpp"
#include "breather/minimize.hpp"

namespace breather {

// Full-space profile w(r, t) = Σ_k g_k(r) e_k(t): the core solution on [0, R]
// continued by α_k φ_k beyond R.
struct BreatherField {
  Geometry geometry = Geometry::Cylindrical;
  double R = 1.0, r_max = 1.0, T = 1.0, omega = 1.0;
  int K = 1;
  std::vector<double> r;  // core nodes, then exterior samples at the core spacing
  std::vector<double> t;  // samples over t_span
  std::vector<cplx> alpha;  // per odd k
  std::vector<char> excluded;
  // g_k(r_i) and g_k'(r_i), mode-major; core slopes are one-sided from the element on the left
  std::vector<cplx> g, dg;
  // row-major [i * t.size() + m]
  std::vector<double> w, w_t, intensity, energy_density;
  double continuity_mismatch = 0.0;  // max_k |f_k(R) - α_k φ_k(R)| over non-excluded k

  int num_r() const { return static_cast<int>(r.size()); }
  int num_t() const { return static_cast<int>(t.size()); }
  cplx mode(int k, int i) const { return g[static_cast<std::size_t>(DiscreteProfile::mode_index(k)) * r.size() + i]; }
  cplx mode_deriv(int k, int i) const {
    return dg[static_cast<std::size_t>(DiscreteProfile::mode_index(k)) * r.size() + i];
  }
  // w and w_t at (r_i, t) from the stored mode values
  std::array<double, 2> sample(int i, double t) const;
};

struct MaterialProfile {
  // V(r) = c⁻² - 1 - χ₁(r) and Γ(r) = -χ₃(r)
  double c = 0.5;
  double V_core = 0.0, Gamma_core = 0.0;
  ProblemSpec spec;
  DerivedCoefficients dc;

  double V(double r) const;
  double Gamma(double r) const;
};

MaterialProfile material_profile(const ProblemSpec& spec, const DerivedCoefficients& dc);

// Default outer radius: R + 4P (periodic) or R + ρ + 8/(ω√β) (step).
double default_r_max(const ProblemSpec& spec, const DerivedCoefficients& dc);

// ExclusionDerivativeUnstable when an excluded mode has |φ_k'(R)| < 1e-10 relative to the
// table normalization and a nonzero interior slope. n_t samples per period over `periods`.
BreatherField extend_profile(const DiscreteProfile& u, const FundamentalSolutionTable& fs, const ProblemSpec& spec,
                             const DerivedCoefficients& dc, double r_max = 0.0, int n_t = 64, int periods = 2,
                             const std::vector<double>& kernel_samples = {});

// Per odd k: max over free nodes of |E'(u)[hat_j e_k]| divided by the discrete L² norm of u (0 if u = 0).
std::vector<double> el_residual(const DiscreteProfile& u, const EnergyFunctional& ef);

struct MonotonicityReport {
  bool monotone = true;
  double max_violation = 0.0;  // largest decrease between neighbouring nodes
  std::vector<double> f;
};

// f(r_j) = ½∫w_t² dt at the core nodes (by Parseval, Σ_k ω²k²|f_k(r_j)|²).
MonotonicityReport f_monotonicity(const DiscreteProfile& u, double omega);
// Monotone iff every forward difference is >= -1e-8 max f.
MonotonicityReport f_monotonicity(const std::vector<double>& f);

struct SpectrumClass {
  bool monochromatic = false;
  int k = 0;  // dominant mode
  std::vector<double> fractions;  // per odd k
  int modes_above = 0;  // fractions > 1e-6
  bool kernel_compatible = false;  // averaged with κ̂_{2k} = 0 for the dominant k
};

// Monochromatic(k) iff the largest fraction is >= 1 - 1e-6. khat_full: length-M kernel spectrum or empty.
SpectrumClass classify_spectrum(const EnergyReport& report, const std::vector<cplx>& khat_full = {});
std::string to_string(const SpectrumClass& s);

struct SegmentEnergy {
  std::vector<double> t0, value;
  double max = 0.0, min = 0.0;
  double tail_fraction = 0.0;  // share of the outermost exterior cell
  bool truncation_warning = false;  // tail_fraction > 1e-6
};

// Energy per unit segment (radial, 2πc ∫ r dr) or per unit square (slab, 2c ∫ dx over x > 0)
// over the window [t₀ - 1/c, t₀], with ε₀ = μ₀ = 1.
SegmentEnergy segment_energy(const BreatherField& field, const MaterialProfile& mat, const std::vector<double>& t0,
                             const std::vector<double>& kernel_samples = {}, int window_samples = 256);

struct BifurcationPoint {
  double d = 0.0;
  double E = 0.0;
  double norm = 0.0;
  bool converged = false;
};

struct SweepResult {
  double d_star = 0.0;
  int critical_k = 0;
  std::vector<BifurcationPoint> points;
  double exponent = 0.0;  // least-squares slope of log‖u*‖ against log(d - d⋆) over points with E < -1e-10
  double exponent_stderr = 0.0;
  int fitted = 0;
};

// Smallest d at which the zero profile stops being a minimizer of the discrete functional:
// d⋆ = c⁻² - 1 - max_k μ_k with μ_k the top generalized eigenvalue of (B_k - A_k, ω²k²M).
double locate_d_star(const ProblemSpec& spec, int* critical_k = nullptr);

// Minimizes at each d (seeded along the critical eigenvector) and fits the growth exponent.
SweepResult sweep_d(const ProblemSpec& spec, const std::vector<double>& d_values, const MinimizeOptions& opt);

// d⋆ + (c⁻² - 1 - d⋆)·2^{-i} for i = 1..count, as a decreasing list.
std::vector<double> default_sweep_values(const ProblemSpec& spec, double d_star, int count = 8);

}  // namespace breather
