// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <set>
#include <vector>

#include "breather/config.hpp"

namespace breather {

// Constant-coefficient piece of the exterior operator for mode k:
// radial  φ'' + φ'/r + (σ s² - 1/r²)φ = 0, slab  φ'' + σ s² φ = 0,
// σ = +1 (oscillatory) or -1 (evanescent).
struct ExteriorSegment {
  double r0 = 0.0, r1 = 0.0;  // r1 = +inf for a decaying tail
  double s = 0.0;
  bool oscillatory = true;
  double phi0 = 0.0, dphi0 = 0.0;  // state at r0
};

// Piecewise description of the decaying solution φ_k on [R, ∞).
class ExteriorSolution {
 public:
  Geometry geometry = Geometry::Cylindrical;
  int k = 1;
  std::vector<ExteriorSegment> segments;  // contiguous, starting at R
  // slab periodic: segments cover one period [R, R+P) and repeat with multiplier
  bool floquet = false;
  double period = 0.0;
  double multiplier = 0.0;

  double value(double r) const;
  double deriv(double r) const;
  // value and derivative together
  std::array<double, 2> state(double r) const;
  void scale(double factor);
};

struct FundamentalSolutionEntry {
  int k = 1;
  double value_at_R = 0.0;
  double deriv_at_R = 0.0;
  double q = 0.0;          // deriv_at_R / value_at_R
  double tail_norm = 0.0;  // ‖φ_k‖_{L²([R,∞))} / |φ_k(R)|, weight r in the radial case
  double l2_norm = 0.0;    // ‖φ_k‖_{L²([R,∞))} in the stored normalization
  double sup_first_cell = 0.0;
  bool excluded = false;
  int cells_used = 0;       // radial periodic: product length at convergence
  double multiplier = 0.0;  // slab periodic: selected Floquet multiplier
  double other_multiplier = 0.0;
};

struct FundsolOptions {
  double tau_excl = 1e-8;
  double product_tol = 1e-13;
  int n_max = 10000;
  std::set<int> forced_exclusions;  // synthetic exclusions for testing the constrained path
};

// 2x2 propagation matrix carrying (φ, φ') from r_from to r_to on a constant segment.
std::array<double, 4> propagation_matrix(Geometry geometry, bool oscillatory, double s, double r_to,
                                         double r_from);

FundamentalSolutionEntry fundsol_step_radial(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                             ExteriorSolution* ext = nullptr, const FundsolOptions& opt = {});
FundamentalSolutionEntry fundsol_step_slab(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                           ExteriorSolution* ext = nullptr, const FundsolOptions& opt = {});
FundamentalSolutionEntry fundsol_periodic_radial(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                                 ExteriorSolution* ext = nullptr,
                                                 const FundsolOptions& opt = {});
FundamentalSolutionEntry fundsol_periodic_slab(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                               ExteriorSolution* ext = nullptr, const FundsolOptions& opt = {});

// Dispatch on geometry and cladding.
FundamentalSolutionEntry fundsol(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                 ExteriorSolution* ext = nullptr, const FundsolOptions& opt = {});

// Slab periodic one-period transfer matrix (φ, φ') at R -> at R+P.
std::array<double, 4> slab_period_transfer(int k, const ProblemSpec& spec, const DerivedCoefficients& dc);

struct AssumptionAudit {
  double a5_lower = 0.0;
  double a5_upper = 0.0;
  std::vector<int> a6_witnesses;
  double a6_prime = 0.0;  // max q_k/k over the top quartile
  double a6_prime_threshold = 0.0;  // ω√δ
  bool a6_prime_holds = false;
  int window_lo = 0, window_hi = 0;  // k range of the asymptotic proxies
  bool passes() const { return a5_lower > 0.0 && std::isfinite(a5_upper) && !a6_witnesses.empty(); }
};

struct FundamentalSolutionTable {
  Geometry geometry = Geometry::Cylindrical;
  int K = 1;        // solver range
  int K_audit = 1;  // table range (>= K)
  double R = 1.0;
  std::vector<FundamentalSolutionEntry> entries;  // k = 1, 3, ..., K_audit
  std::vector<ExteriorSolution> exteriors;
  AssumptionAudit audit;

  const FundamentalSolutionEntry& at(int k) const;
  const ExteriorSolution& exterior(int k) const;
  bool excluded(int k) const { return at(k).excluded; }
};

// (A6)/(Ã6) comparison value λk·I₁'(λkR)/I₁(λkR) (radial) or λk·tanh(λkR) (slab).
double a6_threshold(Geometry geometry, double lambda, int k, double R);

AssumptionAudit audit_assumptions(const std::vector<FundamentalSolutionEntry>& entries, Geometry geometry,
                                  const DerivedCoefficients& dc, double R, int K);

// Entries for odd k <= K_audit (default 4K) plus the audit; per-k work runs on
// BREATHER_THREADS workers with results stored by index.
FundamentalSolutionTable build_table(const ProblemSpec& spec, const DerivedCoefficients& dc, int K_audit = 0,
                                     const FundsolOptions& opt = {});

// L² integral of φ² over a segment (weight r in the radial case), exact closed forms.
double segment_l2(Geometry geometry, const ExteriorSegment& seg, double r_end);

}  // namespace breather
