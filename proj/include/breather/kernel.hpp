// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "breather/config.hpp"

namespace breather {

// Samples κ(t_j), t_j = jT/M, of the periodized kernel κ(t) = T Σ κ̃(t + nT).
std::vector<double> periodize(const KernelSpec& spec, double T, int M);

enum class ConvexityRoute { MaxLe2Min, NonnegativeFourier, SumDecomposition, Failed };

const char* to_string(ConvexityRoute route);

struct KernelAdmissibilityReport {
  bool even_positive = false;
  ConvexityRoute convexity_route = ConvexityRoute::Failed;
  double min_val = 0.0, max_val = 0.0;
  double max_asymmetry = 0.0;
  std::vector<double> fourier_coeffs;  // κ̂_k for k = -2K..2K
  int K = 0;
  // smallest f''(v)[u,u] / (‖u‖²‖v‖²) over the random spot check
  double hessian_min_ratio = 0.0;
  bool hessian_spot_ok = false;
  double alpha_holder = 1.0;  // declared, not estimated

  bool admissible() const {
    return even_positive && convexity_route != ConvexityRoute::Failed && hessian_spot_ok;
  }
};

KernelAdmissibilityReport check_admissible(const std::vector<double>& samples, int K,
                                           double alpha_holder = 1.0, std::uint64_t seed = 1);

// κ̂_k = (1/M) Σ_j κ(t_j) e^{-2πijk/M}; IndexOutOfRange unless |k| <= M/2.
std::complex<double> kernel_fourier(const std::vector<double>& samples, int k);

// Real Fourier coefficients κ̂_0..κ̂_{M/2} of an even kernel.
std::vector<double> kernel_fourier_all(const std::vector<double>& samples);

// Σ_k κ̂_k |(v²)^_k|² for real samples v on the same grid (the discrete ∫(κ∗v²)v² dt).
double quartic_form(const std::vector<double>& khat, const std::vector<double>& v);

}  // namespace breather
