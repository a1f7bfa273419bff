// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "breather/config.hpp"

namespace breather {

using cplx = std::complex<double>;

// Coefficients f_k(x_j) for odd k in [1, K] (K may be even; the top mode is then K-1) on equidistant nodes x_j = jR/N.
// f_{-k} = conj(f_k) is implied, so every synthesized field is real.
class DiscreteProfile {
 public:
  DiscreteProfile() = default;
  DiscreteProfile(Geometry geometry, double R, int K, int N);

  Geometry geometry() const { return geometry_; }
  double R() const { return R_; }
  int K() const { return K_; }
  int N() const { return N_; }
  int num_modes() const { return (K_ + 1) / 2; }
  int num_nodes() const { return N_ + 1; }
  double h() const { return R_ / N_; }
  double node(int j) const { return R_ * j / N_; }
  static int mode_index(int k) { return (k - 1) / 2; }
  static int mode_of(int idx) { return 2 * idx + 1; }

  cplx& at(int k, int j) { return coeffs_[static_cast<std::size_t>(mode_index(k)) * (N_ + 1) + j]; }
  const cplx& at(int k, int j) const {
    return coeffs_[static_cast<std::size_t>(mode_index(k)) * (N_ + 1) + j];
  }
  std::vector<cplx>& coeffs() { return coeffs_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  // Real parametrization (Re, Im interleaved per entry) used by the optimizer.
  std::vector<double> to_real() const;
  void from_real(const std::vector<double>& x);
  std::size_t real_size() const { return 2 * coeffs_.size(); }

  double max_abs() const;
  // Same profile with modes k > K' dropped (K' <= K) or zero-padded (K' > K).
  DiscreteProfile with_modes(int K_new) const;

 private:
  Geometry geometry_ = Geometry::Cylindrical;
  double R_ = 1.0;
  int K_ = 1, N_ = 2;
  std::vector<cplx> coeffs_;
};

// M-point sampling of the torus with dt = dλ/T.
class TimeGrid {
 public:
  TimeGrid(double T, int M, int K);

  int M() const { return M_; }
  int K() const { return K_; }
  double T() const { return T_; }
  double omega() const { return omega_; }
  double t(int m) const { return T_ * m / M_; }
  // sin/cos(ωk t_m) for odd k <= K
  double sin_tab(int k, int m) const { return sin_[static_cast<std::size_t>((k - 1) / 2) * M_ + m]; }
  double cos_tab(int k, int m) const { return cos_[static_cast<std::size_t>((k - 1) / 2) * M_ + m]; }

  // v̂_k = (1/M) Σ_m v(t_m) e^{-iωk t_m} for k = 0..M-1 (negative k at M+k).
  std::vector<cplx> analyze(const std::vector<double>& v) const;
  // Real samples from a full length-M spectrum with v̂_{-k} = conj(v̂_k).
  std::vector<double> synthesize(const std::vector<cplx>& spectrum) const;

 private:
  double T_, omega_;
  int M_, K_;
  std::vector<double> sin_, cos_;
  struct FftImpl;
  std::shared_ptr<FftImpl> fft_;
};

// u_t(x_j, t_m) for all m.
std::vector<double> synthesize_time_derivative(const DiscreteProfile& p, const TimeGrid& grid, int j);
// u(x_j, t_m) for all m.
std::vector<double> synthesize_values(const DiscreteProfile& p, const TimeGrid& grid, int j);

// Coefficients for |k| <= M/2 as a length-M vector, same normalization as TimeGrid::analyze.
std::vector<cplx> analyze(const TimeGrid& grid, const std::vector<double>& samples);

DiscreteProfile project_SK(const DiscreteProfile& p, int K_prime);

// Discrete L² norm Σ_k 2∫|f_k|² (weight r for radial), via exact element mass matrices.
double profile_l2_norm(const DiscreteProfile& p);

enum class QuadKind { Mass_r, Stiffness_r, InverseR, Mass_1, Stiffness_1 };

// ∫ over [a, b] of the integrand built from the linear interpolant of (c0, c1):
// Mass_r: u² r, Stiffness_r: u'² r, InverseR: u²/r, Mass_1: u², Stiffness_1: u'².
double element_quadrature(QuadKind kind, double a, double b, double c0, double c1);

// 2x2 local matrix of the same bilinear form ({{m00, m01}, {m01, m11}}).
struct LocalMatrix {
  double m00 = 0, m01 = 0, m11 = 0;
};
LocalMatrix element_matrix(QuadKind kind, double a, double b);

// ∫ hat_j w(x) dx with w = r (radial) or 1 (slab).
std::vector<double> lumped_weights(Geometry geometry, double R, int N);

}  // namespace breather
