// SPDX-License-Identifier: Apache-2.0
#include "breather/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <unsupported/Eigen/FFT>

#include "breather/error.hpp"

namespace breather {

DiscreteProfile::DiscreteProfile(Geometry geometry, double R, int K, int N)
    : geometry_(geometry), R_(R), K_(K), N_(N) {
  if (K < 1) throw Error(ErrorKind::InvalidArgument, "K must be >= 1");
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "N must be >= 2");
  if (!(R > 0)) throw Error(ErrorKind::InvalidArgument, "R must be positive");
  coeffs_.assign(static_cast<std::size_t>(num_modes()) * (N + 1), cplx(0.0, 0.0));
}

std::vector<double> DiscreteProfile::to_real() const {
  std::vector<double> x(2 * coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    x[2 * i] = coeffs_[i].real();
    x[2 * i + 1] = coeffs_[i].imag();
  }
  return x;
}

void DiscreteProfile::from_real(const std::vector<double>& x) {
  if (x.size() != 2 * coeffs_.size()) throw Error(ErrorKind::InvalidArgument, "real vector size mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] = cplx(x[2 * i], x[2 * i + 1]);
}

double DiscreteProfile::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

DiscreteProfile DiscreteProfile::with_modes(int K_new) const {
  DiscreteProfile out(geometry_, R_, K_new, N_);
  for (int k = 1; k <= std::min(K_, K_new); k += 2)
    for (int j = 0; j <= N_; ++j) out.at(k, j) = at(k, j);
  return out;
}

struct TimeGrid::FftImpl {
  Eigen::FFT<double> fft;
};

TimeGrid::TimeGrid(double T, int M, int K)
    : T_(T), omega_(2.0 * std::numbers::pi / T), M_(M), K_(K), fft_(std::make_shared<FftImpl>()) {
  if (M <= 4 * K) throw Error(ErrorKind::InvalidArgument, "M must exceed 4K");
  if (M % 2) throw Error(ErrorKind::InvalidArgument, "M must be even");
  const int nk = (K + 1) / 2;
  sin_.resize(static_cast<std::size_t>(nk) * M);
  cos_.resize(static_cast<std::size_t>(nk) * M);
  for (int i = 0; i < nk; ++i) {
    const long k = 2 * i + 1;
    for (int m = 0; m < M; ++m) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>((k * m) % M) / M;
      sin_[static_cast<std::size_t>(i) * M + m] = std::sin(th);
      cos_[static_cast<std::size_t>(i) * M + m] = std::cos(th);
    }
  }
}

std::vector<cplx> TimeGrid::analyze(const std::vector<double>& v) const {
  if (static_cast<int>(v.size()) != M_) throw Error(ErrorKind::InvalidArgument, "sample count != M");
  std::vector<cplx> in(v.begin(), v.end()), out;
  fft_->fft.fwd(out, in);
  for (auto& c : out) c /= static_cast<double>(M_);
  return out;
}

std::vector<double> TimeGrid::synthesize(const std::vector<cplx>& spectrum) const {
  if (static_cast<int>(spectrum.size()) != M_) throw Error(ErrorKind::InvalidArgument, "spectrum size != M");
  std::vector<cplx> out;
  std::vector<cplx> in(spectrum);
  fft_->fft.inv(out, in);  // includes the 1/M factor
  std::vector<double> v(M_);
  for (int m = 0; m < M_; ++m) v[m] = out[m].real() * M_;
  return v;
}

std::vector<double> synthesize_time_derivative(const DiscreteProfile& p, const TimeGrid& grid, int j) {
  const int M = grid.M();
  std::vector<double> ut(M, 0.0);
  const double w = grid.omega();
  for (int k = 1; k <= p.K(); k += 2) {
    const cplx f = p.at(k, j);
    if (f == cplx(0.0, 0.0)) continue;
    const double a = -2.0 * w * k * f.real(), b = -2.0 * w * k * f.imag();
    for (int m = 0; m < M; ++m) ut[m] += a * grid.sin_tab(k, m) + b * grid.cos_tab(k, m);
  }
  return ut;
}

std::vector<double> synthesize_values(const DiscreteProfile& p, const TimeGrid& grid, int j) {
  const int M = grid.M();
  std::vector<double> u(M, 0.0);
  for (int k = 1; k <= p.K(); k += 2) {
    const cplx f = p.at(k, j);
    if (f == cplx(0.0, 0.0)) continue;
    const double a = 2.0 * f.real(), b = -2.0 * f.imag();
    for (int m = 0; m < M; ++m) u[m] += a * grid.cos_tab(k, m) + b * grid.sin_tab(k, m);
  }
  return u;
}

std::vector<cplx> analyze(const TimeGrid& grid, const std::vector<double>& samples) {
  return grid.analyze(samples);
}

DiscreteProfile project_SK(const DiscreteProfile& p, int K_prime) {
  if (K_prime < 1) throw Error(ErrorKind::InvalidArgument, "K' must be >= 1");
  DiscreteProfile out = p;
  for (int k = K_prime + 2; k <= p.K(); k += 2)
    for (int j = 0; j <= p.N(); ++j) out.at(k, j) = 0.0;
  return out;
}

LocalMatrix element_matrix(QuadKind kind, double a, double b) {
  if (!(b > a)) throw Error(ErrorKind::DegenerateElement, "element length must be positive");
  const double h = b - a;
  LocalMatrix m;
  switch (kind) {
    case QuadKind::Mass_r: {
      // 3-point Gauss-Legendre, exact for the cubic integrand
      const double g[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
      const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      for (int q = 0; q < 3; ++q) {
        const double s = 0.5 * (g[q] + 1.0);
        const double x = a + s * h;
        const double wq = 0.5 * h * w[q] * x;
        m.m00 += wq * (1 - s) * (1 - s);
        m.m01 += wq * (1 - s) * s;
        m.m11 += wq * s * s;
      }
      break;
    }
    case QuadKind::Stiffness_r: {
      const double s = (a + b) / (2.0 * h);  // (b²-a²)/(2h²)
      m.m00 = s;
      m.m01 = -s;
      m.m11 = s;
      break;
    }
    case QuadKind::InverseR: {
      if (a <= 0.0) {
        m.m00 = std::numeric_limits<double>::infinity();
        m.m01 = 0.5;
        m.m11 = 0.5;
        break;
      }
      const long double al = a, bl = b, hl = bl - al;
      const long double L = std::log1p(hl / al);
      const long double d2 = (bl * bl - al * al) / 2.0L;
      m.m00 = static_cast<double>((bl * bl * L - 2.0L * bl * hl + d2) / (hl * hl));
      m.m11 = static_cast<double>((al * al * L - 2.0L * al * hl + d2) / (hl * hl));
      m.m01 = static_cast<double>(((al + bl) * hl - d2 - al * bl * L) / (hl * hl));
      break;
    }
    case QuadKind::Mass_1:
      m.m00 = h / 3.0;
      m.m01 = h / 6.0;
      m.m11 = h / 3.0;
      break;
    case QuadKind::Stiffness_1:
      m.m00 = 1.0 / h;
      m.m01 = -1.0 / h;
      m.m11 = 1.0 / h;
      break;
  }
  return m;
}

double element_quadrature(QuadKind kind, double a, double b, double c0, double c1) {
  LocalMatrix m = element_matrix(kind, a, b);
  if (kind == QuadKind::InverseR && a <= 0.0) {
    if (c0 != 0.0) return std::numeric_limits<double>::infinity();
    return m.m11 * c1 * c1;
  }
  return m.m00 * c0 * c0 + 2.0 * m.m01 * c0 * c1 + m.m11 * c1 * c1;
}

std::vector<double> lumped_weights(Geometry geometry, double R, int N) {
  const double h = R / N;
  std::vector<double> w(N + 1);
  if (geometry == Geometry::Slab) {
    std::fill(w.begin(), w.end(), h);
    w[0] = w[N] = h / 2.0;
  } else {
    for (int j = 1; j < N; ++j) w[j] = h * (h * j);
    w[0] = h * h / 6.0;
    w[N] = h * (h * (N - 1) + 2.0 * R) / 6.0;
  }
  return w;
}

double profile_l2_norm(const DiscreteProfile& p) {
  const QuadKind kind = p.geometry() == Geometry::Slab ? QuadKind::Mass_1 : QuadKind::Mass_r;
  double total = 0.0;
  for (int e = 0; e < p.N(); ++e) {
    LocalMatrix m = element_matrix(kind, p.node(e), p.node(e + 1));
    for (int k = 1; k <= p.K(); k += 2) {
      const cplx c0 = p.at(k, e), c1 = p.at(k, e + 1);
      total += 2.0 * (m.m00 * std::norm(c0) + 2.0 * m.m01 * (c0 * std::conj(c1)).real() + m.m11 * std::norm(c1));
    }
  }
  return std::sqrt(std::max(total, 0.0));
}

}  // namespace breather
