// SPDX-License-Identifier: Apache-2.0
#include "breather/bessel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "breather/error.hpp"

namespace breather {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
constexpr double kJYSeriesMax = 2.0;
constexpr double kJYAsymptoticMin = 25.0;
constexpr double kIKAsymptoticMin = 30.0;
constexpr double kKSeriesMax = 2.0;

// Hankel-type asymptotic sums. Returns Σ s_k a_k(ν)/x^k with a_k(ν) = Π(4ν²-(2j-1)²)/(k!8^k),
// optimally truncated. sign_pattern: 0 -> all +, 1 -> alternating (-1)^k.
double asym_series(int nu, double x, bool alternating) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, prev = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    double t = alternating && (k % 2) ? -term : term;
    if (std::fabs(term) > prev) break;
    sum += t;
    prev = std::fabs(term);
    if (prev < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// P and Q for the oscillatory asymptotics.
void hankel_pq(int nu, double x, double& P, double& Q) {
  const double mu = 4.0 * nu * nu;
  double a = 1.0, prev = 1.0;
  P = 1.0;
  Q = 0.0;
  for (int k = 1; k < 200; ++k) {
    a *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * x);
    if (std::fabs(a) > prev) break;
    prev = std::fabs(a);
    // k even: (-1)^{k/2} into P; k odd: (-1)^{(k-1)/2} into Q
    if (k % 2 == 0) {
      P += ((k / 2) % 2 ? -a : a);
    } else {
      Q += (((k - 1) / 2) % 2 ? -a : a);
    }
    if (prev < 1e-18) break;
  }
}

BesselJY jy_asymptotic(double x) {
  double P0, Q0, P1, Q1;
  hankel_pq(0, x, P0, Q0);
  hankel_pq(1, x, P1, Q1);
  const double s = std::sin(x), c = std::cos(x);
  const double r2 = std::numbers::sqrt2 / 2.0;
  const double amp = std::sqrt(2.0 / (kPi * x));
  // χ₀ = x - π/4, χ₁ = x - 3π/4
  const double c0 = (c + s) * r2, s0 = (s - c) * r2;
  const double c1 = (s - c) * r2, s1 = -(s + c) * r2;
  BesselJY out;
  out.j0 = amp * (P0 * c0 - Q0 * s0);
  out.y0 = amp * (P0 * s0 + Q0 * c0);
  out.j1 = amp * (P1 * c1 - Q1 * s1);
  out.y1 = amp * (P1 * s1 + Q1 * c1);
  return out;
}

BesselJY jy_series(double x) {
  // power series with digamma sums for Y
  const long double q = -(long double)x * x / 4.0L;
  long double t0 = 1.0L, t1 = 1.0L;  // (q)^k/(k!)^2 and (q)^k/(k!(k+1)!)
  long double j0 = 0, j1 = 0, sy0 = 0, sy1 = 0;
  long double H = 0.0L;  // harmonic number H_k
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      t0 *= q / ((long double)k * k);
      t1 *= q / ((long double)k * (k + 1));
      H += 1.0L / k;
    }
    j0 += t0;
    j1 += t1;
    // ψ(k+1) = -γ + H_k ; ψ(k+2) = -γ + H_{k+1}
    sy0 += t0 * H;
    long double psi_sum = -2.0L * kEulerGamma + 2.0L * H + 1.0L / (k + 1);
    sy1 += t1 * psi_sum;
    if (std::fabs((double)t0) < 1e-22 && std::fabs((double)t1) < 1e-22) break;
  }
  const long double half = x / 2.0L;
  j1 *= half;
  const long double L = std::log(half);
  BesselJY out;
  out.j0 = (double)j0;
  out.j1 = (double)j1;
  // Y0 = (2/π)(ln(x/2)+γ)J0 - (2/π) Σ H_k (-x²/4)^k/(k!)²
  out.y0 = (double)((2.0L / kPi) * ((L + kEulerGamma) * j0 - sy0));
  // Y1 = -2/(πx) + (2/π)ln(x/2)J1 - (1/π)(x/2)Σ(ψ(k+1)+ψ(k+2))(-x²/4)^k/(k!(k+1)!)
  out.y1 = (double)(-2.0L / (kPi * x) + (2.0L / kPi) * L * j1 - half / kPi * sy1);
  return out;
}

BesselJY jy_miller(double x) {
  int N = static_cast<int>(x + 30.0 + 12.0 * std::cbrt(x));
  if (N % 2) ++N;
  std::vector<long double> J(N + 2, 0.0L);
  J[N + 1] = 0.0L;
  J[N] = 1e-30L;
  const long double xl = x;
  for (int n = N; n >= 1; --n) {
    J[n - 1] = (2.0L * n / xl) * J[n] - J[n + 1];
    if (std::fabs(J[n - 1]) > 1e300L) {
      for (int m = n - 1; m <= N + 1; ++m) J[m] *= 1e-300L;
    }
  }
  long double norm = J[0];
  for (int k = 2; k <= N; k += 2) norm += 2.0L * J[k];
  for (auto& v : J) v /= norm;
  long double s0 = 0.0L, s1 = 0.0L;
  for (int k = 1; 2 * k + 1 <= N + 1; ++k) {
    long double sg = (k % 2) ? -1.0L : 1.0L;
    s0 += sg * J[2 * k] / k;
    s1 += sg * (J[2 * k - 1] - J[2 * k + 1]) / k;
  }
  const long double L = std::log(xl / 2.0L) + kEulerGamma;
  BesselJY out;
  out.j0 = (double)J[0];
  out.j1 = (double)J[1];
  out.y0 = (double)((2.0L / kPi) * (L * J[0] - 2.0L * s0));
  out.y1 = (double)((2.0L / kPi) * (-J[0] / xl + L * J[1] + s1));
  return out;
}

// scaled I0, I1 by power series (x <= kIKAsymptoticMin)
void i_series_scaled(double x, double& i0e, double& i1e) {
  const long double q = (long double)x * x / 4.0L;
  long double t0 = 1.0L, t1 = 1.0L, s0 = 0.0L, s1 = 0.0L;
  for (int k = 0; k < 500; ++k) {
    if (k > 0) {
      t0 *= q / ((long double)k * k);
      t1 *= q / ((long double)k * (k + 1));
    }
    s0 += t0;
    s1 += t1;
    if (k > 2 && t0 < 1e-21L * s0 && t1 < 1e-21L * s1) break;
  }
  const long double e = std::exp(-(long double)x);
  i0e = (double)(s0 * e);
  i1e = (double)(s1 * (x / 2.0L) * e);
}

// unscaled K0, K1 by series (x <= kKSeriesMax); needs unscaled I0, I1
void k_series(double x, double& k0, double& k1) {
  const long double q = (long double)x * x / 4.0L;
  long double t0 = 1.0L, t1 = 1.0L, s0 = 0.0L, s1 = 0.0L, i0 = 0.0L, i1 = 0.0L;
  long double H = 0.0L;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      t0 *= q / ((long double)k * k);
      t1 *= q / ((long double)k * (k + 1));
      H += 1.0L / k;
    }
    i0 += t0;
    i1 += t1;
    s0 += t0 * H;
    s1 += t1 * (-2.0L * kEulerGamma + 2.0L * H + 1.0L / (k + 1));
    if (k > 2 && t0 < 1e-22L && t1 < 1e-22L) break;
  }
  const long double half = x / 2.0L;
  i1 *= half;
  const long double L = std::log(half);
  k0 = (double)(-(L + kEulerGamma) * i0 + s0);
  k1 = (double)(1.0L / x + L * i1 - half / 2.0L * s1);
}

// e^{x}K_ν(x) = ∫₀^∞ e^{-x(cosh t - 1)} cosh(νt) dt by the trapezoid rule
void k_integral_scaled(double x, double& k0e, double& k1e) {
  const double h = 0.1;
  const double tmax = std::acosh(1.0 + 50.0 / x);
  long double s0 = 0.5L, s1 = 0.5L;
  for (int j = 1;; ++j) {
    double t = j * h;
    if (t > tmax) break;
    long double e = std::exp(-x * (std::cosh(t) - 1.0));
    s0 += e;
    s1 += e * std::cosh(t);
  }
  k0e = (double)(s0 * h);
  k1e = (double)(s1 * h);
}

void domain_check(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::DomainError, what);
}

}  // namespace

BesselJY bessel_jy(double x) {
  domain_check(x > 0.0 && std::isfinite(x), "bessel_jy needs finite x > 0");
  if (x <= kJYSeriesMax) return jy_series(x);
  if (x < kJYAsymptoticMin) return jy_miller(x);
  return jy_asymptotic(x);
}

BesselIK bessel_ik_scaled(double x) {
  domain_check(x > 0.0 && std::isfinite(x), "bessel_ik_scaled needs finite x > 0");
  BesselIK out;
  if (x <= kIKAsymptoticMin) {
    i_series_scaled(x, out.i0, out.i1);
  } else {
    const double a = 1.0 / std::sqrt(2.0 * kPi * x);
    out.i0 = a * asym_series(0, x, true);
    out.i1 = a * asym_series(1, x, true);
  }
  if (x <= kKSeriesMax) {
    double k0, k1;
    k_series(x, k0, k1);
    const double e = std::exp(x);
    out.k0 = k0 * e;
    out.k1 = k1 * e;
  } else if (x < kIKAsymptoticMin) {
    k_integral_scaled(x, out.k0, out.k1);
  } else {
    const double a = std::sqrt(kPi / (2.0 * x));
    out.k0 = a * asym_series(0, x, false);
    out.k1 = a * asym_series(1, x, false);
  }
  return out;
}

double bessel_j0(double x) {
  x = std::fabs(x);
  return x == 0.0 ? 1.0 : bessel_jy(x).j0;
}
double bessel_j1(double x) {
  if (x == 0.0) return 0.0;
  double v = bessel_jy(std::fabs(x)).j1;
  return x < 0 ? -v : v;
}
double bessel_y0(double x) { return bessel_jy(x).y0; }
double bessel_y1(double x) { return bessel_jy(x).y1; }

double bessel_i0e(double x) {
  x = std::fabs(x);
  return x == 0.0 ? 1.0 : bessel_ik_scaled(x).i0;
}
double bessel_i1e(double x) {
  if (x == 0.0) return 0.0;
  double v = bessel_ik_scaled(std::fabs(x)).i1;
  return x < 0 ? -v : v;
}
double bessel_i0(double x) { return bessel_i0e(x) * std::exp(std::fabs(x)); }
double bessel_i1(double x) { return bessel_i1e(x) * std::exp(std::fabs(x)); }
double bessel_k0e(double x) { return bessel_ik_scaled(x).k0; }
double bessel_k1e(double x) { return bessel_ik_scaled(x).k1; }
double bessel_k0(double x) { return bessel_k0e(x) * std::exp(-x); }
double bessel_k1(double x) { return bessel_k1e(x) * std::exp(-x); }

double eval_bessel(BesselKind b, double x) {
  domain_check(b.order == 0 || b.order == 1, "only orders 0 and 1 are supported");
  domain_check(std::isfinite(x), "non-finite argument");
  switch (b.family) {
    case BesselFamily::J:
      domain_check(x >= 0.0, "J needs x >= 0");
      return b.order ? bessel_j1(x) : bessel_j0(x);
    case BesselFamily::Y:
      domain_check(x > 0.0, "Y needs x > 0");
      return b.order ? bessel_y1(x) : bessel_y0(x);
    case BesselFamily::I:
      domain_check(x >= 0.0, "I needs x >= 0");
      if (b.scaled) return b.order ? bessel_i1e(x) : bessel_i0e(x);
      return b.order ? bessel_i1(x) : bessel_i0(x);
    case BesselFamily::K:
      domain_check(x > 0.0, "K needs x > 0");
      if (b.scaled) return b.order ? bessel_k1e(x) : bessel_k0e(x);
      return b.order ? bessel_k1(x) : bessel_k0(x);
  }
  return 0.0;
}

double eval_bessel_derivative(BesselKind b, double x) {
  domain_check(b.order == 0 || b.order == 1, "only orders 0 and 1 are supported");
  switch (b.family) {
    case BesselFamily::J: {
      domain_check(x >= 0.0, "J needs x >= 0");
      if (x == 0.0) return b.order ? 0.5 : 0.0;
      BesselJY v = bessel_jy(x);
      return b.order ? v.j0 - v.j1 / x : -v.j1;
    }
    case BesselFamily::Y: {
      domain_check(x > 0.0, "Y needs x > 0");
      BesselJY v = bessel_jy(x);
      return b.order ? v.y0 - v.y1 / x : -v.y1;
    }
    case BesselFamily::I: {
      domain_check(x >= 0.0, "I needs x >= 0");
      if (x == 0.0) return b.order ? 0.5 : 0.0;
      BesselIK v = bessel_ik_scaled(x);
      double d = b.order ? v.i0 - v.i1 / x : v.i1;
      return b.scaled ? d : d * std::exp(x);
    }
    case BesselFamily::K: {
      domain_check(x > 0.0, "K needs x > 0");
      BesselIK v = bessel_ik_scaled(x);
      double d = b.order ? -v.k0 - v.k1 / x : -v.k1;
      return b.scaled ? d : d * std::exp(-x);
    }
  }
  return 0.0;
}

}  // namespace breather
