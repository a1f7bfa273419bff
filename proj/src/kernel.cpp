// SPDX-License-Identifier: Apache-2.0
#include "breather/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "breather/error.hpp"

namespace breather {

const char* to_string(ConvexityRoute route) {
  switch (route) {
    case ConvexityRoute::MaxLe2Min: return "MaxLe2Min";
    case ConvexityRoute::NonnegativeFourier: return "NonnegativeFourier";
    case ConvexityRoute::SumDecomposition: return "SumDecomposition";
    case ConvexityRoute::Failed: return "Failed";
  }
  return "Failed";
}

std::vector<double> periodize(const KernelSpec& spec, double T, int M) {
  if (M < 2) throw Error(ErrorKind::InvalidArgument, "M must be >= 2");
  std::vector<double> k(M);
  switch (spec.form) {
    case KernelSpec::Form::ConstantOne:
      std::fill(k.begin(), k.end(), 1.0);
      break;
    case KernelSpec::Form::PeriodizedLorentz:
      // telescoped sum of κ̃(t) = t/(T⁴+4t⁴) over shifts by T
      for (int m = 0; m < M; ++m) {
        const double t = T * m / M;
        const double s = 2.0 * t - T;
        k[m] = 1.0 / (2.0 * T * (T * T + s * s));
      }
      break;
    case KernelSpec::Form::StepSeries: {
      double sum = 0.0;
      for (double a : spec.weights) {
        if (a < 0.0) throw Error(ErrorKind::NonPositive, "step-series weights must be >= 0");
        sum += a;
      }
      if (std::fabs(sum * T - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidArgument, "step-series weights must sum to 1/T");
      // κ(t) = T Σ_n α_n for every t in [0, T)
      std::fill(k.begin(), k.end(), T * sum);
      break;
    }
    case KernelSpec::Form::Sampled:
      if (static_cast<int>(spec.samples.size()) != M)
        throw Error(ErrorKind::InvalidArgument, "sampled kernel needs exactly M values");
      k = spec.samples;
      break;
    case KernelSpec::Form::DebyeContinuous:
      throw Error(ErrorKind::InvalidArgument,
                  "continuous Debye kernel periodizes to e^{-βt} on [0,T), which is not even; "
                  "use the discretized step-series variant");
  }
  for (double v : k)
    if (!(v > 0.0)) throw Error(ErrorKind::NonPositive, "kernel samples must be positive");
  return k;
}

std::complex<double> kernel_fourier(const std::vector<double>& samples, int k) {
  const int M = static_cast<int>(samples.size());
  if (std::abs(k) > M / 2) throw Error(ErrorKind::IndexOutOfRange, "|k| must not exceed M/2");
  std::complex<double> s = 0.0;
  const long kk = ((k % M) + M) % M;
  for (int m = 0; m < M; ++m) {
    const double th = -2.0 * std::numbers::pi * static_cast<double>((kk * m) % M) / M;
    s += samples[m] * std::complex<double>(std::cos(th), std::sin(th));
  }
  return s / static_cast<double>(M);
}

std::vector<double> kernel_fourier_all(const std::vector<double>& samples) {
  const int M = static_cast<int>(samples.size());
  std::vector<double> out(M / 2 + 1);
  for (int k = 0; k <= M / 2; ++k) out[k] = kernel_fourier(samples, k).real();
  return out;
}

namespace {

// Fourier coefficients of real samples for |k| <= M/2 by direct summation.
std::vector<std::complex<double>> dft(const std::vector<double>& v) {
  const int M = static_cast<int>(v.size());
  std::vector<std::complex<double>> out(M);
  for (int k = 0; k < M; ++k) {
    std::complex<double> s = 0.0;
    for (int m = 0; m < M; ++m) {
      const double th = -2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(k) * m) % M) / M;
      s += v[m] * std::complex<double>(std::cos(th), std::sin(th));
    }
    out[k] = s / static_cast<double>(M);
  }
  return out;
}

double khat_at(const std::vector<double>& khat, int M, int k) {
  int kk = ((k % M) + M) % M;
  if (kk > M / 2) kk = M - kk;
  return khat[kk];
}

// Σ_k κ̂_k (a)^_k conj((b)^_k) for real samples a, b
double bilinear(const std::vector<double>& khat, const std::vector<double>& a, const std::vector<double>& b) {
  const int M = static_cast<int>(a.size());
  auto A = dft(a), B = dft(b);
  double s = 0.0;
  for (int k = 0; k < M; ++k) s += khat_at(khat, M, k) * (A[k] * std::conj(B[k])).real();
  return s;
}

}  // namespace

double quartic_form(const std::vector<double>& khat, const std::vector<double>& v) {
  std::vector<double> v2(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) v2[i] = v[i] * v[i];
  return bilinear(khat, v2, v2);
}

KernelAdmissibilityReport check_admissible(const std::vector<double>& samples, int K, double alpha_holder,
                                           std::uint64_t seed) {
  const int M = static_cast<int>(samples.size());
  if (M < 2) throw Error(ErrorKind::InvalidArgument, "kernel needs at least two samples");
  KernelAdmissibilityReport rep;
  rep.K = K;
  rep.alpha_holder = alpha_holder;
  rep.min_val = *std::min_element(samples.begin(), samples.end());
  rep.max_val = *std::max_element(samples.begin(), samples.end());
  double asym = 0.0;
  for (int m = 0; m < M; ++m) asym = std::max(asym, std::fabs(samples[m] - samples[(M - m) % M]));
  rep.max_asymmetry = asym;
  rep.even_positive = rep.min_val > 0.0 && asym <= 1e-12 * rep.max_val;

  const std::vector<double> khat = kernel_fourier_all(samples);
  rep.fourier_coeffs.resize(4 * K + 1);
  for (int k = -2 * K; k <= 2 * K; ++k) rep.fourier_coeffs[k + 2 * K] = khat_at(khat, M, k);

  if (!rep.even_positive) {
    rep.convexity_route = ConvexityRoute::Failed;
  } else if (rep.max_val <= 2.0 * rep.min_val) {
    rep.convexity_route = ConvexityRoute::MaxLe2Min;
  } else if (std::all_of(khat.begin(), khat.end(), [&](double c) { return c >= -1e-10 * khat[0]; })) {
    rep.convexity_route = ConvexityRoute::NonnegativeFourier;
  } else {
    // κ = (κ_pos - C) + (κ_neg + C): κ_neg collects the negative Fourier modes, C makes
    // κ_neg + C satisfy max <= 2 min; the rest keeps nonnegative coefficients iff κ̂₀ >= C.
    std::vector<double> neg(M, 0.0);
    for (int m = 0; m < M; ++m) {
      for (int k = 1; k <= M / 2; ++k) {
        if (khat[k] >= 0.0) continue;
        const double mult = (k == M / 2) ? 1.0 : 2.0;
        neg[m] += mult * khat[k] * std::cos(2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(k) * m) % M) / M);
      }
    }
    const double nmax = *std::max_element(neg.begin(), neg.end());
    const double nmin = *std::min_element(neg.begin(), neg.end());
    const double C = nmax - 2.0 * nmin;
    rep.convexity_route = khat[0] >= C ? ConvexityRoute::SumDecomposition : ConvexityRoute::Failed;
  }

  // f''(v)[u,u] = 4∫(κ∗v²)u² + 8∫(κ∗uv)uv along random trigonometric directions
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 64; ++trial) {
    std::vector<double> cu(2 * K + 2), cv(2 * K + 2);
    for (auto& c : cu) c = nd(rng);
    for (auto& c : cv) c = nd(rng);
    std::vector<double> u(M, 0.0), v(M, 0.0);
    for (int m = 0; m < M; ++m) {
      for (int k = 0; k <= K; ++k) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>((static_cast<long>(k) * m) % M) / M;
        u[m] += cu[2 * k] * std::cos(th) + cu[2 * k + 1] * std::sin(th);
        v[m] += cv[2 * k] * std::cos(th) + cv[2 * k + 1] * std::sin(th);
      }
    }
    std::vector<double> v2(M), u2(M), uv(M);
    double nu = 0.0, nv = 0.0;
    for (int m = 0; m < M; ++m) {
      v2[m] = v[m] * v[m];
      u2[m] = u[m] * u[m];
      uv[m] = u[m] * v[m];
      nu += u2[m] / M;
      nv += v2[m] / M;
    }
    const double f2 = 4.0 * bilinear(khat, v2, u2) + 8.0 * bilinear(khat, uv, uv);
    worst = std::min(worst, f2 / (nu * nv));
  }
  rep.hessian_min_ratio = worst;
  rep.hessian_spot_ok = worst >= -1e-10 * std::max(1.0, rep.max_val);
  return rep;
}

}  // namespace breather
