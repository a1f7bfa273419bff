// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>

#include "breather/error.hpp"
#include "breather/kernel.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace breather;
using fixtures::error_kind;

namespace {

KernelSpec lorentz() {
  KernelSpec k;
  k.form = KernelSpec::Form::PeriodizedLorentz;
  return k;
}

}  // namespace

TEST_CASE("constant kernel") {
  const auto s = periodize(KernelSpec{}, 4.0, 136);
  for (double v : s) CHECK(v == 1.0);
  CHECK(kernel_fourier(s, 0) == std::complex<double>(1.0, 0.0));
  for (int k = 1; k <= 68; ++k) CHECK(std::abs(kernel_fourier(s, k)) <= 1e-15);
  const auto rep = check_admissible(s, 16);
  CHECK(rep.admissible());
  // both sufficient conditions hold; max <= 2 min is tested first
  CHECK(rep.convexity_route == ConvexityRoute::MaxLe2Min);
  CHECK(rep.fourier_coeffs[2 * 16] == doctest::Approx(1.0));
}

TEST_CASE("periodized Lorentz extremes") {
  const auto s = periodize(lorentz(), 1.0, 256);
  CHECK(s[0] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s[128] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(*std::min_element(s.begin(), s.end()) == doctest::Approx(0.25));
  CHECK(*std::max_element(s.begin(), s.end()) == doctest::Approx(0.5));
  const auto rep = check_admissible(s, 16);
  CHECK(rep.convexity_route == ConvexityRoute::MaxLe2Min);
  CHECK(rep.admissible());
}

TEST_CASE("periodized Lorentz second coefficient against direct quadrature") {
  // Oracle: 4096-point rectangle rule of the closed form, summed directly.
  const int M = 4096;
  double ref = 0.0;
  for (int j = 0; j < M; ++j) {
    const double t = static_cast<double>(j) / M, s = 2.0 * t - 1.0;
    ref += std::cos(4.0 * std::numbers::pi * t) / (2.0 * (1.0 + s * s));
  }
  ref /= M;
  const auto samples = periodize(lorentz(), 1.0, M);
  const auto c2 = kernel_fourier(samples, 2);
  CHECK(c2.real() == doctest::Approx(ref).epsilon(1e-12));
  CHECK(std::fabs(c2.imag()) <= 1e-14);
  CHECK(std::abs(kernel_fourier(samples, -2) - c2) <= 1e-14);
  // the kink at t = 0 makes coarser grids converge at second order
  const double c256 = kernel_fourier(periodize(lorentz(), 1.0, 256), 2).real();
  const double c512 = kernel_fourier(periodize(lorentz(), 1.0, 512), 2).real();
  CHECK(std::fabs(c256 - ref) / std::fabs(c512 - ref) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("kernel that breaks both sufficient conditions") {
  const int M = 136;
  std::vector<double> s(M);
  for (int m = 0; m < M; ++m) s[m] = 1.0 - 0.9 * std::cos(4.0 * std::numbers::pi * m / M);
  const auto rep = check_admissible(s, 16);
  CHECK(rep.even_positive);
  CHECK(rep.convexity_route == ConvexityRoute::Failed);
  CHECK_FALSE(rep.admissible());
}

TEST_CASE("sampled kernel errors") {
  KernelSpec k;
  k.form = KernelSpec::Form::Sampled;
  k.samples.assign(8, 1.0);
  k.samples[3] = -0.1;
  CHECK(error_kind([&] { periodize(k, 1.0, 8); }) == ErrorKind::NonPositive);
  CHECK(error_kind([&] { kernel_fourier(std::vector<double>(8, 1.0), 5); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("step series collapses to the constant kernel") {
  KernelSpec k;
  k.form = KernelSpec::Form::StepSeries;
  k.weights = {0.125, 0.0625, 0.0625};
  for (double v : periodize(k, 4.0, 64)) CHECK(v == doctest::Approx(1.0));
  k.weights = {0.5};
  CHECK(error_kind([&] { periodize(k, 4.0, 64); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("quartic form lower bound") {
  const int M = 136, K = 16;
  for (const auto& samples : {periodize(KernelSpec{}, 4.0, M), periodize(lorentz(), 4.0, M)}) {
    const auto khat = kernel_fourier_all(samples);
    const double kmin = *std::min_element(samples.begin(), samples.end());
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> v(M, 0.0);
      for (int k = 1; k <= K; k += 2) {
        const double a = nd(rng), b = nd(rng);
        for (int m = 0; m < M; ++m) {
          const double th = 2.0 * std::numbers::pi * k * m / M;
          v[m] += a * std::cos(th) + b * std::sin(th);
        }
      }
      double l2 = 0.0;
      for (double x : v) l2 += x * x / M;
      CHECK(quartic_form(khat, v) >= kmin * l2 * l2 * (1.0 - 1e-12));
    }
  }
}
