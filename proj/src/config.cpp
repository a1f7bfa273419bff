// SPDX-License-Identifier: Apache-2.0
#include "breather/config.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "breather/error.hpp"

namespace breather {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SignViolation: return "SignViolation";
    case ErrorKind::NotOddRational: return "NotOddRational";
    case ErrorKind::PeriodMismatch: return "PeriodMismatch";
    case ErrorKind::XiOutOfRange: return "XiOutOfRange";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::MatchingSingular: return "MatchingSingular";
    case ErrorKind::ProductDiverged: return "ProductDiverged";
    case ErrorKind::NoDecayingMultiplier: return "NoDecayingMultiplier";
    case ErrorKind::ExcludedViolation: return "ExcludedViolation";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::DegenerateElement: return "DegenerateElement";
    case ErrorKind::ExclusionDerivativeUnstable: return "ExclusionDerivativeUnstable";
    case ErrorKind::MissingArtifact: return "MissingArtifact";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

bool less(const Number& x, const Number& y) {
  if (x.exact && y.exact) return *x.exact < *y.exact;
  return x.value < y.value;
}

Number sqrt_number(const Number& x) {
  if (x.exact) {
    if (auto r = x.exact->sqrt()) return Number(*r);
  }
  return Number(std::sqrt(x.value));
}

void require(bool ok, const char* inequality) {
  if (!ok) throw Error(ErrorKind::SignViolation, std::string("violated ") + inequality);
}

}  // namespace

bool same_value(const Number& x, const Number& y) {
  if (x.exact && y.exact) return *x.exact == *y.exact;
  return std::fabs(x.value - y.value) <= 1e-12 * std::max(std::fabs(x.value), std::fabs(y.value));
}

double ProblemSpec::omega() const { return 2.0 * std::numbers::pi / T.value; }

void ProblemSpec::check_ranges() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  if (!(c.value > 0.0 && c.value < 1.0)) fail("c must lie in (0,1)");
  if (!(T.value > 0.0)) fail("T must be positive");
  if (!(R.value > 0.0)) fail("R must be positive");
  if (!(gamma.value > 0.0)) fail("gamma must be positive");
  if (disc.K < 1) fail("K must be >= 1");
  if (disc.N < 2) fail("N must be >= 2");
  int M = disc.samples();
  if (M <= 4 * disc.K) fail("M must exceed 4K");
  if (M % 2 != 0) fail("M must be even");
}

DerivedCoefficients derive_coefficients(const ProblemSpec& spec) {
  spec.check_ranges();
  const Number one(Rational(1));
  const Number zero(Rational(0));
  DerivedCoefficients dc;
  dc.c2m1 = one / (spec.c * spec.c) - one;
  const Number& d = spec.potential.d;
  dc.delta = dc.c2m1 - d;

  if (const auto* per = std::get_if<PeriodicStep>(&spec.potential.cladding)) {
    require(less(zero, d), "0<d<c⁻²−1 (d > 0)");
    require(less(d, dc.c2m1), "0<d<c⁻²−1");
    require(less(dc.c2m1, per->a), "c⁻²−1<min{a,b,(a+d)/2} (a)");
    require(less(dc.c2m1, per->b), "c⁻²−1<min{a,b,(a+d)/2} (b)");
    require(less(dc.c2m1, (per->a + d) / Number(Rational(2))), "c⁻²−1<min{a,b,(a+d)/2} ((a+d)/2)");
    if (!(per->theta.value > 0.0 && per->theta.value < 1.0))
      throw Error(ErrorKind::InvalidArgument, "theta must lie in (0,1)");
    if (!(per->P.value > 0.0)) throw Error(ErrorKind::InvalidArgument, "P must be positive");
    dc.alpha = per->a - dc.c2m1;
    dc.beta = per->b - dc.c2m1;
  } else {
    const auto& st = std::get<PureStep>(spec.potential.cladding);
    const Number& lo = less(st.b, d) ? st.b : d;
    const Number& hi = less(st.b, d) ? d : st.b;
    require(less(zero, lo), "0<min{b,d}");
    require(less(hi, dc.c2m1), "max{b,d}<c⁻²−1");
    require(less(dc.c2m1, st.a), "c⁻²−1<a");
    if (!(st.rho.value > 0.0)) throw Error(ErrorKind::InvalidArgument, "rho must be positive");
    dc.alpha = st.a - dc.c2m1;
    dc.beta = dc.c2m1 - st.b;
  }
  require(dc.alpha.value > 0 && dc.beta.value > 0 && dc.delta.value > 0, "α, β, δ > 0");
  dc.V_core = dc.delta.value;
  dc.Gamma_core = spec.gamma.value;
  dc.omega = spec.omega();
  dc.lambda = dc.omega * std::sqrt(dc.delta.value);
  dc.delta_below_alpha = less(dc.delta, dc.alpha);
  return dc;
}

PeriodicValidation validate_periodic(const ProblemSpec& spec) {
  const auto* per = std::get_if<PeriodicStep>(&spec.potential.cladding);
  if (!per) throw Error(ErrorKind::InvalidArgument, "validate_periodic needs a periodic cladding");
  DerivedCoefficients dc = derive_coefficients(spec);
  const Number one(Rational(1));
  Number omt = one - per->theta;
  Number ratio_sq = dc.alpha * per->theta * per->theta / (dc.beta * omt * omt);

  PeriodicValidation out;
  std::optional<Rational> ratio;
  if (ratio_sq.exact) {
    ratio = ratio_sq.exact->sqrt();
    if (!ratio)
      throw Error(ErrorKind::NotOddRational,
                  "ratio² = " + ratio_sq.exact->str() + " is not the square of a rational");
  } else {
    ratio = Rational::from_double(std::sqrt(ratio_sq.value));
    if (!ratio) throw Error(ErrorKind::NotOddRational, "ratio is not a rational with denominator <= 1e6");
  }
  out.ratio = Number(*ratio);
  out.m = static_cast<int>(ratio->num());
  out.n = static_cast<int>(ratio->den());
  if (out.m % 2 == 0 || out.n % 2 == 0)
    throw Error(ErrorKind::NotOddRational, "ratio " + ratio->str() + " is not odd/odd");
  out.T_required = Number(Rational(4)) * sqrt_number(dc.alpha) * per->theta * per->P / Number(Rational(out.m));
  if (!same_value(out.T_required, spec.T))
    throw Error(ErrorKind::PeriodMismatch,
                "T = " + spec.T.str() + " but the cell arithmetic requires T = " + out.T_required.str());
  return out;
}

double dist_plus(double p, double offset, double spacing) {
  double j = std::ceil((p - offset) / spacing);
  double e = offset + j * spacing;
  if (e < p) e += spacing;
  return e - p;
}

StepValidation validate_step(const ProblemSpec& spec) {
  const auto* st = std::get_if<PureStep>(&spec.potential.cladding);
  if (!st) throw Error(ErrorKind::InvalidArgument, "validate_step needs a step cladding");
  DerivedCoefficients dc = derive_coefficients(spec);
  const double pi = std::numbers::pi;
  const double p = std::atan(std::sqrt(dc.alpha.value / dc.beta.value));
  const double bound = std::atan(std::sqrt(dc.alpha.value / dc.delta.value));

  auto t_required = [&](int m, int n) {
    return Number(Rational(4)) * sqrt_number(dc.alpha) * st->rho * Number(Rational(n, m));
  };
  auto xi_of = [&](int m, int n) { return dist_plus(p, m * pi / (2.0 * n), pi / n); };

  StepValidation out;
  out.xi_bound = bound;
  if (st->m && st->n) {
    int m = *st->m, n = *st->n;
    if (m < 1 || n < 1 || std::gcd(m, n) != 1)
      throw Error(ErrorKind::InvalidArgument, "(m,n) must be coprime positive integers");
    double xi = xi_of(m, n);
    if (!(xi > 0.0 && xi < bound))
      throw Error(ErrorKind::XiOutOfRange, "xi = " + std::to_string(xi) + " not in (0, " +
                                               std::to_string(bound) + ")");
    Number T = t_required(m, n);
    if (!same_value(T, spec.T))
      throw Error(ErrorKind::PeriodMismatch, "T = " + spec.T.str() + " but (m,n) requires T = " + T.str());
    out.m = m;
    out.n = n;
    out.xi = xi;
    out.T_required = T;
    out.matches.emplace_back(m, n);
    return out;
  }
  bool any_xi = false;
  for (int m = 1; m <= 64; ++m) {
    for (int n = 1; n <= 64; ++n) {
      if (std::gcd(m, n) != 1) continue;
      double xi = xi_of(m, n);
      if (!(xi > 0.0 && xi < bound)) continue;
      any_xi = true;
      Number T = t_required(m, n);
      if (!same_value(T, spec.T)) continue;
      if (out.matches.empty()) {
        out.m = m;
        out.n = n;
        out.xi = xi;
        out.T_required = T;
      }
      out.matches.emplace_back(m, n);
    }
  }
  if (out.matches.empty()) {
    if (!any_xi) throw Error(ErrorKind::XiOutOfRange, "no coprime (m,n) <= 64 satisfies the xi bound");
    throw Error(ErrorKind::PeriodMismatch, "no admissible (m,n) <= 64 reproduces T = " + spec.T.str());
  }
  return out;
}

}  // namespace breather
