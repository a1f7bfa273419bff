// SPDX-License-Identifier: Apache-2.0
#include "breather/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "breather/bessel.hpp"
#include "breather/error.hpp"
#include "breather/parallel.hpp"

namespace breather {

namespace {

using Mat2 = std::array<double, 4>;  // row-major
using Vec2 = std::array<double, 2>;
constexpr double kInf = std::numeric_limits<double>::infinity();

Mat2 mul(const Mat2& A, const Mat2& B) {
  return {A[0] * B[0] + A[1] * B[2], A[0] * B[1] + A[1] * B[3], A[2] * B[0] + A[3] * B[2],
          A[2] * B[1] + A[3] * B[3]};
}

Vec2 mv(const Mat2& A, const Vec2& v) { return {A[0] * v[0] + A[1] * v[1], A[2] * v[0] + A[3] * v[1]}; }

Mat2 bessel_basis(double s, double x) {
  const double z = s * x;
  BesselJY v = bessel_jy(z);
  return {v.j1, v.y1, s * (v.j0 - v.j1 / z), s * (v.y0 - v.y1 / z)};
}

// Cell layers as offsets from the cell start: a on [0, θP/2), b on [θP/2, P-θP/2), a on [P-θP/2, P).
struct Layer {
  double lo, hi;
  double s;
};

std::array<Layer, 3> periodic_layers(int k, const PeriodicStep& per, const DerivedCoefficients& dc) {
  const double P = per.P.value, th = per.theta.value;
  const double sa = k * dc.omega * std::sqrt(dc.alpha.value);
  const double sb = k * dc.omega * std::sqrt(dc.beta.value);
  return {Layer{0.0, th * P / 2.0, sa}, Layer{th * P / 2.0, P - th * P / 2.0, sb}, Layer{P - th * P / 2.0, P, sa}};
}

double normalized_sup(const ExteriorSolution& ext, double a, double b) {
  double sup = 0.0;
  const int n = 256;
  for (int i = 0; i <= n; ++i) {
    double r = a + (b - a) * i / n;
    if (i == n) r = std::nextafter(b, a);
    sup = std::max(sup, std::fabs(ext.value(r)));
  }
  return sup;
}

// Normalization, norms and exclusion flag shared by all four cases.
FundamentalSolutionEntry finish(int k, double omega, ExteriorSolution& ext, double first_cell_end,
                                const FundsolOptions& opt) {
  FundamentalSolutionEntry e;
  e.k = k;
  const double phi = ext.segments.front().phi0, dphi = ext.segments.front().dphi0;
  const double scale = std::max(std::fabs(phi), std::fabs(dphi) / (k * omega));
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw Error(ErrorKind::DomainError, "degenerate fundamental solution for k = " + std::to_string(k));
  ext.scale(1.0 / scale);
  e.value_at_R = ext.segments.front().phi0;
  e.deriv_at_R = ext.segments.front().dphi0;
  double l2sq = 0.0;
  for (const auto& seg : ext.segments) l2sq += segment_l2(ext.geometry, seg, seg.r1);
  if (ext.floquet) l2sq /= (1.0 - ext.multiplier * ext.multiplier);
  e.l2_norm = std::sqrt(l2sq);
  e.sup_first_cell = normalized_sup(ext, ext.segments.front().r0, first_cell_end);
  e.excluded = std::fabs(e.value_at_R) < opt.tau_excl * e.sup_first_cell || opt.forced_exclusions.count(k) > 0;
  e.q = e.value_at_R != 0.0 ? e.deriv_at_R / e.value_at_R : std::numeric_limits<double>::quiet_NaN();
  e.tail_norm = e.value_at_R != 0.0 ? e.l2_norm / std::fabs(e.value_at_R) : kInf;
  return e;
}

void check_k(int k) {
  if (k < 1 || k % 2 == 0) throw Error(ErrorKind::InvalidArgument, "k must be a positive odd integer");
}

}  // namespace

std::array<double, 4> propagation_matrix(Geometry geometry, bool oscillatory, double s, double r_to,
                                         double r_from) {
  const double h = r_to - r_from;
  if (geometry == Geometry::Slab) {
    if (oscillatory) {
      const double c = std::cos(s * h), sn = std::sin(s * h);
      return {c, sn / s, -s * sn, c};
    }
    const double c = std::cosh(s * h), sn = std::sinh(s * h);
    return {c, sn / s, s * sn, c};
  }
  if (oscillatory) {
    const Mat2 Bt = bessel_basis(s, r_to), Bf = bessel_basis(s, r_from);
    const double det = Bf[0] * Bf[3] - Bf[1] * Bf[2];
    const Mat2 inv = {Bf[3] / det, -Bf[1] / det, -Bf[2] / det, Bf[0] / det};
    return mul(Bt, inv);
  }
  // I₁, K₁ basis in scaled form: I₁(z) = e^{z}Ĩ, K₁(z) = e^{-z}K̃
  const double zt = s * r_to, zf = s * r_from;
  const BesselIK t = bessel_ik_scaled(zt), f = bessel_ik_scaled(zf);
  const double It = t.i1, Kt = t.k1, dIt = t.i0 - t.i1 / zt, dKt = -t.k0 - t.k1 / zt;
  const double If = f.i1, Kf = f.k1, dIf = f.i0 - f.i1 / zf, dKf = -f.k0 - f.k1 / zf;
  const double ep = std::exp(zt - zf), em = std::exp(zf - zt);
  const double det = -1.0 / r_from;
  // B_t · adj(B_f) / det, adj(B_f) = [[s dK_f, -K_f], [-s dI_f, I_f]]
  return {(ep * It * s * dKf - em * Kt * s * dIf) / det, (-ep * It * Kf + em * Kt * If) / det,
          (s * ep * dIt * s * dKf - s * em * dKt * s * dIf) / det, (-s * ep * dIt * Kf + s * em * dKt * If) / det};
}

std::array<double, 2> ExteriorSolution::state(double r) const {
  if (segments.empty()) return {0.0, 0.0};
  const double R = segments.front().r0;
  if (r < R - 1e-12 * std::max(1.0, R)) throw Error(ErrorKind::DomainError, "exterior solution evaluated inside the core");
  r = std::max(r, R);
  double factor = 1.0;
  if (floquet) {
    const double n = std::floor((r - R) / period);
    if (n > 0) {
      r -= n * period;
      factor = std::pow(multiplier, n);
    }
    if (r >= R + period) r = std::nextafter(R + period, R);
  }
  // last segment with r0 <= r
  auto it = std::upper_bound(segments.begin(), segments.end(), r,
                             [](double x, const ExteriorSegment& s) { return x < s.r0; });
  const ExteriorSegment& seg = *(it - 1);
  if (r > seg.r1) return {0.0, 0.0};  // past the stored (negligible) part
  if (std::isinf(seg.r1) && !seg.oscillatory) {
    if (geometry == Geometry::Slab) {
      const double v = seg.phi0 * std::exp(-seg.s * (r - seg.r0));
      return {factor * v, -factor * seg.s * v};
    }
    const double z0 = seg.s * seg.r0, z = seg.s * r;
    const BesselIK a = bessel_ik_scaled(z0), b = bessel_ik_scaled(z);
    const double decay = std::exp(-(z - z0));
    const double v = seg.phi0 * b.k1 / a.k1 * decay;
    const double dv = seg.phi0 * seg.s * (-b.k0 - b.k1 / z) / a.k1 * decay;
    return {factor * v, factor * dv};
  }
  const Mat2 M = propagation_matrix(geometry, seg.oscillatory, seg.s, r, seg.r0);
  const Vec2 v = mv(M, {seg.phi0, seg.dphi0});
  return {factor * v[0], factor * v[1]};
}

double ExteriorSolution::value(double r) const { return state(r)[0]; }
double ExteriorSolution::deriv(double r) const { return state(r)[1]; }

void ExteriorSolution::scale(double factor) {
  for (auto& s : segments) {
    s.phi0 *= factor;
    s.dphi0 *= factor;
  }
}

double segment_l2(Geometry geometry, const ExteriorSegment& seg, double r_end) {
  const double s = seg.s, p0 = seg.phi0, d0 = seg.dphi0;
  if (std::isinf(r_end)) {
    if (seg.oscillatory) throw Error(ErrorKind::DomainError, "oscillatory segment has no finite L2 tail");
    if (geometry == Geometry::Slab) return p0 * p0 / (2.0 * s);
    const double z = s * seg.r0;
    const BesselIK v = bessel_ik_scaled(z);
    const double rho = v.k0 / v.k1;
    return 0.5 * seg.r0 * seg.r0 * p0 * p0 * (rho * rho + 2.0 * rho / z - 1.0);
  }
  const Mat2 M = propagation_matrix(geometry, seg.oscillatory, s, r_end, seg.r0);
  const Vec2 e = mv(M, {p0, d0});
  const double L = r_end - seg.r0;
  if (geometry == Geometry::Slab) {
    if (seg.oscillatory) {
      const double E = s * s * p0 * p0 + d0 * d0;
      return (E * L - (e[0] * e[1] - p0 * d0)) / (2.0 * s * s);
    }
    const double E = d0 * d0 - s * s * p0 * p0;
    return ((e[0] * e[1] - p0 * d0) - E * L) / (2.0 * s * s);
  }
  auto F = [&](double r, double phi, double dphi) {
    const double sr = s * r;
    if (seg.oscillatory) return 0.5 * r * r * (dphi * dphi / (s * s) + (1.0 - 1.0 / (sr * sr)) * phi * phi);
    return 0.5 * r * r * (phi * phi * (1.0 + 1.0 / (sr * sr)) - dphi * dphi / (s * s));
  };
  return F(r_end, e[0], e[1]) - F(seg.r0, p0, d0);
}

FundamentalSolutionEntry fundsol_step_slab(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                           ExteriorSolution* ext_out, const FundsolOptions& opt) {
  check_k(k);
  const auto& st = std::get<PureStep>(spec.potential.cladding);
  const double R = spec.R.value, rho = st.rho.value;
  const double ak = k * dc.omega * std::sqrt(dc.alpha.value);
  const double bk = k * dc.omega * std::sqrt(dc.beta.value);
  const double C = std::sqrt(1.0 + dc.beta.value / dc.alpha.value);
  const double vartheta = std::atan(std::sqrt(dc.alpha.value / dc.beta.value));
  // e^{-β_k(R+ρ)} removed
  const double phi = C * std::sin(ak * rho + vartheta);
  const double dphi = -ak * C * std::cos(ak * rho + vartheta);
  ExteriorSolution ext;
  ext.geometry = Geometry::Slab;
  ext.k = k;
  ext.segments.push_back({R, R + rho, ak, true, phi, dphi});
  ext.segments.push_back({R + rho, kInf, bk, false, 1.0, -bk});
  FundamentalSolutionEntry e = finish(k, dc.omega, ext, R + rho, opt);
  if (ext_out) *ext_out = std::move(ext);
  return e;
}

FundamentalSolutionEntry fundsol_step_radial(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                             ExteriorSolution* ext_out, const FundsolOptions& opt) {
  check_k(k);
  const auto& st = std::get<PureStep>(spec.potential.cladding);
  const double R = spec.R.value, r1 = R + st.rho.value;
  const double ak = k * dc.omega * std::sqrt(dc.alpha.value);
  const double bk = k * dc.omega * std::sqrt(dc.beta.value);
  // A J₁(α_k r₁) + B Y₁(α_k r₁) = K₁(β_k r₁), α_k(A J₁' + B Y₁') = β_k K₁'; scaled by e^{β_k r₁}
  const Mat2 B = bessel_basis(ak, r1);
  const double det = B[0] * B[3] - B[1] * B[2];
  const double n1 = std::hypot(B[0], B[1]), n2 = std::hypot(B[2], B[3]);
  if (std::fabs(det) < 1e-14 * n1 * n2)
    throw Error(ErrorKind::MatchingSingular, "matching matrix singular for k = " + std::to_string(k));
  const double z1 = bk * r1;
  const BesselIK t = bessel_ik_scaled(z1);
  const Vec2 tail = {t.k1, bk * (-t.k0 - t.k1 / z1)};
  const Vec2 atR = mv(propagation_matrix(Geometry::Cylindrical, true, ak, R, r1), tail);
  ExteriorSolution ext;
  ext.geometry = Geometry::Cylindrical;
  ext.k = k;
  ext.segments.push_back({R, r1, ak, true, atR[0], atR[1]});
  ext.segments.push_back({r1, kInf, bk, false, tail[0], tail[1]});
  FundamentalSolutionEntry e = finish(k, dc.omega, ext, r1, opt);
  if (ext_out) *ext_out = std::move(ext);
  return e;
}

std::array<double, 4> slab_period_transfer(int k, const ProblemSpec& spec, const DerivedCoefficients& dc) {
  const auto& per = std::get<PeriodicStep>(spec.potential.cladding);
  const double R = spec.R.value;
  Mat2 F = {1.0, 0.0, 0.0, 1.0};
  for (const Layer& L : periodic_layers(k, per, dc))
    F = mul(propagation_matrix(Geometry::Slab, true, L.s, R + L.hi, R + L.lo), F);
  return F;
}

FundamentalSolutionEntry fundsol_periodic_slab(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                               ExteriorSolution* ext_out, const FundsolOptions& opt) {
  check_k(k);
  const auto& per = std::get<PeriodicStep>(spec.potential.cladding);
  const double R = spec.R.value, P = per.P.value;
  const Mat2 F = slab_period_transfer(k, spec, dc);
  const double tr = F[0] + F[3], det = F[0] * F[3] - F[1] * F[2];
  const double disc = tr * tr - 4.0 * det;
  if (!(disc > 0.0))
    throw Error(ErrorKind::NoDecayingMultiplier, "Floquet multipliers on the unit circle for k = " + std::to_string(k));
  const double big = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
  const double small = det / big;
  if (!(std::fabs(small) < 1.0))
    throw Error(ErrorKind::NoDecayingMultiplier, "no multiplier with modulus < 1 for k = " + std::to_string(k));
  Vec2 v1 = {F[1], small - F[0]}, v2 = {small - F[3], F[2]};
  Vec2 v = std::hypot(v1[0], v1[1]) >= std::hypot(v2[0], v2[1]) ? v1 : v2;
  if (std::hypot(v[0], v[1]) < 1e-14 * (std::fabs(F[0]) + std::fabs(F[3])))
    v = std::fabs(F[0] - small) < std::fabs(F[3] - small) ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  ExteriorSolution ext;
  ext.geometry = Geometry::Slab;
  ext.k = k;
  ext.floquet = true;
  ext.period = P;
  ext.multiplier = small;
  Vec2 state = v;
  for (const Layer& L : periodic_layers(k, per, dc)) {
    ext.segments.push_back({R + L.lo, R + L.hi, L.s, true, state[0], state[1]});
    state = mv(propagation_matrix(Geometry::Slab, true, L.s, R + L.hi, R + L.lo), state);
  }
  FundamentalSolutionEntry e = finish(k, dc.omega, ext, R + P, opt);
  e.multiplier = small;
  e.other_multiplier = big;
  if (ext_out) *ext_out = std::move(ext);
  return e;
}

FundamentalSolutionEntry fundsol_periodic_radial(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                                 ExteriorSolution* ext_out, const FundsolOptions& opt) {
  check_k(k);
  const auto& per = std::get<PeriodicStep>(spec.potential.cladding);
  const double R = spec.R.value, P = per.P.value;
  const double wk = k * dc.omega;
  const auto layers = periodic_layers(k, per, dc);

  // backward map of one cell in the rescaled variables S_k(r) = √r diag(1, 1/(ωk))
  auto cell_backward = [&](int n) {
    const double c0 = R + n * P;
    Mat2 M = {1.0, 0.0, 0.0, 1.0};
    for (const Layer& L : layers)
      M = mul(M, propagation_matrix(Geometry::Cylindrical, true, L.s, c0 + L.lo, c0 + L.hi));
    const double g = std::sqrt(c0 / (c0 + P));
    return Mat2{g * M[0], g * M[1] * wk, g * M[2] / wk, g * M[3]};
  };

  // Π_n C_n^S collapses to rank one; its column space is the decaying direction at R.
  Mat2 prod = {1.0, 0.0, 0.0, 1.0};
  Vec2 dir_prev = {0.0, 0.0};
  int n_conv = -1;
  for (int n = 0; n < opt.n_max; ++n) {
    prod = mul(prod, cell_backward(n));
    double mx = 0.0;
    for (double x : prod) mx = std::max(mx, std::fabs(x));
    for (double& x : prod) x /= mx;
    const double c0n = std::hypot(prod[0], prod[2]), c1n = std::hypot(prod[1], prod[3]);
    Vec2 d = c0n >= c1n ? Vec2{prod[0] / c0n, prod[2] / c0n} : Vec2{prod[1] / c1n, prod[3] / c1n};
    if (d[0] * dir_prev[0] + d[1] * dir_prev[1] < 0.0) d = {-d[0], -d[1]};
    const double det = prod[0] * prod[3] - prod[1] * prod[2];
    const double fro2 = prod[0] * prod[0] + prod[1] * prod[1] + prod[2] * prod[2] + prod[3] * prod[3];
    const double smax2 = 0.5 * (fro2 + std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * det * det)));
    const double ratio = std::fabs(det) / smax2;
    const double step = std::hypot(d[0] - dir_prev[0], d[1] - dir_prev[1]);
    dir_prev = d;
    if (n > 0 && step < opt.product_tol && ratio < opt.product_tol) {
      n_conv = n + 1;
      break;
    }
  }
  if (n_conv < 0)
    throw Error(ErrorKind::ProductDiverged, "cell product did not converge within n_max for k = " + std::to_string(k));

  // Backward propagation from far out reproduces the decaying solution stably at every interface.
  const int n_far = n_conv + 16;
  std::vector<ExteriorSegment> rev;
  rev.reserve(3 * n_far);
  Vec2 v = {1.0 / std::sqrt(R + n_far * P), 0.0};
  for (int n = n_far - 1; n >= 0; --n) {
    const double c0 = R + n * P;
    for (int l = 2; l >= 0; --l) {
      const Layer& L = layers[l];
      v = mv(propagation_matrix(Geometry::Cylindrical, true, L.s, c0 + L.lo, c0 + L.hi), v);
      rev.push_back({c0 + L.lo, c0 + L.hi, L.s, true, v[0], v[1]});
      if (std::fabs(v[0]) + std::fabs(v[1]) > 1e200) {
        for (auto& s : rev) {
          s.phi0 *= 1e-200;
          s.dphi0 *= 1e-200;
        }
        v = {v[0] * 1e-200, v[1] * 1e-200};
      }
    }
  }
  std::reverse(rev.begin(), rev.end());
  // keep the part that matters for norms and reconstruction
  const auto amp = [&](const ExteriorSegment& s) { return std::sqrt(s.r0) * std::hypot(s.phi0, s.dphi0 / wk); };
  const double amp0 = amp(rev.front());
  std::size_t keep = rev.size();
  for (std::size_t i = 0; i < rev.size(); ++i) {
    if (rev[i].r0 > R + 8.0 * P && amp(rev[i]) < 1e-18 * amp0) {
      keep = i;
      break;
    }
  }
  rev.resize(keep);

  ExteriorSolution ext;
  ext.geometry = Geometry::Cylindrical;
  ext.k = k;
  ext.segments = std::move(rev);
  FundamentalSolutionEntry e = finish(k, dc.omega, ext, R + P, opt);
  e.cells_used = n_conv;
  if (ext_out) *ext_out = std::move(ext);
  return e;
}

FundamentalSolutionEntry fundsol(int k, const ProblemSpec& spec, const DerivedCoefficients& dc,
                                 ExteriorSolution* ext, const FundsolOptions& opt) {
  const bool periodic = spec.potential.periodic();
  if (spec.geometry == Geometry::Cylindrical)
    return periodic ? fundsol_periodic_radial(k, spec, dc, ext, opt) : fundsol_step_radial(k, spec, dc, ext, opt);
  return periodic ? fundsol_periodic_slab(k, spec, dc, ext, opt) : fundsol_step_slab(k, spec, dc, ext, opt);
}

double a6_threshold(Geometry geometry, double lambda, int k, double R) {
  const double z = lambda * k * R;
  if (geometry == Geometry::Slab) return lambda * k * std::tanh(z);
  const BesselIK v = bessel_ik_scaled(z);
  return lambda * k * (v.i0 / v.i1 - 1.0 / z);
}

AssumptionAudit audit_assumptions(const std::vector<FundamentalSolutionEntry>& entries, Geometry geometry,
                                  const DerivedCoefficients& dc, double R, int K) {
  AssumptionAudit a;
  if (entries.empty()) return a;
  const std::size_t n = entries.size();
  const std::size_t lo = (3 * n) / 4;
  a.window_lo = entries[lo].k;
  a.window_hi = entries.back().k;
  a.a5_lower = kInf;
  a.a6_prime = -kInf;
  for (std::size_t i = lo; i < n; ++i) {
    const auto& e = entries[i];
    a.a5_lower = std::min(a.a5_lower, std::fabs(e.value_at_R) / e.l2_norm);
    a.a6_prime = std::max(a.a6_prime, e.excluded ? -kInf : e.q / e.k);
  }
  for (const auto& e : entries) {
    a.a5_upper = std::max(a.a5_upper, std::fabs(e.deriv_at_R) / (e.k * e.l2_norm));
    if (e.k <= K && !e.excluded && e.q > a6_threshold(geometry, dc.lambda, e.k, R)) a.a6_witnesses.push_back(e.k);
  }
  a.a6_prime_threshold = dc.lambda;
  a.a6_prime_holds = a.a6_prime > dc.lambda;
  return a;
}

const FundamentalSolutionEntry& FundamentalSolutionTable::at(int k) const {
  k = std::abs(k);
  const int idx = (k - 1) / 2;
  if (k % 2 == 0 || idx >= static_cast<int>(entries.size()))
    throw Error(ErrorKind::IndexOutOfRange, "no fundamental solution stored for k = " + std::to_string(k));
  return entries[idx];
}

const ExteriorSolution& FundamentalSolutionTable::exterior(int k) const {
  k = std::abs(k);
  const int idx = (k - 1) / 2;
  if (k % 2 == 0 || idx >= static_cast<int>(exteriors.size()))
    throw Error(ErrorKind::IndexOutOfRange, "no exterior solution stored for k = " + std::to_string(k));
  return exteriors[idx];
}

FundamentalSolutionTable build_table(const ProblemSpec& spec, const DerivedCoefficients& dc, int K_audit,
                                     const FundsolOptions& opt) {
  FundamentalSolutionTable tab;
  tab.geometry = spec.geometry;
  tab.K = spec.disc.K;
  tab.K_audit = K_audit > 0 ? K_audit : 4 * spec.disc.K + (4 * spec.disc.K % 2 == 0 ? 1 : 0);
  if (tab.K_audit < tab.K) tab.K_audit = tab.K;
  if (tab.K_audit % 2 == 0) ++tab.K_audit;
  tab.R = spec.R.value;
  const int n = (tab.K_audit + 1) / 2;
  tab.entries.resize(n);
  tab.exteriors.resize(n);
  parallel_for(n, [&](int i) { tab.entries[i] = fundsol(2 * i + 1, spec, dc, &tab.exteriors[i], opt); });
  tab.audit = audit_assumptions(tab.entries, spec.geometry, dc, tab.R, tab.K);
  return tab;
}

}  // namespace breather
