// SPDX-License-Identifier: Apache-2.0
#include "breather/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "breather/error.hpp"
#include "breather/kernel.hpp"

namespace breather {

namespace {

// κ̂_n for even n in [0, 2K], or empty for the instantaneous nonlinearity.
std::vector<double> even_kernel_coeffs(const std::vector<double>& samples, int K) {
  if (samples.empty()) return {};
  std::vector<double> out(K + 1);
  for (int i = 0; i <= K; ++i) out[i] = kernel_fourier(samples, 2 * i).real();
  return out;
}

struct PointValues {
  double w = 0.0, wt = 0.0, wr = 0.0;
  double conv = 0.0;  // κ∗w_t², or w_t² when instantaneous
};

// w, w_t, w_r and (κ∗w_t²) at one time from mode values g_k, g_k' at one radius.
PointValues evaluate_point(const std::vector<cplx>& gk, const std::vector<cplx>& dgk, double omega, double t,
                           const std::vector<double>& khat_even) {
  PointValues pv;
  const int modes = static_cast<int>(gk.size());
  std::vector<cplx> ct(modes);  // coefficients of w_t for k > 0
  for (int i = 0; i < modes; ++i) {
    const int k = DiscreteProfile::mode_of(i);
    const cplx e = std::polar(1.0, omega * k * t);
    pv.w += 2.0 * (gk[i] * e).real();
    pv.wr += 2.0 * (dgk[i] * e).real();
    ct[i] = cplx(0.0, omega * k) * gk[i];
    pv.wt += 2.0 * (ct[i] * e).real();
  }
  if (!khat_even.empty()) {
    // (w_t²)^_n for even n >= 0 from the odd-mode coefficients c_{±k}
    auto coeff = [&](int k) -> cplx {
      if (k > 0) return ct[DiscreteProfile::mode_index(k)];
      return std::conj(ct[DiscreteProfile::mode_index(-k)]);
    };
    const int K = DiscreteProfile::mode_of(modes - 1);
    double conv = 0.0;
    for (int n = 0; n <= 2 * K; n += 2) {
      cplx s = 0.0;
      for (int k = -K; k <= K; k += 2) {
        const int l = n - k;
        if (l < -K || l > K) continue;
        s += coeff(k) * coeff(l);
      }
      const double kh = khat_even[n / 2];
      conv += (n == 0 ? 1.0 : 2.0) * kh * (s * std::polar(1.0, omega * n * t)).real();
    }
    pv.conv = conv;
  } else {
    pv.conv = pv.wt * pv.wt;
  }
  return pv;
}

double golden_min(const std::function<double(double)>& f, double lo, double hi, double* fmin) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  if (fmin) *fmin = f(x);
  return x;
}

struct CriticalMode {
  double mu = -std::numeric_limits<double>::infinity();
  int k = 0;
  std::vector<double> vec;  // nodal values, zero on pinned nodes
};

CriticalMode critical_mode(const EnergyFunctional& ef) {
  const Tridiagonal A = ef.stiffness_form(), Mf = ef.mass_form();
  const int n = ef.N() + 1;
  CriticalMode best;
  for (int k = 1; k <= ef.K(); k += 2) {
    if (!ef.active(k)) continue;
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (!ef.pinned(k, j)) idx.push_back(j);
    const int m = static_cast<int>(idx.size());
    if (m == 0) continue;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m), B = Eigen::MatrixXd::Zero(m, m);
    const double wk2 = ef.omega() * ef.omega() * k * k;
    for (int a = 0; a < m; ++a) {
      const int j = idx[a];
      L(a, a) = -A.diag[j];
      B(a, a) = wk2 * Mf.diag[j];
      if (a + 1 < m && idx[a + 1] == j + 1) {
        L(a, a + 1) = L(a + 1, a) = -A.off[j];
        B(a, a + 1) = B(a + 1, a) = wk2 * Mf.off[j];
      }
      if (j == ef.N() && !ef.excluded(k)) L(a, a) += ef.boundary_weight() * ef.boundary_ratio(k);
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(L, B);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::DomainError, "generalized eigensolver failed");
    const double mu = es.eigenvalues()(m - 1);
    if (mu > best.mu) {
      best.mu = mu;
      best.k = k;
      best.vec.assign(n, 0.0);
      const Eigen::VectorXd v = es.eigenvectors().col(m - 1);
      double vmax = v.cwiseAbs().maxCoeff();
      double sign = v(m - 1) < 0 ? -1.0 : 1.0;
      for (int a = 0; a < m; ++a) best.vec[idx[a]] = sign * v(a) / vmax;
    }
  }
  return best;
}

}  // namespace

std::array<double, 2> BreatherField::sample(int i, double tt) const {
  double wv = 0.0, wtv = 0.0;
  for (int k = 1; k <= K; k += 2) {
    const cplx e = std::polar(1.0, omega * k * tt);
    const cplx gv = mode(k, i);
    wv += 2.0 * (gv * e).real();
    wtv += 2.0 * (cplx(0.0, omega * k) * gv * e).real();
  }
  return {wv, wtv};
}

double MaterialProfile::V(double r) const {
  r = std::fabs(r);
  if (r < spec.R.value) return V_core;
  const double y = r - spec.R.value;
  if (const auto* per = std::get_if<PeriodicStep>(&spec.potential.cladding)) {
    const double P = per->P.value, half = 0.5 * per->theta.value * P;
    const double cell = y - P * std::floor(y / P);
    return (cell < half || cell >= P - half) ? -dc.alpha.value : -dc.beta.value;
  }
  const auto& st = std::get<PureStep>(spec.potential.cladding);
  return y < st.rho.value ? -dc.alpha.value : dc.beta.value;
}

double MaterialProfile::Gamma(double r) const { return std::fabs(r) < spec.R.value ? Gamma_core : 0.0; }

MaterialProfile material_profile(const ProblemSpec& spec, const DerivedCoefficients& dc) {
  MaterialProfile m;
  m.c = spec.c.value;
  m.V_core = dc.V_core;
  m.Gamma_core = dc.Gamma_core;
  m.spec = spec;
  m.dc = dc;
  return m;
}

double default_r_max(const ProblemSpec& spec, const DerivedCoefficients& dc) {
  const double R = spec.R.value;
  if (const auto* per = std::get_if<PeriodicStep>(&spec.potential.cladding)) {
    // per-cell amplitude decay √(β/α); enough cells for a 1e-6 energy tail, at least 4
    int cells = 4;
    const double ratio = dc.alpha.value / dc.beta.value;
    if (ratio > 1.0) cells = std::max(cells, static_cast<int>(std::ceil(6.0 * std::log(10.0) / std::log(ratio))));
    return R + cells * per->P.value;
  }
  const auto& st = std::get<PureStep>(spec.potential.cladding);
  return R + st.rho.value + 8.0 / (dc.omega * std::sqrt(dc.beta.value));
}

BreatherField extend_profile(const DiscreteProfile& u, const FundamentalSolutionTable& fs, const ProblemSpec& spec,
                             const DerivedCoefficients& dc, double r_max, int n_t, int periods,
                             const std::vector<double>& kernel_samples) {
  if (n_t < 2 || periods < 1) throw Error(ErrorKind::InvalidArgument, "need n_t >= 2 and periods >= 1");
  BreatherField f;
  f.geometry = u.geometry();
  f.R = u.R();
  f.K = u.K();
  f.T = spec.T.value;
  f.omega = dc.omega;
  f.r_max = r_max > 0.0 ? r_max : default_r_max(spec, dc);
  if (f.r_max < f.R) throw Error(ErrorKind::InvalidArgument, "r_max must be >= R");
  const int N = u.N();
  const double h = u.h();
  for (int j = 0; j <= N; ++j) f.r.push_back(u.node(j));
  const int n_ext = static_cast<int>(std::ceil((f.r_max - f.R) / h - 1e-9));
  for (int i = 1; i <= n_ext; ++i) f.r.push_back(f.R + i * h);
  f.r_max = f.r.back();
  const int nr = f.num_r();
  for (int m = 0; m < n_t * periods; ++m) f.t.push_back(f.T * m / n_t);

  const int modes = u.num_modes();
  f.alpha.assign(modes, 0.0);
  f.excluded.assign(modes, 0);
  f.g.assign(static_cast<std::size_t>(modes) * nr, 0.0);
  f.dg.assign(static_cast<std::size_t>(modes) * nr, 0.0);
  for (int k = 1; k <= f.K; k += 2) {
    const int idx = DiscreteProfile::mode_index(k);
    const auto& e = fs.at(k);
    const ExteriorSolution& ext = fs.exterior(k);
    const double slope_R = (u.at(k, N) - u.at(k, N - 1)).real() / h;
    const double slope_R_im = (u.at(k, N) - u.at(k, N - 1)).imag() / h;
    cplx alpha;
    if (e.excluded) {
      if (std::fabs(e.deriv_at_R) < 1e-10)
        throw Error(ErrorKind::ExclusionDerivativeUnstable,
                    "|φ_k'(R)| < 1e-10 for excluded k = " + std::to_string(k));
      alpha = cplx(slope_R, slope_R_im) / e.deriv_at_R;
      f.excluded[idx] = 1;
    } else {
      alpha = u.at(k, N) / e.value_at_R;
      f.continuity_mismatch = std::max(f.continuity_mismatch, std::abs(u.at(k, N) - alpha * ext.value(f.R)));
    }
    f.alpha[idx] = alpha;
    cplx* g = &f.g[static_cast<std::size_t>(idx) * nr];
    cplx* dg = &f.dg[static_cast<std::size_t>(idx) * nr];
    for (int j = 0; j <= N; ++j) {
      g[j] = u.at(k, j);
      const int e0 = std::max(j, 1);
      dg[j] = (u.at(k, e0) - u.at(k, e0 - 1)) / h;
    }
    for (int i = N + 1; i < nr; ++i) {
      const auto s = ext.state(f.r[i]);
      g[i] = alpha * s[0];
      dg[i] = alpha * s[1];
    }
  }

  const MaterialProfile mat = material_profile(spec, dc);
  const std::vector<double> khat = even_kernel_coeffs(kernel_samples, f.K);
  const int nt = f.num_t();
  f.w.assign(static_cast<std::size_t>(nr) * nt, 0.0);
  f.w_t = f.w;
  f.intensity = f.w;
  f.energy_density = f.w;
  const double c = spec.c.value;
  std::vector<cplx> gk(modes), dgk(modes);
  for (int i = 0; i < nr; ++i) {
    for (int k = 1; k <= f.K; k += 2) {
      gk[DiscreteProfile::mode_index(k)] = f.mode(k, i);
      dgk[DiscreteProfile::mode_index(k)] = f.mode_deriv(k, i);
    }
    const double r = f.r[i];
    for (int m = 0; m < nt; ++m) {
      const PointValues pv = evaluate_point(gk, dgk, f.omega, f.t[m], khat);
      const std::size_t at = static_cast<std::size_t>(i) * nt + m;
      f.w[at] = pv.w;
      f.w_t[at] = pv.wt;
      f.intensity[at] = pv.wt * pv.wt;
      double grad_term = pv.wr * pv.wr;
      if (f.geometry == Geometry::Cylindrical) grad_term = r > 0.0 ? std::pow(pv.w / r + pv.wr, 2) : 4.0 * pv.wr * pv.wr;
      f.energy_density[at] = (-mat.V(r) + 2.0 / (c * c)) * pv.wt * pv.wt - mat.Gamma(r) * pv.conv * pv.wt * pv.wt + grad_term;
    }
  }
  return f;
}

std::vector<double> el_residual(const DiscreteProfile& u, const EnergyFunctional& ef) {
  std::vector<double> out(u.num_modes(), 0.0);
  const double norm = profile_l2_norm(u);
  if (norm == 0.0) return out;
  const std::vector<double> g = ef.eval_gradient(u);
  for (int k = 1; k <= u.K(); k += 2) {
    double best = 0.0;
    for (int j = 0; j <= u.N(); ++j) {
      const std::size_t i = 2 * (static_cast<std::size_t>(DiscreteProfile::mode_index(k)) * (u.N() + 1) + j);
      best = std::max(best, std::hypot(g[i], g[i + 1]));
    }
    out[DiscreteProfile::mode_index(k)] = best / norm;
  }
  return out;
}

MonotonicityReport f_monotonicity(const std::vector<double>& f) {
  MonotonicityReport rep;
  rep.f = f;
  double fmax = 0.0;
  for (double v : f) fmax = std::max(fmax, v);
  for (std::size_t j = 1; j < f.size(); ++j) rep.max_violation = std::max(rep.max_violation, f[j - 1] - f[j]);
  rep.monotone = rep.max_violation <= 1e-8 * fmax;
  return rep;
}

MonotonicityReport f_monotonicity(const DiscreteProfile& u, double omega) {
  std::vector<double> f(u.N() + 1, 0.0);
  for (int j = 0; j <= u.N(); ++j)
    for (int k = 1; k <= u.K(); k += 2) f[j] += omega * omega * k * k * std::norm(u.at(k, j));
  return f_monotonicity(f);
}

SpectrumClass classify_spectrum(const EnergyReport& report, const std::vector<cplx>& khat_full) {
  SpectrumClass s;
  const auto& pm = report.per_mode_energy;
  double total = 0.0;
  for (double v : pm) total += v;
  s.fractions.assign(pm.size(), 0.0);
  if (!(total > 0.0)) return s;
  int best = 0;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    s.fractions[i] = pm[i] / total;
    if (s.fractions[i] > 1e-6) ++s.modes_above;
    if (s.fractions[i] > s.fractions[best]) best = static_cast<int>(i);
  }
  s.k = DiscreteProfile::mode_of(best);
  s.monochromatic = s.fractions[best] >= 1.0 - 1e-6;
  if (!khat_full.empty()) {
    const std::size_t M = khat_full.size();
    const std::size_t n = static_cast<std::size_t>(2 * s.k) % M;
    s.kernel_compatible = std::abs(khat_full[n]) <= 1e-12 * std::max(1.0, std::abs(khat_full[0]));
  }
  return s;
}

std::string to_string(const SpectrumClass& s) {
  std::ostringstream os;
  if (s.monochromatic)
    os << "Monochromatic(" << s.k << ")";
  else
    os << "Polychromatic";
  return os.str();
}

SegmentEnergy segment_energy(const BreatherField& field, const MaterialProfile& mat, const std::vector<double>& t0,
                             const std::vector<double>& kernel_samples, int window_samples) {
  if (window_samples < 1) throw Error(ErrorKind::InvalidArgument, "window_samples must be positive");
  SegmentEnergy out;
  out.t0 = t0;
  const double c = mat.c;
  const bool radial = field.geometry == Geometry::Cylindrical;
  const double pref = radial ? 2.0 * std::numbers::pi * c : 2.0 * c;
  const std::vector<double> khat = even_kernel_coeffs(kernel_samples, field.K);
  const int nr = field.num_r();
  const int modes = static_cast<int>(field.alpha.size());

  double tail_start = field.r_max;
  if (const auto* per = std::get_if<PeriodicStep>(&mat.spec.potential.cladding))
    tail_start = field.r_max - per->P.value;
  else
    tail_start = field.r_max - 1.0 / (mat.dc.omega * std::sqrt(mat.dc.beta.value));

  // midpoint values per radial interval
  std::vector<cplx> gm(static_cast<std::size_t>(modes) * (nr - 1)), dm(gm.size());
  for (int i = 0; i + 1 < nr; ++i) {
    const double hh = field.r[i + 1] - field.r[i];
    for (int k = 1; k <= field.K; k += 2) {
      const std::size_t at = static_cast<std::size_t>(DiscreteProfile::mode_index(k)) * (nr - 1) + i;
      gm[at] = 0.5 * (field.mode(k, i) + field.mode(k, i + 1));
      dm[at] = (field.mode(k, i + 1) - field.mode(k, i)) / hh;
    }
  }

  std::vector<cplx> gk(modes), dgk(modes);
  for (std::size_t s = 0; s < t0.size(); ++s) {
    const double dt = 1.0 / (c * window_samples);
    double total = 0.0, tail = 0.0;
    for (int i = 0; i + 1 < nr; ++i) {
      const double hh = field.r[i + 1] - field.r[i];
      const double r = 0.5 * (field.r[i] + field.r[i + 1]);
      for (int m = 0; m < modes; ++m) {
        gk[m] = gm[static_cast<std::size_t>(m) * (nr - 1) + i];
        dgk[m] = dm[static_cast<std::size_t>(m) * (nr - 1) + i];
      }
      const double Vr = mat.V(r), Gr = mat.Gamma(r);
      double acc = 0.0;
      for (int q = 0; q < window_samples; ++q) {
        const double t = t0[s] - 1.0 / c + (q + 0.5) * dt;
        const PointValues pv = evaluate_point(gk, dgk, field.omega, t, khat);
        const double nl = pv.conv * pv.wt * pv.wt;
        const double grad_term = radial ? std::pow(pv.w / r + pv.wr, 2) : pv.wr * pv.wr;
        acc += ((-Vr + 2.0 / (c * c)) * pv.wt * pv.wt - Gr * nl + grad_term) * dt;
      }
      const double contrib = acc * hh * (radial ? r : 1.0);
      total += contrib;
      if (r >= tail_start) tail += contrib;
    }
    const double v = pref * total;
    out.value.push_back(v);
    if (s == 0) out.tail_fraction = total != 0.0 ? std::fabs(tail / total) : 0.0;
  }
  if (!out.value.empty()) {
    out.max = *std::max_element(out.value.begin(), out.value.end());
    out.min = *std::min_element(out.value.begin(), out.value.end());
  }
  out.truncation_warning = out.tail_fraction > 1e-6;
  return out;
}

double locate_d_star(const ProblemSpec& spec, int* critical_k) {
  const DerivedCoefficients dc = derive_coefficients(spec);
  const FundamentalSolutionTable fs = build_table(spec, dc, spec.disc.K);
  EnergyFunctional ef(spec, dc, fs);
  const CriticalMode cm = critical_mode(ef);
  if (critical_k) *critical_k = cm.k;
  return dc.c2m1.value - cm.mu;
}

std::vector<double> default_sweep_values(const ProblemSpec& spec, double d_star, int count) {
  const double c = spec.c.value;
  const double span = 1.0 / (c * c) - 1.0 - d_star;
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) out.push_back(d_star + span * std::ldexp(1.0, -i));
  return out;
}

SweepResult sweep_d(const ProblemSpec& spec, const std::vector<double>& d_values, const MinimizeOptions& opt) {
  SweepResult out;
  out.d_star = locate_d_star(spec, &out.critical_k);
  const DerivedCoefficients dc0 = derive_coefficients(spec);
  const FundamentalSolutionTable fs = build_table(spec, dc0, spec.disc.K);
  const std::vector<double> kernel = kernel_samples_for(spec);
  std::vector<double> xs, ys;
  for (double d : d_values) {
    BifurcationPoint pt;
    pt.d = d;
    ProblemSpec s = spec;
    s.potential.d = Number(d);
    // only the core potential moves with d; it must stay positive
    DerivedCoefficients dc = dc0;
    dc.delta = dc0.c2m1 - s.potential.d;
    if (!(dc.delta.value > 0.0)) {
      pt.E = std::numeric_limits<double>::quiet_NaN();
      out.points.push_back(pt);
      continue;
    }
    dc.V_core = dc.delta.value;
    dc.lambda = dc.omega * std::sqrt(dc.delta.value);
    EnergyFunctional ef(s, dc, fs, kernel, opt.subspace_k0);
    const CriticalMode cm = critical_mode(ef);
    DiscreteProfile shape = ef.zero_profile();
    for (int j = 0; j <= shape.N(); ++j) shape.at(cm.k, j) = cm.vec[j];
    auto ray = [&](double eps) {
      DiscreteProfile p = shape;
      for (auto& c : p.coeffs()) c *= eps;
      return p;
    };
    const double eps = golden_min([&](double e) { return ef.eval_energy(ray(e)).E_total; }, 1e-4, 10.0, nullptr);
    MinimizeResult res = minimize(ray(eps), ef, opt);
    pt.E = res.report.E_total;
    pt.norm = profile_l2_norm(res.profile);
    pt.converged = res.converged;
    out.points.push_back(pt);
    if (pt.E < -1e-10 && d > out.d_star) {
      xs.push_back(std::log(d - out.d_star));
      ys.push_back(std::log(pt.norm));
    }
  }
  out.fitted = static_cast<int>(xs.size());
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i] / n;
      my += ys[i] / n;
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    out.exponent = sxy / sxx;
    if (xs.size() > 2) {
      double sse = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + out.exponent * (xs[i] - mx));
        sse += e * e;
      }
      out.exponent_stderr = std::sqrt(sse / (n - 2.0) / sxx);
    }
  }
  return out;
}

}  // namespace breather
