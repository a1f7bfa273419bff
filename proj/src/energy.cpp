// SPDX-License-Identifier: Apache-2.0
#include "breather/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "breather/bessel.hpp"
#include "breather/error.hpp"
#include "breather/kernel.hpp"
#include "breather/parallel.hpp"

namespace breather {

namespace {

constexpr double kTraceTol = 1e-12;

std::size_t re_index(int k, int j, int N) {
  return 2 * (static_cast<std::size_t>(DiscreteProfile::mode_index(k)) * (N + 1) + j);
}

}  // namespace

std::vector<double> kernel_samples_for(const ProblemSpec& spec) {
  if (spec.nonlinearity != Nonlinearity::Averaged) return {};
  return periodize(spec.kernel, spec.T.value, spec.disc.samples());
}

EnergyFunctional::EnergyFunctional(const ProblemSpec& spec, const DerivedCoefficients& dc,
                                   const FundamentalSolutionTable& fs, std::vector<double> kernel_samples,
                                   int subspace_k0)
    : geometry_(spec.geometry),
      R_(spec.R.value),
      K_(spec.disc.K),
      N_(spec.disc.N),
      k0_(subspace_k0),
      Gamma_(dc.Gamma_core),
      V_(dc.V_core),
      omega_(dc.omega),
      boundary_weight_(spec.geometry == Geometry::Slab ? 1.0 : spec.R.value),
      grid_(spec.T.value, spec.disc.samples(), spec.disc.K) {
  if (k0_ < 1 || k0_ % 2 == 0) throw Error(ErrorKind::InvalidArgument, "subspace k0 must be odd and >= 1");
  if (fs.geometry != geometry_ || fs.K < K_ || std::fabs(fs.R - R_) > 1e-12 * R_)
    throw Error(ErrorKind::InvalidArgument, "fundamental-solution table does not match the problem");
  if (!kernel_samples.empty()) {
    if (static_cast<int>(kernel_samples.size()) != grid_.M())
      throw Error(ErrorKind::InvalidArgument, "kernel sample count != M");
    khat_ = grid_.analyze(kernel_samples);
  }

  const int modes = (K_ + 1) / 2;
  q_.assign(modes, 0.0);
  excluded_.assign(modes, 0);
  for (int k = 1; k <= K_; k += 2) {
    const auto& e = fs.at(k);
    const int i = DiscreteProfile::mode_index(k);
    excluded_[i] = e.excluded;
    q_[i] = e.excluded ? 0.0 : e.q;
  }

  const double h = R_ / N_;
  stiff_.resize(N_);
  mass_.resize(N_);
  for (int e = 0; e < N_; ++e) {
    const double a = h * e, b = h * (e + 1);
    if (geometry_ == Geometry::Slab) {
      stiff_[e] = element_matrix(QuadKind::Stiffness_1, a, b);
      mass_[e] = element_matrix(QuadKind::Mass_1, a, b);
    } else {
      LocalMatrix s = element_matrix(QuadKind::Stiffness_r, a, b);
      LocalMatrix w = element_matrix(QuadKind::InverseR, a, b);
      if (e == 0) w.m00 = 0.0;  // f(0) = 0 is pinned
      stiff_[e] = {s.m00 + w.m00, s.m01 + w.m01, s.m11 + w.m11};
      mass_[e] = element_matrix(QuadKind::Mass_r, a, b);
    }
  }
  lumped_ = lumped_weights(geometry_, R_, N_);

  mask_.assign(static_cast<std::size_t>(modes) * (N_ + 1) * 2, 1.0);
  for (int k = 1; k <= K_; k += 2)
    for (int j = 0; j <= N_; ++j)
      if (pinned(k, j)) mask_[re_index(k, j, N_)] = mask_[re_index(k, j, N_) + 1] = 0.0;
}

bool EnergyFunctional::active(int k) const { return k % k0_ == 0 && (k / k0_) % 2 == 1; }

bool EnergyFunctional::pinned(int k, int j) const {
  if (!active(k)) return true;
  if (j == 0 && geometry_ == Geometry::Cylindrical) return true;
  return j == N_ && excluded_[DiscreteProfile::mode_index(k)];
}

namespace {

Tridiagonal assemble(const std::vector<LocalMatrix>& elems) {
  const std::size_t n = elems.size() + 1;
  Tridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t e = 0; e < elems.size(); ++e) {
    t.diag[e] += elems[e].m00;
    t.diag[e + 1] += elems[e].m11;
    t.off[e] = elems[e].m01;
  }
  return t;
}

}  // namespace

Tridiagonal EnergyFunctional::stiffness_form() const { return assemble(stiff_); }
Tridiagonal EnergyFunctional::mass_form() const { return assemble(mass_); }

DiscreteProfile EnergyFunctional::zero_profile() const { return DiscreteProfile(geometry_, R_, K_, N_); }

void EnergyFunctional::check_conforming(const DiscreteProfile& p) const {
  if (p.geometry() != geometry_ || p.K() != K_ || p.N() != N_ || std::fabs(p.R() - R_) > 1e-12 * R_)
    throw Error(ErrorKind::InvalidArgument, "profile does not conform to the mesh and mode range");
  for (int k = 1; k <= K_; k += 2) {
    if (geometry_ == Geometry::Cylindrical && std::abs(p.at(k, 0)) > kTraceTol)
      throw Error(ErrorKind::InvalidArgument, "radial profile must vanish at r = 0 (k = " + std::to_string(k) + ")");
    if (excluded_[DiscreteProfile::mode_index(k)] && std::abs(p.at(k, N_)) > kTraceTol)
      throw Error(ErrorKind::ExcludedViolation,
                  "trace of excluded mode k = " + std::to_string(k) + " is " + std::to_string(std::abs(p.at(k, N_))));
  }
}

double EnergyFunctional::quadratic(const DiscreteProfile& p, std::vector<double>* grad) const {
  double total = 0.0;
  for (int k = 1; k <= K_; k += 2) {
    const double vk = V_ * omega_ * omega_ * k * k;
    double part = 0.0;
    for (int e = 0; e < N_; ++e) {
      const LocalMatrix& s = stiff_[e];
      const LocalMatrix& m = mass_[e];
      const double a00 = s.m00 + vk * m.m00, a01 = s.m01 + vk * m.m01, a11 = s.m11 + vk * m.m11;
      const cplx c0 = p.at(k, e), c1 = p.at(k, e + 1);
      part += a00 * std::norm(c0) + 2.0 * a01 * (c0 * std::conj(c1)).real() + a11 * std::norm(c1);
      if (grad) {
        const std::size_t i0 = re_index(k, e, N_), i1 = re_index(k, e + 1, N_);
        (*grad)[i0] += 2.0 * (a00 * c0.real() + a01 * c1.real());
        (*grad)[i0 + 1] += 2.0 * (a00 * c0.imag() + a01 * c1.imag());
        (*grad)[i1] += 2.0 * (a01 * c0.real() + a11 * c1.real());
        (*grad)[i1 + 1] += 2.0 * (a01 * c0.imag() + a11 * c1.imag());
      }
    }
    total += part;
  }
  return total;
}

double EnergyFunctional::quartic(const DiscreteProfile& p, std::vector<double>* grad) const {
  const int M = grid_.M();
  std::vector<double> rho(N_ + 1, 0.0);
  parallel_for(N_ + 1, [&](int j) {
    bool any = false;
    for (int k = 1; k <= K_ && !any; k += 2) any = p.at(k, j) != cplx(0.0, 0.0);
    if (!any) return;
    const std::vector<double> ut = synthesize_time_derivative(p, grid_, j);
    std::vector<double> G(M);
    double r = 0.0;
    if (khat_.empty()) {
      for (int m = 0; m < M; ++m) {
        const double u2 = ut[m] * ut[m];
        G[m] = u2 * ut[m];
        r += u2 * u2;
      }
    } else {
      std::vector<double> sq(M);
      for (int m = 0; m < M; ++m) sq[m] = ut[m] * ut[m];
      std::vector<cplx> spec = grid_.analyze(sq);
      for (int m = 0; m < M; ++m) spec[m] *= khat_[m];
      const std::vector<double> conv = grid_.synthesize(spec);
      for (int m = 0; m < M; ++m) {
        G[m] = conv[m] * ut[m];
        r += conv[m] * sq[m];
      }
    }
    rho[j] = r / M;
    if (!grad) return;
    const double c = 0.25 * Gamma_ * lumped_[j];
    for (int k = 1; k <= K_; k += 2) {
      double ss = 0.0, sc = 0.0;
      for (int m = 0; m < M; ++m) {
        ss += G[m] * grid_.sin_tab(k, m);
        sc += G[m] * grid_.cos_tab(k, m);
      }
      const double f = -8.0 * omega_ * k / M;
      const std::size_t i = re_index(k, j, N_);
      (*grad)[i] += c * f * ss;
      (*grad)[i + 1] += c * f * sc;
    }
  });
  double total = 0.0;
  for (int j = 0; j <= N_; ++j) total += lumped_[j] * rho[j];
  return 0.25 * Gamma_ * total;
}

double EnergyFunctional::boundary(const DiscreteProfile& p, std::vector<double>* grad) const {
  double total = 0.0;
  for (int k = 1; k <= K_; k += 2) {
    const int i = DiscreteProfile::mode_index(k);
    if (excluded_[i]) continue;
    const cplx f = p.at(k, N_);
    total += boundary_weight_ * q_[i] * std::norm(f);
    if (grad) {
      const std::size_t g = re_index(k, N_, N_);
      (*grad)[g] += 2.0 * boundary_weight_ * q_[i] * f.real();
      (*grad)[g + 1] += 2.0 * boundary_weight_ * q_[i] * f.imag();
    }
  }
  return total;
}

double EnergyFunctional::quadratic_part(const DiscreteProfile& p) const {
  check_conforming(p);
  return quadratic(p, nullptr);
}

double EnergyFunctional::quartic_part(const DiscreteProfile& p) const {
  check_conforming(p);
  return quartic(p, nullptr);
}

double EnergyFunctional::boundary_part(const DiscreteProfile& p) const {
  check_conforming(p);
  return boundary(p, nullptr);
}

EnergyReport EnergyFunctional::eval_energy(const DiscreteProfile& p) const {
  check_conforming(p);
  EnergyReport rep;
  rep.E_I_quadratic = quadratic(p, nullptr);
  rep.E_N = quartic(p, nullptr);
  rep.E_B = boundary(p, nullptr);
  rep.E_total = rep.E_I_quadratic + rep.E_N - rep.E_B;
  rep.per_mode_energy.assign((K_ + 1) / 2, 0.0);
  for (int k = 1; k <= K_; k += 2) {
    double m = 0.0;
    for (int e = 0; e < N_; ++e) {
      const LocalMatrix& w = mass_[e];
      const cplx c0 = p.at(k, e), c1 = p.at(k, e + 1);
      m += w.m00 * std::norm(c0) + 2.0 * w.m01 * (c0 * std::conj(c1)).real() + w.m11 * std::norm(c1);
    }
    rep.per_mode_energy[DiscreteProfile::mode_index(k)] = 2.0 * omega_ * omega_ * k * k * m;
  }
  return rep;
}

std::vector<double> EnergyFunctional::eval_gradient(const DiscreteProfile& p, EnergyReport* report) const {
  check_conforming(p);
  std::vector<double> g(p.real_size(), 0.0);
  std::vector<double> gb(p.real_size(), 0.0);
  const double q = quadratic(p, &g);
  const double n = quartic(p, &g);
  const double b = boundary(p, &gb);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = (g[i] - gb[i]) * mask_[i];
    norm2 += g[i] * g[i];
  }
  if (report) {
    *report = eval_energy(p);
    report->E_I_quadratic = q;
    report->E_N = n;
    report->E_B = b;
    report->E_total = q + n - b;
    report->grad_norm = std::sqrt(norm2);
  }
  return g;
}

std::vector<double> EnergyFunctional::precondition(const std::vector<double>& g) const {
  if (g.size() != mask_.size()) throw Error(ErrorKind::InvalidArgument, "vector size mismatch");
  std::vector<double> out(g.size());
  const int n = N_ + 1;
  std::vector<double> diag(n), off(n), cp(n), d(n);
  for (int k = 1; k <= K_; k += 2) {
    const double vk = V_ * omega_ * omega_ * k * k;
    std::fill(diag.begin(), diag.end(), 0.0);
    std::fill(off.begin(), off.end(), 0.0);  // off[j] couples j and j+1
    for (int e = 0; e < N_; ++e) {
      diag[e] += stiff_[e].m00 + vk * mass_[e].m00;
      diag[e + 1] += stiff_[e].m11 + vk * mass_[e].m11;
      off[e] = stiff_[e].m01 + vk * mass_[e].m01;
    }
    for (int j = 0; j < n; ++j) {
      if (!pinned(k, j)) continue;
      diag[j] = 1.0;
      if (j > 0) off[j - 1] = 0.0;
      if (j < N_) off[j] = 0.0;
    }
    for (int part = 0; part < 2; ++part) {
      for (int j = 0; j < n; ++j) d[j] = g[re_index(k, j, N_) + part];
      // Thomas algorithm on 2·A (the Hessian of the interior quadratic form)
      cp[0] = 2.0 * off[0] / (2.0 * diag[0]);
      d[0] /= 2.0 * diag[0];
      for (int j = 1; j < n; ++j) {
        const double den = 2.0 * diag[j] - 2.0 * off[j - 1] * cp[j - 1];
        cp[j] = j < N_ ? 2.0 * off[j] / den : 0.0;
        d[j] = (d[j] - 2.0 * off[j - 1] * d[j - 1]) / den;
      }
      for (int j = n - 2; j >= 0; --j) d[j] -= cp[j] * d[j + 1];
      for (int j = 0; j < n; ++j) {
        const std::size_t i = re_index(k, j, N_) + part;
        out[i] = d[j] * mask_[i];
      }
    }
  }
  return out;
}

DiscreteProfile ansatz_shape(const EnergyFunctional& ef, const DerivedCoefficients& dc, int k0) {
  if (k0 < 1 || k0 % 2 == 0 || k0 > ef.K())
    throw Error(ErrorKind::IndexOutOfRange, "ansatz mode k0 must be odd and <= K");
  DiscreteProfile p = ef.zero_profile();
  const double s = dc.lambda * k0;
  const double R = ef.R();
  // scaled forms keep large arguments finite; the profile is normalized to 1 at R
  for (int j = 0; j <= ef.N(); ++j) {
    const double x = p.node(j);
    double v;
    if (ef.geometry() == Geometry::Slab)
      v = (std::exp(s * (x - R)) + std::exp(-s * (x + R))) / (1.0 + std::exp(-2.0 * s * R));
    else
      v = x == 0.0 ? 0.0 : bessel_i1e(s * x) / bessel_i1e(s * R) * std::exp(s * (x - R));
    p.at(k0, j) = v;
  }
  return p;
}

SeedResult seed_ansatz(const EnergyFunctional& ef, const FundamentalSolutionTable& fs,
                       const DerivedCoefficients& dc, int k0, bool strict) {
  if (strict) {
    const auto& w = fs.audit.a6_witnesses;
    if (std::find(w.begin(), w.end(), k0) == w.end())
      throw Error(ErrorKind::NoWitness, "k0 = " + std::to_string(k0) + " is not a witness");
  }
  if (!ef.active(k0)) throw Error(ErrorKind::InvalidArgument, "k0 is outside the active subspace");
  if (fs.excluded(k0)) throw Error(ErrorKind::NoWitness, "k0 = " + std::to_string(k0) + " is excluded");
  const DiscreteProfile shape = ansatz_shape(ef, dc, k0);
  auto scaled = [&](double eps) {
    DiscreteProfile p = shape;
    for (auto& c : p.coeffs()) c *= eps;
    return p;
  };
  auto energy = [&](double eps) { return ef.eval_energy(scaled(eps)).E_total; };

  double lo = 1e-4, hi = 10.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = energy(x1), f2 = energy(x2);
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = energy(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = energy(x2);
    }
  }
  SeedResult out;
  out.epsilon = 0.5 * (lo + hi);
  out.profile = scaled(out.epsilon);
  out.energy = energy(out.epsilon);
  return out;
}

}  // namespace breather
