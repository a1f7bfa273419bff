// SPDX-License-Identifier: Apache-2.0
// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when a criterion
// fails that is not listed in kKnownUnattainable (see README).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <string>

#include "breather/bessel.hpp"
#include "breather/reconstruction.hpp"
#include "checks.hpp"
#include "fixtures.hpp"

using namespace breather;
using namespace fixtures;

namespace {

const std::set<int> kKnownUnattainable = {11};

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_unexpected = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt <= budget_s;
  const bool pass = o.pass && in_time;
  std::printf("[%s] %2d %-28s %s; %.2fs (limit %.0fs)%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt,
              budget_s, pass || !kKnownUnattainable.count(id) ? "" : " [known: see README]");
  std::fflush(stdout);
  if (!pass && !kKnownUnattainable.count(id)) ++g_unexpected;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

SolveResult run(const ProblemSpec& s, MinimizeOptions opt = {},
                const std::optional<DiscreteProfile>& provided = std::nullopt) {
  const SolveSetup setup = prepare(s);
  return solve(s, setup, opt, provided);
}

}  // namespace

int main() {
  criterion(1, "parameter arithmetic", 1.0, [] {
    const PeriodicValidation p = validate_periodic(fig1(Geometry::Cylindrical));
    const StepValidation st = validate_step(fig2(Geometry::Cylindrical));
    const bool ok1 = p.m == 1 && p.n == 1 && p.T_required.exact && *p.T_required.exact == Rational(4);
    const double dxi = std::fabs(st.xi - std::numbers::pi / 4);
    const double dbound = std::fabs(st.xi_bound - std::atan(std::sqrt(10.0)));
    const bool ok2 = dxi <= 1e-12 && dbound <= 1e-12 && st.T_required.exact && *st.T_required.exact == Rational(4);
    return Outcome{ok1 && ok2, "fig1 (m,n)=(" + std::to_string(p.m) + "," + std::to_string(p.n) + ") T=" +
                                   p.T_required.str() + "; fig2 |xi-pi/4|=" + fmt("%.1e", dxi) +
                                   " T=" + st.T_required.str()};
  });

  criterion(2, "special functions", 1.0, [] {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = 1e-3 * std::pow(1e6, i / 199.0);
      const BesselJY jy = bessel_jy(x);
      const BesselIK ik = bessel_ik_scaled(x);
      worst = std::max(worst, std::fabs((jy.j1 * jy.y0 - jy.j0 * jy.y1) * std::numbers::pi * x / 2 - 1.0));
      worst = std::max(worst, std::fabs((ik.i0 * ik.k1 + ik.i1 * ik.k0) * x - 1.0));
    }
    // I₁(1) from its power series in long double
    long double term = 0.5L, series = 0.0L;
    for (int m = 0; m < 40; ++m) {
      series += term;
      term *= 0.25L / ((m + 1.0L) * (m + 2.0L));
    }
    const double di1 = std::fabs(bessel_i1(1.0) - static_cast<double>(series)) / static_cast<double>(series);
    return Outcome{worst <= 1e-9 && di1 <= 1e-10, fmt("max Wronskian rel err %.1e; I1(1) rel err %.1e", worst, di1)};
  });

  criterion(3, "fundamental solutions", 30.0, [] {
    double worst_res = 0.0, worst_ratio_dev = 0.0;
    for (const ProblemSpec& s : {fig1(Geometry::Cylindrical, Nonlinearity::Instantaneous, 33, 64, 272),
                                 fig1(Geometry::Slab, Nonlinearity::Instantaneous, 33, 64, 272),
                                 fig2(Geometry::Cylindrical, Nonlinearity::Instantaneous, 33, 64, 272),
                                 fig2(Geometry::Slab, Nonlinearity::Instantaneous, 33, 64, 272)}) {
      const DerivedCoefficients dc = derive_coefficients(s);
      const FundamentalSolutionTable t = build_table(s, dc, 33);
      const MaterialProfile mat = material_profile(s, dc);
      for (int k : {1, 5, 33}) {
        const double r1 = checks::ode_residual(t.exterior(k), mat, dc.omega, k, 2e-3);
        const double r2 = checks::ode_residual(t.exterior(k), mat, dc.omega, k, 1e-3);
        worst_res = std::max(worst_res, r2);
        worst_ratio_dev = std::max(worst_ratio_dev, std::fabs(r1 / r2 - 4.0));
      }
    }
    double det_dev = 0.0;
    for (bool osc : {true, false})
      for (double sv : osc ? std::vector<double>{0.5, 4.0, 60.0} : std::vector<double>{0.5, 2.0, 8.0}) {
        const auto P = propagation_matrix(Geometry::Cylindrical, osc, sv, 2.6, 2.0);
        det_dev = std::max(det_dev, std::fabs((P[0] * P[3] - P[1] * P[2]) * 2.6 / 2.0 - 1.0));
      }
    const ProblemSpec slab = fig1(Geometry::Slab, Nonlinearity::Instantaneous, 33, 64, 272);
    const DerivedCoefficients dc = derive_coefficients(slab);
    const FundamentalSolutionTable t = build_table(slab, dc, 33);
    double floquet_dev = 0.0, mult_dev = 0.0;
    for (int k = 1; k <= 33; k += 2) {
      const auto T = slab_period_transfer(k, slab, dc);
      floquet_dev = std::max(floquet_dev, std::fabs(T[0] * T[3] - T[1] * T[2] - 1.0));
      const auto& e = t.at(k);
      mult_dev = std::max({mult_dev, std::fabs(std::fabs(e.multiplier) - 2.0 / 3.0),
                           std::fabs(std::fabs(e.other_multiplier) - 1.5)});
    }
    const bool ok = worst_res <= 1e-6 && worst_ratio_dev <= 0.4 && det_dev <= 1e-10 && floquet_dev <= 1e-10 &&
                    mult_dev <= 1e-10;
    return Outcome{ok, fmt("ODE residual %.1e, |ratio-4| %.2f, ", worst_res, worst_ratio_dev) +
                           fmt("det dev %.1e/%.1e, multiplier dev %.1e", det_dev, floquet_dev, mult_dev)};
  });

  criterion(4, "gradient check", 60.0, [] {
    double worst = 0.0;
    for (Geometry g : {Geometry::Cylindrical, Geometry::Slab})
      for (Nonlinearity nl : {Nonlinearity::Instantaneous, Nonlinearity::Averaged}) {
        const ProblemSpec s = fig1(g, nl, 8, 32, 72);
        const SolveSetup setup = prepare(s);
        const EnergyFunctional ef(s, setup.dc, setup.table, setup.kernel);
        worst = std::max(worst, checks::gradient_mismatch(ef, random_profile(ef, 0.3, 99), 50, 7));
      }
    return Outcome{worst <= 1e-6, fmt("max relative error %.1e over 4x50 directions", worst)};
  });

  // Runs shared by criteria 5, 6 and 9.
  std::optional<SolveResult> fig1_radial, fig2_radial;

  criterion(5, "nontriviality", 600.0, [&] {
    bool ok = true;
    std::string detail;
    const std::pair<const char*, ProblemSpec> cases[] = {{"fig1 cyl", fig1(Geometry::Cylindrical)},
                                                          {"fig1 slab", fig1(Geometry::Slab)},
                                                          {"fig2 cyl", fig2(Geometry::Cylindrical)},
                                                          {"fig2 slab", fig2(Geometry::Slab)}};
    for (const auto& [name, s] : cases) {
      const SolveResult r = run(s);
      const double E = r.result.report.E_total;
      const bool c = E <= -1e-6 && r.result.report.grad_norm <= 1e-8 * std::max(1.0, std::fabs(E)) &&
                     r.seed.energy < 0.0 && E <= r.seed.energy;
      ok = ok && c;
      detail += std::string(detail.empty() ? "" : "; ") + name + fmt(" E*=%.6g seed=%.3g", E, r.seed.energy);
      if (std::string(name) == "fig1 cyl") fig1_radial = r;
      if (std::string(name) == "fig2 cyl") fig2_radial = r;
    }
    return Outcome{ok, detail};
  });

  criterion(6, "homogeneity in gamma", 300.0, [&] {
    ProblemSpec s = fig1(Geometry::Cylindrical);
    const SolveResult base = fig1_radial ? *fig1_radial : run(s);
    s.gamma = Rational(4);
    const SolveResult scaled = run(s);
    const double e_ratio = scaled.result.report.E_total / base.result.report.E_total;
    const double n_ratio = profile_l2_norm(scaled.result.profile) / profile_l2_norm(base.result.profile);
    const double de = std::fabs(e_ratio / 0.25 - 1.0), dn = std::fabs(n_ratio / 0.5 - 1.0);
    return Outcome{de <= 1e-4 && dn <= 1e-4, fmt("E ratio %.8f, norm ratio %.8f", e_ratio, n_ratio)};
  });

  criterion(7, "nested-space monotonicity", 600.0, [] {
    double E[3];
    std::optional<DiscreteProfile> prev;
    const int Ks[3] = {8, 16, 32};
    for (int i = 0; i < 3; ++i) {
      const ProblemSpec s = fig1(Geometry::Cylindrical, Nonlinearity::Instantaneous, Ks[i], 64, 8 * (Ks[i] + 1));
      MinimizeOptions opt;
      if (prev) opt.seed = SeedKind::Provided;
      const SolveResult r = run(s, opt, prev ? std::optional(prev->with_modes(Ks[i])) : std::nullopt);
      E[i] = r.result.report.E_total;
      prev = r.result.profile;
    }
    const bool ok = E[0] >= E[1] - 1e-8 && E[1] >= E[2] - 1e-8;
    return Outcome{ok, fmt("E*(8)=%.10f E*(16)=%.10f E*(32)=%.10f", E[0], E[1], E[2])};
  });

  criterion(8, "transverse monotonicity", 600.0, [] {
    bool ok = true;
    double worst = 0.0;
    for (const ProblemSpec& s : {fig1(Geometry::Slab, Nonlinearity::Averaged), fig2(Geometry::Slab, Nonlinearity::Averaged),
                                 fig1(Geometry::Cylindrical, Nonlinearity::Averaged),
                                 fig2(Geometry::Cylindrical, Nonlinearity::Averaged)}) {
      const SolveSetup setup = prepare(s);
      const SolveResult r = solve(s, setup, {});
      const MonotonicityReport m = f_monotonicity(r.result.profile, setup.dc.omega);
      const double fmax = *std::max_element(m.f.begin(), m.f.end());
      ok = ok && m.monotone && m.max_violation <= 1e-8 * fmax;
      worst = std::max(worst, m.max_violation / fmax);
    }
    return Outcome{ok, fmt("largest relative violation %.1e over 4 averaged runs", worst)};
  });

  criterion(9, "spectrum classification", 600.0, [&] {
    const ProblemSpec s = fig1(Geometry::Slab, Nonlinearity::Averaged);
    const SolveSetup setup = prepare(s);
    const SolveResult r = solve(s, setup, {});
    const EnergyFunctional ef(s, setup.dc, setup.table, setup.kernel);
    const SpectrumClass av = classify_spectrum(r.result.report, ef.grid().analyze(setup.kernel));
    const SolveResult a = fig1_radial ? *fig1_radial : run(fig1(Geometry::Cylindrical));
    const SolveResult b = fig2_radial ? *fig2_radial : run(fig2(Geometry::Cylindrical));
    const SpectrumClass ca = classify_spectrum(a.result.report), cb = classify_spectrum(b.result.report);
    const bool ok = av.monochromatic && av.k == 1 && !ca.monochromatic && ca.modes_above >= 3 &&
                    !cb.monochromatic && cb.modes_above >= 3;
    return Outcome{ok, "slab averaged " + to_string(av) + "; fig1 cyl " + to_string(ca) + " (" +
                           std::to_string(ca.modes_above) + " modes); fig2 cyl " + to_string(cb) + " (" +
                           std::to_string(cb.modes_above) + " modes)"};
  });

  // k0 = 3 is a witness for the step example only; the periodic one has q_3 < 0.
  criterion(10, "subspace multiplicity", 600.0, [] {
    const ProblemSpec s = fig2(Geometry::Cylindrical);
    const SolveSetup setup = prepare(s);
    const auto& w = setup.table.audit.a6_witnesses;
    const bool witness = std::find(w.begin(), w.end(), 3) != w.end();
    MinimizeOptions opt;
    opt.subspace_k0 = 3;
    const SolveResult r = solve(s, setup, opt);
    bool exact = true;
    for (int k = 1; k <= s.disc.K; k += 2) {
      const double e = r.result.report.per_mode_energy[DiscreteProfile::mode_index(k)];
      if (k % 3 != 0) {
        exact = exact && e == 0.0;
        for (int j = 0; j <= s.disc.N; ++j) exact = exact && r.result.profile.at(k, j) == cplx(0.0);
      }
    }
    const double E = r.result.report.E_total;
    const bool ok = witness && r.result.converged && exact && E < 0.0;
    return Outcome{ok, std::string("fig2 cyl, k0=3 witness ") + (witness ? "yes" : "no") + fmt(", E*=%.6g", E) +
                           ", inactive modes exactly zero " + (exact ? "yes" : "no")};
  });

  criterion(11, "bifurcation exponent", 1200.0, [] {
    const ProblemSpec s = fig1(Geometry::Cylindrical);
    int kc = 0;
    const double ds = locate_d_star(s, &kc);
    MinimizeOptions opt;
    const SweepResult sw = sweep_d(s, default_sweep_values(s, ds, 8), opt);
    const bool ok = sw.fitted >= 6 && sw.exponent >= 0.15 && sw.exponent <= 0.45;
    return Outcome{ok, fmt("d*=%.6f, exponent %.4f +- %.4f", ds, sw.exponent, sw.exponent_stderr) +
                           " over " + std::to_string(sw.fitted) + " points, band [0.15, 0.45]"};
  });

  std::printf("unexpected failures: %d\n", g_unexpected);
  return g_unexpected == 0 ? 0 : 1;
}
