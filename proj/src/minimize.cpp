// SPDX-License-Identifier: Apache-2.0
#include "breather/minimize.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "breather/error.hpp"

namespace breather {

namespace {

constexpr double kDivergedEnergy = -1e12;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct Pair {
  std::vector<double> s, y;
  double rho;
};

std::vector<double> two_loop(const std::deque<Pair>& mem, const std::vector<double>& g,
                             const EnergyFunctional& ef) {
  std::vector<double> q = g;
  std::vector<double> a(mem.size());
  for (std::size_t i = mem.size(); i-- > 0;) {
    a[i] = mem[i].rho * dot(mem[i].s, q);
    for (std::size_t n = 0; n < q.size(); ++n) q[n] -= a[i] * mem[i].y[n];
  }
  std::vector<double> r = ef.precondition(q);
  if (!mem.empty()) {
    const Pair& last = mem.back();
    const std::vector<double> py = ef.precondition(last.y);
    const double yhy = dot(last.y, py);
    if (yhy > 0.0) {
      const double gamma = dot(last.s, last.y) / yhy;
      for (double& v : r) v *= gamma;
    }
  }
  for (std::size_t i = 0; i < mem.size(); ++i) {
    const double b = mem[i].rho * dot(mem[i].y, r);
    for (std::size_t n = 0; n < r.size(); ++n) r[n] += (a[i] - b) * mem[i].s[n];
  }
  for (double& v : r) v = -v;
  return r;
}

}  // namespace

void MinimizeOptions::check() const {
  if (!(grad_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "grad_tol must be positive");
  if (subspace_k0 < 1 || subspace_k0 % 2 == 0)
    throw Error(ErrorKind::InvalidArgument, "subspace k0 must be odd and >= 1");
  if (max_iters < 0 || restarts < 1 || memory < 1)
    throw Error(ErrorKind::InvalidArgument, "max_iters, restarts and memory must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0) || !(armijo > 0.0 && armijo < 0.5))
    throw Error(ErrorKind::InvalidArgument, "line-search constants out of range");
}

DiscreteProfile random_profile(const EnergyFunctional& ef, double amplitude, std::uint64_t seed) {
  DiscreteProfile p = ef.zero_profile();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<double> x = p.to_real();
  const auto& mask = ef.free_mask();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = u(rng);
    x[i] = v * mask[i];
  }
  p.from_real(x);
  return p;
}

MinimizeResult descend(const DiscreteProfile& p0, const EnergyFunctional& ef, const MinimizeOptions& opt,
                       int start_index) {
  opt.check();
  MinimizeResult out;
  DiscreteProfile p = p0;
  std::vector<double> x = p.to_real();
  const auto& mask = ef.free_mask();
  for (std::size_t i = 0; i < x.size(); ++i) x[i] *= mask[i];
  p.from_real(x);

  EnergyReport rep;
  std::vector<double> g = ef.eval_gradient(p, &rep);
  double f = rep.E_total;
  out.trace.push_back({start_index, 0, f, rep.grad_norm, 0.0});
  std::deque<Pair> mem;
  DiscreteProfile trial = p;

  int it = 0;
  for (; it < opt.max_iters; ++it) {
    if (rep.grad_norm <= opt.grad_tol * std::max(1.0, std::fabs(f))) {
      out.converged = true;
      break;
    }
    std::vector<double> d = two_loop(mem, g, ef);
    double gd = dot(g, d);
    if (!(gd < 0.0)) {
      mem.clear();
      d = two_loop(mem, g, ef);
      gd = dot(g, d);
      if (!(gd < 0.0)) break;
    }

    bool accepted = false;
    double step = 1.0;
    std::vector<double> xn(x.size()), gn;
    EnergyReport rn;
    for (int ls = 0; ls < 60; ++ls, step *= opt.backtrack) {
      for (std::size_t i = 0; i < x.size(); ++i) xn[i] = x[i] + step * d[i];
      trial.from_real(xn);
      rn = ef.eval_energy(trial);
      const double fn = rn.E_total;
      if (!std::isfinite(fn)) continue;
      const bool armijo = fn <= f + opt.armijo * step * gd;
      // near the rounding floor of E a step counts if it lowers the gradient
      const bool flat = std::fabs(fn - f) <= 1e-14 * std::max(1.0, std::fabs(f));
      if (armijo || flat) {
        gn = ef.eval_gradient(trial, &rn);
        if (armijo || rn.grad_norm < rep.grad_norm) {
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) {
      if (mem.empty()) break;
      mem.clear();
      continue;
    }
    if (rn.E_total < kDivergedEnergy)
      throw Error(ErrorKind::Diverged, "energy fell below -1e12; the functional should be coercive");

    Pair pr;
    pr.s.resize(x.size());
    pr.y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      pr.s[i] = xn[i] - x[i];
      pr.y[i] = gn[i] - g[i];
    }
    const double sy = dot(pr.s, pr.y);
    if (sy > 1e-300 && sy > 1e-12 * std::sqrt(dot(pr.s, pr.s) * dot(pr.y, pr.y))) {
      pr.rho = 1.0 / sy;
      mem.push_back(std::move(pr));
      if (static_cast<int>(mem.size()) > opt.memory) mem.pop_front();
    }
    x.swap(xn);
    g.swap(gn);
    rep = rn;
    f = rep.E_total;
    out.trace.push_back({start_index, it + 1, f, rep.grad_norm, step});
  }
  p.from_real(x);
  out.profile = p;
  out.report = rep;
  out.iterations = it;
  out.start_energies = {f};
  out.best_start = start_index;
  return out;
}

MinimizeResult minimize(const DiscreteProfile& p0, const EnergyFunctional& ef, const MinimizeOptions& opt) {
  opt.check();
  if (opt.subspace_k0 != ef.subspace_k0())
    throw Error(ErrorKind::InvalidArgument, "subspace k0 differs between options and functional");
  MinimizeResult best = descend(p0, ef, opt, 0);
  std::vector<double> energies = best.start_energies;
  std::vector<TraceRow> trace = best.trace;
  const double amp = p0.max_abs() > 0.0 ? 0.1 * p0.max_abs() : 0.1;
  for (int r = 1; r < opt.restarts; ++r) {
    DiscreteProfile start = random_profile(ef, amp, opt.rng_seed + static_cast<std::uint64_t>(r));
    MinimizeResult res = descend(start, ef, opt, r);
    energies.push_back(res.report.E_total);
    trace.insert(trace.end(), res.trace.begin(), res.trace.end());
    const bool better = res.report.E_total < best.report.E_total - 1e-12 * std::fabs(best.report.E_total);
    if ((res.converged && !best.converged) || (res.converged == best.converged && better)) best = std::move(res);
  }
  best.start_energies = energies;
  best.trace = std::move(trace);
  return best;
}

SolveSetup prepare(const ProblemSpec& spec, const FundsolOptions& fopt, bool force) {
  SolveSetup s;
  s.dc = derive_coefficients(spec);
  s.table = build_table(spec, s.dc, 0, fopt);
  if (!force && !s.table.audit.passes())
    throw Error(ErrorKind::NoWitness, "assumption audit failed (no witness or unbounded ratios)");
  s.kernel = kernel_samples_for(spec);
  return s;
}

SolveResult solve(const ProblemSpec& spec, const SolveSetup& setup, const MinimizeOptions& opt,
                  const std::optional<DiscreteProfile>& provided) {
  opt.check();
  EnergyFunctional ef(spec, setup.dc, setup.table, setup.kernel, opt.subspace_k0);
  SolveResult out;
  DiscreteProfile start;
  switch (opt.seed) {
    case SeedKind::PaperAnsatz: {
      int k0 = opt.seed_k0;
      if (k0 == 0) {
        for (int w : setup.table.audit.a6_witnesses)
          if (w <= spec.disc.K && ef.active(w)) {
            k0 = w;
            break;
          }
        if (k0 == 0) throw Error(ErrorKind::NoWitness, "no witness among the active modes");
      }
      out.seed_k0 = k0;
      if (opt.seed_epsilon > 0.0) {
        out.seed.profile = ansatz_shape(ef, setup.dc, k0);
        for (auto& c : out.seed.profile.coeffs()) c *= opt.seed_epsilon;
        out.seed.epsilon = opt.seed_epsilon;
        out.seed.energy = ef.eval_energy(out.seed.profile).E_total;
      } else {
        out.seed = seed_ansatz(ef, setup.table, setup.dc, k0, true);
      }
      start = out.seed.profile;
      break;
    }
    case SeedKind::Random:
      start = random_profile(ef, 0.1, opt.rng_seed);
      out.seed.profile = start;
      out.seed.energy = ef.eval_energy(start).E_total;
      break;
    case SeedKind::Provided:
      if (!provided) throw Error(ErrorKind::InvalidArgument, "provided seed missing");
      start = *provided;
      out.seed.profile = start;
      out.seed.energy = ef.eval_energy(start).E_total;
      break;
  }
  out.result = minimize(start, ef, opt);
  return out;
}

}  // namespace breather
