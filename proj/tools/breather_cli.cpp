// SPDX-License-Identifier: Apache-2.0
// breather: validate, fundsol, solve, reconstruct, verify, sweep.
// Exit codes: 0 success, 1 failed condition or solver error, 2 parse or usage error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "breather/error.hpp"
#include "breather/io.hpp"
#include "breather/kernel.hpp"

using namespace breather;
namespace fs = std::filesystem;

namespace {

struct Flags {
  std::string config;
  std::string out = ".";
  std::optional<int> K, N, M;
  int subspace_k0 = 1;
  std::uint64_t seed = 1;
  int seed_k0 = 0;
  int restarts = 3;
  int max_iters = 20000;
  double grad_tol = 1e-8;
  bool force = false;
  int points = 8;
  int n_t = 64;
  double r_max = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ProblemSpec load(const Flags& f) {
  ProblemSpec spec = load_config(f.config);
  if (f.K) spec.disc.K = *f.K;
  if (f.N) spec.disc.N = *f.N;
  if (f.M) spec.disc.M = *f.M;
  return spec;
}

std::string out_path(const Flags& f, const std::string& name) {
  fs::create_directories(f.out);
  return (fs::path(f.out) / name).string();
}

RunManifest manifest_for(const std::string& cmd, const ProblemSpec& spec, const Flags& f) {
  RunManifest m;
  m.command = cmd;
  m.config_hash = config_hash(config_to_json(spec));
  m.versions = module_versions();
  m.seeds["rng"] = f.seed;
  return m;
}

void finish(RunManifest& m, const Flags& f) {
  const std::string path = out_path(f, "manifest_" + m.command + ".json");
  write_file(path, m.to_json().dump(2) + "\n");
  std::cout << "manifest: " << path << "\n";
}

// Thm 1.1 arithmetic, kernel admissibility and assumption audit. Returns true if all pass.
bool validation(const ProblemSpec& spec, json& report) {
  bool ok = true;
  const DerivedCoefficients dc = derive_coefficients(spec);
  report["coefficients"] = {{"alpha", dc.alpha.str()}, {"beta", dc.beta.str()}, {"delta", dc.delta.str()},
                            {"omega", dc.omega},       {"lambda", dc.lambda}};
  if (spec.potential.periodic()) {
    const PeriodicValidation v = validate_periodic(spec);
    report["cladding"] = {{"type", "periodic"}, {"m", v.m}, {"n", v.n}, {"ratio", v.ratio.str()},
                          {"T_required", v.T_required.str()}};
  } else {
    const StepValidation v = validate_step(spec);
    report["cladding"] = {{"type", "step"}, {"m", v.m}, {"n", v.n}, {"xi", v.xi}, {"xi_bound", v.xi_bound},
                          {"T_required", v.T_required.str()}};
  }
  if (spec.nonlinearity == Nonlinearity::Averaged) {
    const auto samples = periodize(spec.kernel, spec.T.value, spec.disc.samples());
    const KernelAdmissibilityReport kr = check_admissible(samples, spec.disc.K, spec.kernel.alpha_holder);
    report["kernel"] = kernel_report_to_json(kr);
    ok = ok && kr.admissible();
  }
  const FundamentalSolutionTable table = build_table(spec, dc);
  report["audit"] = audit_to_json(table.audit);
  ok = ok && table.audit.passes();
  report["passes"] = ok;
  return ok;
}

int cmd_validate(const Flags& f) {
  const ProblemSpec spec = load(f);
  json report;
  report["config"] = f.config;
  bool ok = false;
  try {
    ok = validation(spec, report);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    report["passes"] = false;
    report["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  }
  std::cout << report.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_fundsol(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec = load(f);
  RunManifest m = manifest_for("fundsol", spec, f);
  const DerivedCoefficients dc = derive_coefficients(spec);
  const FundamentalSolutionTable table = build_table(spec, dc);
  const std::string jpath = out_path(f, "fundsol.json"), cpath = out_path(f, "fundsol.csv");
  write_file(jpath, table_to_json(table).dump(2) + "\n");
  write_file(cpath, table_csv(table));
  m.outputs = {jpath, cpath};
  m.timings["total"] = seconds_since(t0);
  std::cout << "audit passes: " << (table.audit.passes() ? "yes" : "no") << "\n";
  finish(m, f);
  return 0;
}

MinimizeOptions minimize_options(const Flags& f) {
  MinimizeOptions o;
  o.subspace_k0 = f.subspace_k0;
  o.rng_seed = f.seed;
  o.seed_k0 = f.seed_k0;
  o.restarts = f.restarts;
  o.max_iters = f.max_iters;
  o.grad_tol = f.grad_tol;
  return o;
}

int cmd_solve(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec = load(f);
  RunManifest m = manifest_for("solve", spec, f);
  if (!f.force) {
    json report;
    if (!validation(spec, report)) {
      std::cerr << "validation failed (use --force to override)\n" << report.dump(2) << "\n";
      return 1;
    }
  }
  m.timings["validate"] = seconds_since(t0);
  const SolveSetup setup = prepare(spec, {}, f.force);
  m.timings["fundsol"] = seconds_since(t0) - m.timings["validate"];
  const SolveResult res = solve(spec, setup, minimize_options(f));
  m.timings["minimize"] = seconds_since(t0) - m.timings["validate"] - m.timings["fundsol"];
  m.seeds["ansatz_k0"] = static_cast<std::uint64_t>(res.seed_k0);

  json energy = energy_to_json(res.result.report);
  energy["converged"] = res.result.converged;
  energy["iterations"] = res.result.iterations;
  energy["start_energies"] = res.result.start_energies;
  energy["best_start"] = res.result.best_start;
  energy["seed"] = {{"k0", res.seed_k0}, {"epsilon", res.seed.epsilon}, {"E", res.seed.energy}};
  energy["subspace_k0"] = f.subspace_k0;
  const std::string ppath = out_path(f, "profile.json"), epath = out_path(f, "energy.json"),
                    tpath = out_path(f, "trace.csv");
  write_file(ppath, profile_to_json(res.result.profile).dump() + "\n");
  write_file(epath, energy.dump(2) + "\n");
  write_file(tpath, trace_csv(res.result.trace));
  m.outputs = {ppath, epath, tpath};
  m.timings["total"] = seconds_since(t0);
  std::printf("E* = %.12g  grad_norm = %.3e  converged = %s\n", res.result.report.E_total,
              res.result.report.grad_norm, res.result.converged ? "yes" : "no");
  finish(m, f);
  return res.result.converged ? 0 : 1;
}

DiscreteProfile load_profile(const Flags& f, const ProblemSpec& spec) {
  const std::string path = (fs::path(f.out) / "profile.json").string();
  if (!fs::exists(path)) throw Error(ErrorKind::MissingArtifact, "no profile at " + path + " (run solve first)");
  DiscreteProfile p = profile_from_json(json::parse(read_file(path)));
  if (p.K() != spec.disc.K || p.N() != spec.disc.N)
    throw Error(ErrorKind::MissingArtifact, "stored profile does not match the K/N of this run");
  return p;
}

int cmd_reconstruct(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec = load(f);
  RunManifest m = manifest_for("reconstruct", spec, f);
  const DiscreteProfile u = load_profile(f, spec);
  const SolveSetup setup = prepare(spec, {}, true);
  const BreatherField field = extend_profile(u, setup.table, spec, setup.dc, f.r_max, f.n_t, 2, setup.kernel);
  json meta = {{"r_max", field.r_max},
               {"continuity_mismatch", field.continuity_mismatch},
               {"periods", 2},
               {"samples_per_period", f.n_t}};
  json alpha = json::array();
  for (std::size_t i = 0; i < field.alpha.size(); ++i)
    alpha.push_back({{"k", DiscreteProfile::mode_of(static_cast<int>(i))},
                     {"alpha", {field.alpha[i].real(), field.alpha[i].imag()}},
                     {"excluded", static_cast<bool>(field.excluded[i])}});
  meta["alpha"] = alpha;
  const std::string cpath = out_path(f, "field.csv"), jpath = out_path(f, "field.json");
  write_file(cpath, field_csv(field));
  write_file(jpath, meta.dump(2) + "\n");
  m.outputs = {cpath, jpath};
  m.timings["total"] = seconds_since(t0);
  finish(m, f);
  return 0;
}

int cmd_verify(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec = load(f);
  RunManifest m = manifest_for("verify", spec, f);
  const DiscreteProfile u = load_profile(f, spec);
  const SolveSetup setup = prepare(spec, {}, true);
  EnergyFunctional ef(spec, setup.dc, setup.table, setup.kernel);
  EnergyReport rep;
  ef.eval_gradient(u, &rep);
  const std::vector<double> res = el_residual(u, ef);
  const MonotonicityReport mono = f_monotonicity(u, setup.dc.omega);
  std::vector<cplx> khat;
  if (!setup.kernel.empty()) khat = ef.grid().analyze(setup.kernel);
  const SpectrumClass cls = classify_spectrum(rep, khat);
  const BreatherField field = extend_profile(u, setup.table, spec, setup.dc, f.r_max, f.n_t, 2, setup.kernel);
  std::vector<double> t0s;
  for (int i = 0; i < 16; ++i) t0s.push_back(spec.T.value * i / 16.0);
  const SegmentEnergy seg = segment_energy(field, material_profile(spec, setup.dc), t0s, setup.kernel, 64);

  double res_max = 0.0;
  for (double v : res) res_max = std::max(res_max, v);
  const double norm = profile_l2_norm(u);
  const bool residual_ok = res_max * norm <= f.grad_tol * std::max(1.0, std::fabs(rep.E_total));
  const bool seg_ok = std::isfinite(seg.max) && std::isfinite(seg.min);
  json d = {{"el_residual_per_mode", res},
            {"residual_ok", residual_ok},
            {"energy", energy_to_json(rep)},
            {"energy_negative", rep.E_total < 0.0},
            {"f_monotone", mono.monotone},
            {"f_max_violation", mono.max_violation},
            {"spectrum", spectrum_to_json(cls)},
            {"segment_energy",
             {{"t0", seg.t0}, {"value", seg.value}, {"max", seg.max}, {"min", seg.min},
              {"tail_fraction", seg.tail_fraction}, {"truncation_warning", seg.truncation_warning}}},
            {"continuity_mismatch", field.continuity_mismatch}};
  const bool all = residual_ok && mono.monotone && seg_ok;
  d["all_pass"] = all;
  const std::string path = out_path(f, "diagnostics.json");
  write_file(path, d.dump(2) + "\n");
  m.outputs = {path};
  m.timings["total"] = seconds_since(t0);
  std::cout << "spectrum: " << to_string(cls) << "  f monotone: " << (mono.monotone ? "yes" : "no")
            << "  all pass: " << (all ? "yes" : "no") << "\n";
  finish(m, f);
  return all ? 0 : 1;
}

int cmd_sweep(const Flags& f) {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec = load(f);
  RunManifest m = manifest_for("sweep", spec, f);
  int kc = 0;
  const double d_star = locate_d_star(spec, &kc);
  MinimizeOptions o = minimize_options(f);
  const SweepResult s = sweep_d(spec, default_sweep_values(spec, d_star, f.points), o);
  json j = {{"d_star", s.d_star},   {"critical_k", s.critical_k}, {"exponent", s.exponent},
            {"exponent_stderr", s.exponent_stderr}, {"fitted_points", s.fitted}};
  const std::string cpath = out_path(f, "sweep.csv"), jpath = out_path(f, "sweep.json");
  write_file(cpath, sweep_csv(s));
  write_file(jpath, j.dump(2) + "\n");
  m.outputs = {cpath, jpath};
  m.timings["total"] = seconds_since(t0);
  std::printf("d_star = %.10g (k = %d)  exponent = %.4f +- %.4f over %d points\n", s.d_star, s.critical_k,
              s.exponent, s.exponent_stderr, s.fitted);
  finish(m, f);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Breather profiles for nonlinear waveguides"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* sub) {
    sub->add_option("config", f.config, "JSON problem configuration")->required();
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--K", f.K, "largest temporal Fourier index");
    sub->add_option("--N", f.N, "number of radial elements");
    sub->add_option("--M", f.M, "time samples");
  };
  auto solver = [&](CLI::App* sub) {
    sub->add_option("--subspace-k0", f.subspace_k0, "keep only odd multiples of k0");
    sub->add_option("--seed", f.seed, "random seed for restarts");
    sub->add_option("--seed-k0", f.seed_k0, "ansatz mode (0: smallest witness)");
    sub->add_option("--restarts", f.restarts, "number of starts (seed plus random)");
    sub->add_option("--max-iters", f.max_iters, "iteration cap per start");
    sub->add_option("--grad-tol", f.grad_tol, "relative gradient tolerance");
  };
  auto* v = app.add_subcommand("validate", "check the example conditions, kernel and assumption audit");
  common(v);
  auto* fsol = app.add_subcommand("fundsol", "tabulate fundamental solutions");
  common(fsol);
  auto* s = app.add_subcommand("solve", "minimize the energy");
  common(s);
  solver(s);
  s->add_flag("--force", f.force, "skip validation");
  auto* r = app.add_subcommand("reconstruct", "extend the stored profile to the full cross-section");
  common(r);
  r->add_option("--r-max", f.r_max, "outer radius of the exported grid");
  r->add_option("--n-t", f.n_t, "time samples per period");
  auto* ver = app.add_subcommand("verify", "diagnostics of the stored profile");
  common(ver);
  ver->add_option("--r-max", f.r_max, "outer radius for the segment energy");
  ver->add_option("--n-t", f.n_t, "time samples per period");
  ver->add_option("--grad-tol", f.grad_tol, "relative gradient tolerance");
  auto* sw = app.add_subcommand("sweep", "bifurcation sweep in d");
  common(sw);
  solver(sw);
  sw->add_option("--points", f.points, "number of d values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*v) return cmd_validate(f);
    if (*fsol) return cmd_fundsol(f);
    if (*s) return cmd_solve(f);
    if (*r) return cmd_reconstruct(f);
    if (*ver) return cmd_verify(f);
    if (*sw) return cmd_sweep(f);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
