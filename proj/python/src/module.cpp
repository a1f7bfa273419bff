// SPDX-License-Identifier: Apache-2.0
// Python bindings. Configs and reports cross the boundary as JSON text; profiles and
// field grids as NumPy arrays.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "breather/bessel.hpp"
#include "breather/error.hpp"
#include "breather/io.hpp"

namespace py = pybind11;
using namespace breather;

namespace {

ProblemSpec spec_from(const std::string& config, std::optional<int> K, std::optional<int> N, std::optional<int> M) {
  ProblemSpec s = parse_config_text(config);
  if (K) s.disc.K = *K;
  if (N) s.disc.N = *N;
  if (M) s.disc.M = *M;
  return s;
}

py::array_t<std::complex<double>> profile_array(const DiscreteProfile& p) {
  py::array_t<std::complex<double>> a({p.num_modes(), p.num_nodes()});
  auto v = a.mutable_unchecked<2>();
  for (int i = 0; i < p.num_modes(); ++i)
    for (int j = 0; j < p.num_nodes(); ++j) v(i, j) = p.at(DiscreteProfile::mode_of(i), j);
  return a;
}

DiscreteProfile profile_from(const ProblemSpec& s, const py::array_t<std::complex<double>>& a) {
  DiscreteProfile p(s.geometry, s.R.value, s.disc.K, s.disc.N);
  if (a.ndim() != 2 || a.shape(0) != p.num_modes() || a.shape(1) != p.num_nodes())
    throw Error(ErrorKind::InvalidArgument, "profile array must have shape (modes, nodes)");
  auto v = a.unchecked<2>();
  for (int i = 0; i < p.num_modes(); ++i)
    for (int j = 0; j < p.num_nodes(); ++j) p.at(DiscreteProfile::mode_of(i), j) = v(i, j);
  return p;
}

std::string validate(const std::string& config) {
  const ProblemSpec s = parse_config_text(config);
  json out;
  const DerivedCoefficients dc = derive_coefficients(s);
  out["alpha"] = dc.alpha.str();
  out["beta"] = dc.beta.str();
  out["delta"] = dc.delta.str();
  if (s.potential.periodic()) {
    const PeriodicValidation v = validate_periodic(s);
    out["m"] = v.m;
    out["n"] = v.n;
    out["T_required"] = v.T_required.str();
  } else {
    const StepValidation v = validate_step(s);
    out["m"] = v.m;
    out["n"] = v.n;
    out["xi"] = v.xi;
    out["xi_bound"] = v.xi_bound;
    out["T_required"] = v.T_required.str();
  }
  return out.dump();
}

py::dict solve_py(const std::string& config, std::optional<int> K, std::optional<int> N, std::optional<int> M,
                  int restarts, std::uint64_t seed, int subspace_k0, bool force) {
  const ProblemSpec s = spec_from(config, K, N, M);
  SolveSetup setup;
  SolveResult r;
  {
    py::gil_scoped_release release;
    setup = prepare(s, {}, force);
    MinimizeOptions opt;
    opt.restarts = restarts;
    opt.rng_seed = seed;
    opt.subspace_k0 = subspace_k0;
    r = solve(s, setup, opt);
  }
  std::vector<cplx> khat;
  if (!setup.kernel.empty()) khat = EnergyFunctional(s, setup.dc, setup.table, setup.kernel).grid().analyze(setup.kernel);
  py::dict d;
  d["energy"] = energy_to_json(r.result.report).dump();
  d["converged"] = r.result.converged;
  d["iterations"] = r.result.iterations;
  d["seed_energy"] = r.seed.energy;
  d["start_energies"] = r.result.start_energies;
  d["spectrum"] = to_string(classify_spectrum(r.result.report, khat));
  d["profile"] = profile_array(r.result.profile);
  return d;
}

py::dict extend_py(const std::string& config, const py::array_t<std::complex<double>>& profile,
                   std::optional<int> K, std::optional<int> N, std::optional<int> M, double r_max, int n_t) {
  const ProblemSpec s = spec_from(config, K, N, M);
  const SolveSetup setup = prepare(s, {}, true);
  const DiscreteProfile p = profile_from(s, profile);
  const BreatherField f = extend_profile(p, setup.table, s, setup.dc, r_max, n_t, 2, setup.kernel);
  const py::ssize_t nr = f.num_r(), nt = f.num_t();
  auto grid = [&](const std::vector<double>& v) {
    py::array_t<double> a({nr, nt});
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
  };
  py::dict d;
  d["r"] = py::array_t<double>(nr, f.r.data());
  d["t"] = py::array_t<double>(nt, f.t.data());
  d["w"] = grid(f.w);
  d["w_t"] = grid(f.w_t);
  d["intensity"] = grid(f.intensity);
  d["continuity_mismatch"] = f.continuity_mismatch;
  d["monotone"] = f_monotonicity(p, setup.dc.omega).monotone;
  return d;
}

}  // namespace

PYBIND11_MODULE(_breather, m) {
  m.doc() = "Breather profiles for cylindrical and slab waveguides";

  py::register_exception<Error>(m, "BreatherError");

  m.def("validate", &validate, py::arg("config"), "Example-condition arithmetic as JSON text");
  m.def(
      "fundsol",
      [](const std::string& config, std::optional<int> K) {
        const ProblemSpec s = spec_from(config, K, std::nullopt, std::nullopt);
        return table_to_json(build_table(s, derive_coefficients(s))).dump();
      },
      py::arg("config"), py::arg("K") = py::none(), "Fundamental-solution table as JSON text");
  m.def("solve", &solve_py, py::arg("config"), py::arg("K") = py::none(), py::arg("N") = py::none(),
        py::arg("M") = py::none(), py::arg("restarts") = 3, py::arg("seed") = 1, py::arg("subspace_k0") = 1,
        py::arg("force") = false);
  m.def("extend", &extend_py, py::arg("config"), py::arg("profile"), py::arg("K") = py::none(),
        py::arg("N") = py::none(), py::arg("M") = py::none(), py::arg("r_max") = 0.0, py::arg("n_t") = 64);
  m.def(
      "locate_d_star",
      [](const std::string& config, std::optional<int> K, std::optional<int> N) {
        int k = 0;
        const double d = locate_d_star(spec_from(config, K, N, std::nullopt), &k);
        return py::make_tuple(d, k);
      },
      py::arg("config"), py::arg("K") = py::none(), py::arg("N") = py::none());
  m.def(
      "bessel",
      [](const std::string& family, int order, double x, bool scaled) {
        static const std::map<std::string, BesselFamily> fam = {
            {"J", BesselFamily::J}, {"Y", BesselFamily::Y}, {"I", BesselFamily::I}, {"K", BesselFamily::K}};
        const auto it = fam.find(family);
        if (it == fam.end()) throw Error(ErrorKind::InvalidArgument, "family must be J, Y, I or K");
        return eval_bessel({it->second, order, scaled}, x);
      },
      py::arg("family"), py::arg("order"), py::arg("x"), py::arg("scaled") = false);
}
