// SPDX-License-Identifier: Apache-2.0
#include "breather/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "breather/error.hpp"
#include "breather/kernel.hpp"

namespace breather {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

Number number(const json& j, const char* key) {
  const json& v = field(j, key);
  try {
    if (v.is_string()) return Number::parse(v.get<std::string>());
    if (v.is_number_integer()) return Number(Rational(v.get<std::int64_t>()));
    if (v.is_number()) return Number(v.get<double>());
  } catch (const Error& e) {
    parse_fail(std::string("field '") + key + "': " + e.what());
  }
  parse_fail(std::string("field '") + key + "' must be a number or a rational string");
}

json number_json(const Number& n) {
  if (n.exact) return n.exact->str();
  return n.value;
}

int integer(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) parse_fail(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

std::string fixed(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

const char* form_name(KernelSpec::Form f) {
  switch (f) {
    case KernelSpec::Form::ConstantOne: return "constant_one";
    case KernelSpec::Form::PeriodizedLorentz: return "periodized_lorentz";
    case KernelSpec::Form::StepSeries: return "step_series";
    case KernelSpec::Form::Sampled: return "sampled";
    case KernelSpec::Form::DebyeContinuous: return "debye_continuous";
  }
  return "constant_one";
}

}  // namespace

ProblemSpec parse_config(const json& j) {
  if (!j.is_object()) parse_fail("config must be a JSON object");
  ProblemSpec s;
  s.name = j.value("name", std::string());
  const std::string geom = j.value("geometry", std::string("cylindrical"));
  if (geom == "cylindrical" || geom == "radial")
    s.geometry = Geometry::Cylindrical;
  else if (geom == "slab")
    s.geometry = Geometry::Slab;
  else
    parse_fail("unknown geometry '" + geom + "'");

  s.c = number(j, "c");
  s.T = number(j, "T");
  s.R = number(j, "R");
  s.gamma = j.contains("gamma") ? number(j, "gamma") : Number(Rational(1));

  const json& pot = field(j, "potential");
  s.potential.d = number(pot, "d");
  const json& cl = field(pot, "cladding");
  const std::string type = cl.value("type", std::string());
  if (type == "periodic") {
    s.potential.cladding = PeriodicStep{number(cl, "a"), number(cl, "b"), number(cl, "theta"), number(cl, "P")};
  } else if (type == "step") {
    PureStep st{number(cl, "a"), number(cl, "b"), number(cl, "rho"), std::nullopt, std::nullopt};
    if (cl.contains("m") != cl.contains("n")) parse_fail("step cladding needs both m and n or neither");
    if (cl.contains("m")) {
      st.m = integer(cl, "m", 0);
      st.n = integer(cl, "n", 0);
    }
    s.potential.cladding = st;
  } else {
    parse_fail("cladding type must be 'periodic' or 'step'");
  }

  const std::string nl = j.value("nonlinearity", std::string("instantaneous"));
  if (nl == "instantaneous")
    s.nonlinearity = Nonlinearity::Instantaneous;
  else if (nl == "averaged")
    s.nonlinearity = Nonlinearity::Averaged;
  else
    parse_fail("unknown nonlinearity '" + nl + "'");

  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    const std::string form = k.value("form", std::string("constant_one"));
    if (form == "constant_one")
      s.kernel.form = KernelSpec::Form::ConstantOne;
    else if (form == "periodized_lorentz")
      s.kernel.form = KernelSpec::Form::PeriodizedLorentz;
    else if (form == "step_series" || form == "debye_discrete")
      s.kernel.form = KernelSpec::Form::StepSeries;
    else if (form == "sampled")
      s.kernel.form = KernelSpec::Form::Sampled;
    else if (form == "debye_continuous")
      s.kernel.form = KernelSpec::Form::DebyeContinuous;
    else
      parse_fail("unknown kernel form '" + form + "'");
    try {
      if (k.contains("weights")) s.kernel.weights = k.at("weights").get<std::vector<double>>();
      if (k.contains("samples")) s.kernel.samples = k.at("samples").get<std::vector<double>>();
      if (k.contains("alpha_holder")) s.kernel.alpha_holder = k.at("alpha_holder").get<double>();
    } catch (const json::exception& e) {
      parse_fail(std::string("kernel: ") + e.what());
    }
  }

  if (j.contains("discretization")) {
    const json& d = j.at("discretization");
    s.disc.K = integer(d, "K", s.disc.K);
    s.disc.N = integer(d, "N", s.disc.N);
    s.disc.M = integer(d, "M", s.disc.M);
  }
  return s;
}

ProblemSpec parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

ProblemSpec load_config(const std::string& path) { return parse_config_text(read_file(path)); }

json config_to_json(const ProblemSpec& s) {
  json j;
  j["name"] = s.name;
  j["geometry"] = s.geometry == Geometry::Slab ? "slab" : "cylindrical";
  j["c"] = number_json(s.c);
  j["T"] = number_json(s.T);
  j["R"] = number_json(s.R);
  j["gamma"] = number_json(s.gamma);
  json cl;
  if (const auto* per = std::get_if<PeriodicStep>(&s.potential.cladding)) {
    cl = {{"type", "periodic"},
          {"a", number_json(per->a)},
          {"b", number_json(per->b)},
          {"theta", number_json(per->theta)},
          {"P", number_json(per->P)}};
  } else {
    const auto& st = std::get<PureStep>(s.potential.cladding);
    cl = {{"type", "step"}, {"a", number_json(st.a)}, {"b", number_json(st.b)}, {"rho", number_json(st.rho)}};
    if (st.m && st.n) {
      cl["m"] = *st.m;
      cl["n"] = *st.n;
    }
  }
  j["potential"] = {{"d", number_json(s.potential.d)}, {"cladding", cl}};
  j["nonlinearity"] = s.nonlinearity == Nonlinearity::Averaged ? "averaged" : "instantaneous";
  json k = {{"form", form_name(s.kernel.form)}, {"alpha_holder", s.kernel.alpha_holder}};
  if (!s.kernel.weights.empty()) k["weights"] = s.kernel.weights;
  if (!s.kernel.samples.empty()) k["samples"] = s.kernel.samples;
  j["kernel"] = k;
  j["discretization"] = {{"K", s.disc.K}, {"N", s.disc.N}, {"M", s.disc.samples()}};
  return j;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string config_hash(const json& config) { return hex64(fnv1a(config.dump())); }

json profile_to_json(const DiscreteProfile& p) {
  json j;
  j["geometry"] = p.geometry() == Geometry::Slab ? "slab" : "cylindrical";
  j["R"] = p.R();
  j["K"] = p.K();
  j["N"] = p.N();
  json modes = json::array();
  for (int k = 1; k <= p.K(); k += 2) {
    json vals = json::array();
    for (int n = 0; n <= p.N(); ++n) vals.push_back({p.at(k, n).real(), p.at(k, n).imag()});
    modes.push_back({{"k", k}, {"values", vals}});
  }
  j["modes"] = modes;
  return j;
}

DiscreteProfile profile_from_json(const json& j) {
  try {
    const std::string g = j.at("geometry").get<std::string>();
    DiscreteProfile p(g == "slab" ? Geometry::Slab : Geometry::Cylindrical, j.at("R").get<double>(),
                      j.at("K").get<int>(), j.at("N").get<int>());
    for (const auto& m : j.at("modes")) {
      const int k = m.at("k").get<int>();
      if (k < 1 || k % 2 == 0 || k > p.K()) parse_fail("profile mode index out of range");
      const auto& vals = m.at("values");
      if (static_cast<int>(vals.size()) != p.N() + 1) parse_fail("profile mode has the wrong node count");
      for (int n = 0; n <= p.N(); ++n) p.at(k, n) = cplx(vals[n][0].get<double>(), vals[n][1].get<double>());
    }
    return p;
  } catch (const json::exception& e) {
    parse_fail(std::string("profile: ") + e.what());
  }
}

json energy_to_json(const EnergyReport& r) {
  return {{"E_total", r.E_total},     {"E_I_quadratic", r.E_I_quadratic}, {"E_N", r.E_N},
          {"E_B", r.E_B},             {"grad_norm", r.grad_norm},         {"per_mode_energy", r.per_mode_energy}};
}

json audit_to_json(const AssumptionAudit& a) {
  return {{"a5_lower", a.a5_lower},
          {"a5_upper", a.a5_upper},
          {"a6_witnesses", a.a6_witnesses},
          {"a6_prime", a.a6_prime},
          {"a6_prime_threshold", a.a6_prime_threshold},
          {"a6_prime_holds", a.a6_prime_holds},
          {"window", {a.window_lo, a.window_hi}},
          {"passes", a.passes()}};
}

json table_to_json(const FundamentalSolutionTable& t) {
  json entries = json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"k", e.k},
                       {"phi_R", e.value_at_R},
                       {"dphi_R", e.deriv_at_R},
                       {"q", e.q},
                       {"tail_norm", e.tail_norm},
                       {"excluded", e.excluded},
                       {"cells_used", e.cells_used},
                       {"multiplier", e.multiplier}});
  return {{"geometry", t.geometry == Geometry::Slab ? "slab" : "cylindrical"},
          {"K", t.K},
          {"K_audit", t.K_audit},
          {"R", t.R},
          {"entries", entries},
          {"audit", audit_to_json(t.audit)}};
}

json spectrum_to_json(const SpectrumClass& s) {
  return {{"class", to_string(s)},
          {"k", s.k},
          {"fractions", s.fractions},
          {"modes_above_1e-6", s.modes_above},
          {"kernel_compatible", s.kernel_compatible}};
}

json kernel_report_to_json(const KernelAdmissibilityReport& r) {
  return {{"even_positive", r.even_positive},
          {"convexity_route", to_string(r.convexity_route)},
          {"min", r.min_val},
          {"max", r.max_val},
          {"max_asymmetry", r.max_asymmetry},
          {"hessian_min_ratio", r.hessian_min_ratio},
          {"hessian_spot_ok", r.hessian_spot_ok},
          {"alpha_holder", r.alpha_holder},
          {"admissible", r.admissible()}};
}

std::string trace_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream os;
  os << "start,iter,E,grad_norm,step_size\n";
  for (const auto& r : rows)
    os << r.start << ',' << r.iter << ',' << fixed(r.E) << ',' << fixed(r.grad_norm) << ',' << fixed(r.step) << '\n';
  return os.str();
}

std::string table_csv(const FundamentalSolutionTable& t) {
  std::ostringstream os;
  os << "k,phi_R,dphi_R,q,tail_norm,excluded,cells_used,multiplier\n";
  for (const auto& e : t.entries)
    os << e.k << ',' << fixed(e.value_at_R) << ',' << fixed(e.deriv_at_R) << ',' << fixed(e.q) << ','
       << fixed(e.tail_norm) << ',' << (e.excluded ? 1 : 0) << ',' << e.cells_used << ',' << fixed(e.multiplier)
       << '\n';
  return os.str();
}

std::string field_csv(const BreatherField& f) {
  std::ostringstream os;
  os << (f.geometry == Geometry::Slab ? "x" : "r") << ",t,w,w_t,intensity\n";
  const int nt = f.num_t();
  for (int i = 0; i < f.num_r(); ++i)
    for (int m = 0; m < nt; ++m) {
      const std::size_t at = static_cast<std::size_t>(i) * nt + m;
      os << fixed(f.r[i]) << ',' << fixed(f.t[m]) << ',' << fixed(f.w[at]) << ',' << fixed(f.w_t[at]) << ','
         << fixed(f.intensity[at]) << '\n';
    }
  return os.str();
}

std::string sweep_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "d,E_star,norm,converged\n";
  for (const auto& p : s.points)
    os << fixed(p.d) << ',' << fixed(p.E) << ',' << fixed(p.norm) << ',' << (p.converged ? 1 : 0) << '\n';
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingArtifact, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << content;
}

std::map<std::string, std::string> module_versions() {
  return {{"config_model", "1.0.0"},  {"special_functions", "1.0.0"},         {"kernel", "1.0.0"},
          {"fundamental_solutions", "1.0.0"}, {"discretization", "1.0.0"}, {"energy_minimization", "1.0.0"},
          {"reconstruction_verification", "1.0.0"}, {"cli_io", "1.0.0"}};
}

json RunManifest::to_json() const {
  json outs = json::array();
  for (const auto& path : outputs) {
    std::string h = "missing";
    try {
      h = hex64(fnv1a(read_file(path)));
    } catch (const Error&) {
    }
    outs.push_back({{"path", path}, {"fnv1a", h}});
  }
  return {{"command", command}, {"config_hash", config_hash}, {"versions", versions},
          {"seeds", seeds},     {"outputs", outs},            {"timings_s", timings}};
}

}  // namespace breather
