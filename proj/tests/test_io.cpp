// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <filesystem>

#include "breather/io.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace breather;
using namespace fixtures;

namespace {

const std::string config_dir = BREATHER_CONFIG_DIR;

}  // namespace

TEST_CASE("checked-in examples parse and validate") {
  for (const char* name : {"fig1_cylindrical_instantaneous", "fig1_slab_instantaneous", "fig2_cylindrical_instantaneous",
                           "fig2_slab_instantaneous", "fig1_cylindrical_averaged", "fig1_slab_averaged",
                           "fig2_cylindrical_averaged", "fig2_slab_averaged"}) {
    const ProblemSpec s = load_config(config_dir + "/" + name + ".json");
    CAPTURE(name);
    CHECK(s.name == name);
    CHECK_NOTHROW(derive_coefficients(s));
  }
  const ProblemSpec bad = load_config(config_dir + "/invalid_d2.json");
  CHECK(error_kind([&] { derive_coefficients(bad); }) == ErrorKind::SignViolation);
}

TEST_CASE("config round trip keeps exact rationals") {
  const ProblemSpec s = fig1(Geometry::Slab, Nonlinearity::Averaged);
  const json j = config_to_json(s);
  CHECK(j["potential"]["cladding"]["a"] == "45/16");
  const ProblemSpec t = parse_config(j);
  CHECK(*t.c.exact == Rational(2, 3));
  CHECK(config_hash(config_to_json(t)) == config_hash(j));
  CHECK(config_hash(j).size() == 16);
}

TEST_CASE("parse errors") {
  CHECK(error_kind([] { parse_config_text("{not json"); }) == ErrorKind::ParseError);
  CHECK(error_kind([] { parse_config_text("[1,2]"); }) == ErrorKind::ParseError);
  json j = config_to_json(fig2(Geometry::Cylindrical));
  j.erase("c");
  CHECK(error_kind([&] { parse_config(j); }) == ErrorKind::ParseError);
  j = config_to_json(fig2(Geometry::Cylindrical));
  j["geometry"] = "sphere";
  CHECK(error_kind([&] { parse_config(j); }) == ErrorKind::ParseError);
  j = config_to_json(fig2(Geometry::Cylindrical));
  j["potential"]["d"] = "1/0";
  CHECK(error_kind([&] { parse_config(j); }) == ErrorKind::ParseError);
  j = config_to_json(fig2(Geometry::Cylindrical));
  j["discretization"]["K"] = 2.5;
  CHECK(error_kind([&] { parse_config(j); }) == ErrorKind::ParseError);
  CHECK(error_kind([] { read_file("/nonexistent/breather.json"); }) == ErrorKind::MissingArtifact);
}

TEST_CASE("decimal and numeric inputs") {
  json j = config_to_json(fig1(Geometry::Cylindrical));
  j["c"] = 0.5;
  j["potential"]["cladding"]["theta"] = "0.4";
  const ProblemSpec s = parse_config(j);
  CHECK(s.c.value == 0.5);
  CHECK(*std::get<PeriodicStep>(s.potential.cladding).theta.exact == Rational(2, 5));
}

TEST_CASE("profile serialization is lossless") {
  DiscreteProfile p(Geometry::Cylindrical, 2.0, 5, 4);
  p.at(1, 1) = cplx(0.1, -1.0 / 3.0);
  p.at(5, 4) = cplx(1e-300, 7.25);
  const DiscreteProfile q = profile_from_json(json::parse(profile_to_json(p).dump()));
  CHECK(q.geometry() == p.geometry());
  CHECK(q.K() == 5);
  CHECK(q.N() == 4);
  CHECK(q.coeffs() == p.coeffs());
  json bad = profile_to_json(p);
  bad["modes"][0]["values"].erase(0);
  CHECK(error_kind([&] { profile_from_json(bad); }) == ErrorKind::ParseError);
}

TEST_CASE("hashing") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("csv layouts") {
  const std::vector<TraceRow> rows = {{0, 0, -1.0, 0.5, 0.0}, {0, 1, -2.0, 0.25, 1.0}};
  const std::string t = trace_csv(rows);
  CHECK(t.rfind("start,iter,E,grad_norm,step_size\n", 0) == 0);
  CHECK(std::count(t.begin(), t.end(), '\n') == 3);
}

TEST_CASE("manifest lists outputs with content hashes") {
  const auto dir = std::filesystem::temp_directory_path() / "breather_io_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.txt").string();
  write_file(path, "hello");
  RunManifest m;
  m.command = "solve";
  m.outputs = {path};
  m.versions = module_versions();
  const json j = m.to_json();
  CHECK(j["outputs"][0]["fnv1a"] == hex64(fnv1a("hello")));
  CHECK(j["versions"].contains("energy_minimization"));
  CHECK(read_file(path) == "hello");
}
