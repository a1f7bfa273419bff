// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "breather/kernel.hpp"
#include "breather/reconstruction.hpp"

namespace breather {

using json = nlohmann::json;

// Config schema: see configs/SCHEMA.md. ParseError on malformed input.
ProblemSpec parse_config(const json& j);
ProblemSpec parse_config_text(const std::string& text);
ProblemSpec load_config(const std::string& path);
json config_to_json(const ProblemSpec& spec);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);
// Hash of the canonical (key-sorted, compact) JSON form.
std::string config_hash(const json& config);

json profile_to_json(const DiscreteProfile& p);
DiscreteProfile profile_from_json(const json& j);

json energy_to_json(const EnergyReport& r);
json audit_to_json(const AssumptionAudit& a);
json table_to_json(const FundamentalSolutionTable& t);
json spectrum_to_json(const SpectrumClass& s);
json kernel_report_to_json(const KernelAdmissibilityReport& r);

std::string trace_csv(const std::vector<TraceRow>& rows);
std::string table_csv(const FundamentalSolutionTable& t);
// columns r (or x), t, w, w_t, intensity
std::string field_csv(const BreatherField& f);
std::string sweep_csv(const SweepResult& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::map<std::string, std::string> versions;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> outputs;
  std::map<std::string, double> timings;  // seconds

  // Lists every output with the FNV-1a hash of its current content.
  json to_json() const;
};

std::map<std::string, std::string> module_versions();

}  // namespace breather
