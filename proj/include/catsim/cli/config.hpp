// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// JSON experiment configuration: parsing, unit normalization, parameter
// resolution and seed expansion.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "catsim/dynamics.hpp"
#include "catsim/models.hpp"

namespace catsim::cli {

using nlohmann::json;

struct ExperimentConfig {
  std::string experiment;
  std::string output_dir;
  json params = json::object();
  json dephasing = json::object();
  json thermal = json::object();
  json integrator = json::object();
  json options = json::object();
  std::optional<std::uint64_t> master_seed;
  json raw;  // document as read from disk
};

// Structural checks only; experiment-specific keys are checked by the
// experiment itself. Throws Error(Config).
ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path, std::string* raw_text = nullptr);

// A frequency given either as a bare number (rad/s, or the dimensionless
// model unit) or as {"value": v, "unit": "Hz" | "mHz" | "kHz" | "MHz" | "GHz" | "rad/s"}.
double frequency(const json& v, const std::string& key);

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where);

struct ResolvedParams {
  SystemParams p;
  RateSet rates;
  double alpha_sq = 0.0;
  bool compensated = false;
  json to_json() const;
};

// Fills a SystemParams from the "params" block. Relation keys
// (J_over_gcol, Delta_over_gcol, kappa_p_over_chi, kappa_s_over_kappa_p,
// alpha_sq) are resolved in dependency order; giving both a value and its
// relation is an error.
ResolvedParams resolve_params(const json& params, const json& defaults);

DephasingParams resolve_dephasing(const json& block, std::uint64_t seed);
ThermalParams resolve_thermal(const json& block, const json& defaults);
IntegratorConfig resolve_integrator(const json& block);

struct SeedMap {
  std::uint64_t master = 0;
  bool drawn = false;  // master was not in the config
  std::map<std::string, std::uint64_t> streams;

  std::uint64_t stream(const std::string& purpose);
  json to_json() const;
};

SeedMap seed_policy(const ExperimentConfig& cfg);
std::uint64_t derive_seed(std::uint64_t master, const std::string& purpose);

// Objects merge key by key, anything else is replaced.
json merge(json base, const json& overrides);

}  // namespace catsim::cli
