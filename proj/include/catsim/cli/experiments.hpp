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


#pragma once

#include <functional>
#include <utility>
#include <string>
#include <vector>

#include "catsim/cli/config.hpp"

namespace catsim::cli {

struct RunContext {
  RunContext(const ExperimentConfig& c, bool full_run, bool dry, std::string out_dir, SeedMap s)
      : cfg(c), full(full_run), dry_run(dry), dir(std::move(out_dir)), seeds(std::move(s)) {}

  const ExperimentConfig& cfg;
  bool full = false;
  bool dry_run = false;  // resolve and check everything, compute nothing
  std::string dir;       // where artifacts go
  SeedMap seeds;
  json resolved = json::object();
  json report = json::object();
  std::vector<std::string> files;

  // Registers an artifact and returns its path inside dir.
  std::string file(const std::string& name);
};

struct Experiment {
  std::string name;
  std::string description;
  std::vector<std::string> option_keys;
  bool uses_dephasing = false;
  bool uses_thermal = false;
  std::function<void(RunContext&)> run;
  bool uses_params = true;
};

const std::vector<Experiment>& registry();
const Experiment* find_experiment(const std::string& name);

// Generic checks shared by all experiments: unknown option keys, blocks the
// experiment does not read.
void check_blocks(const Experiment& e, const ExperimentConfig& cfg);

}  // namespace catsim::cli
