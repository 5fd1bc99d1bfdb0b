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


// catsim command line: run, list, validate.

#include <iostream>

#include <CLI11.hpp>

#include "catsim/cli/runner.hpp"
#include "catsim/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"catsim: driven-dissipative atomic cat-state simulations"};
  app.set_version_flag("--version", catsim::kVersion);
  app.require_subcommand(1);

  std::string path;
  catsim::cli::RunOptions opts;

  CLI::App* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", path, "config JSON")->required();
  run->add_flag("--full", opts.full, "use the publication-scale model where a desk default exists");

  app.add_subcommand("list", "list registered experiments");

  CLI::App* val = app.add_subcommand("validate", "check a config file without running it");
  val->add_option("config", path, "config JSON")->required();
  val->add_flag("--full", opts.full, "validate as for run --full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : catsim::cli::kExitConfig;
  }

  if (run->parsed()) return catsim::cli::run_command(path, opts, std::cout, std::cerr);
  if (val->parsed()) return catsim::cli::validate_command(path, opts, std::cout, std::cerr);
  catsim::cli::list_command(std::cout);
  return 0;
}
