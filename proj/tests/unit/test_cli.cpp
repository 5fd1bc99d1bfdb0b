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


#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "catsim/cli/config.hpp"
#include "catsim/cli/experiments.hpp"
#include "catsim/cli/runner.hpp"
#include "catsim/error.hpp"
#include "catsim/models.hpp"

using namespace catsim;
using namespace catsim::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("catsim_cli_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter()++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string write(const fs::path& p, const json& j) {
  const std::string text = j.dump(1);
  std::ofstream(p) << text;
  return text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::Io;
}

}  // namespace

TEST_CASE("registry lists every experiment with a figure reference") {
  const std::vector<std::string> names = {"fig1bc", "figS2", "fig1d", "fig2a", "fig2b",
                                          "fig3a", "fig3b", "table_s1", "gap_sweep", "lifetime"};
  CHECK(registry().size() == names.size());
  for (const auto& n : names) {
    const Experiment* e = find_experiment(n);
    REQUIRE(e != nullptr);
    const bool cites = e->description.find("Fig.") != std::string::npos ||
                       e->description.find("Table") != std::string::npos;
    CHECK_MESSAGE(cites, n);
  }
  CHECK(find_experiment("fig9") == nullptr);
  std::ostringstream out;
  list_command(out);
  CHECK(out.str().find("fig2b") != std::string::npos);
}

TEST_CASE("every registered experiment validates with defaults") {
  TempDir tmp;
  for (const auto& e : registry()) {
    const fs::path cfg = tmp.path / (e.name + ".json");
    write(cfg, {{"experiment", e.name}, {"output_dir", (tmp.path / e.name).string()}, {"seeds", 3}});
    std::ostringstream out, err;
    CHECK_MESSAGE(validate_command(cfg.string(), {}, out, err) == kExitOk, e.name << err.str());
    const json j = json::parse(out.str());
    CHECK(j["valid"] == true);
    CHECK_FALSE(fs::exists(tmp.path / e.name));
  }
}

TEST_CASE("unknown keys and bad values are config errors") {
  const json base = {{"experiment", "fig2a"}, {"output_dir", "x"}};
  auto with = [&](const std::string& k, const json& v) {
    json j = base;
    j[k] = v;
    return j;
  };
  CHECK(code_of([&] { parse_config(with("colour", 1)); }) == ErrorCode::Config);
  CHECK(code_of([&] { parse_config(with("params", {{"Jay", 1}})); }) == ErrorCode::Config);
  CHECK(code_of([&] { parse_config(with("integrator", {{"method", "euler"}})); }) ==
        ErrorCode::Config);
  CHECK(code_of([&] { parse_config(with("params", {{"J", 1}, {"J_over_gcol", 2}})); }) ==
        ErrorCode::Config);
  CHECK(code_of([&] { parse_config(with("seeds", -4)); }) == ErrorCode::Config);
  CHECK(code_of([&] { parse_config(json::array()); }) == ErrorCode::Config);
  CHECK(code_of([&] { parse_config({{"output_dir", "x"}}); }) == ErrorCode::Config);

  const ExperimentConfig c = parse_config(with("options", {{"n_maxx", 3}}));
  CHECK(code_of([&] { check_blocks(*find_experiment("fig2a"), c); }) == ErrorCode::Config);
  const ExperimentConfig d = parse_config(with("thermal", {{"T", 0.1}}));
  CHECK(code_of([&] { check_blocks(*find_experiment("fig2a"), d); }) == ErrorCode::Config);
  CHECK_NOTHROW(check_blocks(*find_experiment("lifetime"), d));
}

TEST_CASE("frequencies carry explicit units") {
  CHECK(frequency(3.0, "x") == 3.0);
  CHECK(frequency({{"value", 1.2}, {"unit", "kHz"}}, "x") == doctest::Approx(2.0 * M_PI * 1200.0));
  CHECK(frequency({{"value", 4.0}, {"unit", "mHz"}}, "x") == doctest::Approx(2.0 * M_PI * 4e-3));
  CHECK(frequency({{"value", 7.0}, {"unit", "rad/s"}}, "x") == 7.0);
  CHECK(code_of([] { frequency({{"value", 1.0}, {"unit", "furlong"}}, "x"); }) == ErrorCode::Config);
  CHECK(code_of([] { frequency({{"value", 1.0}}, "x"); }) == ErrorCode::Config);
  CHECK(code_of([] { frequency("fast", "x"); }) == ErrorCode::Config);
}

TEST_CASE("parameter resolution") {
  const json defaults = {{"N", 100}, {"g_col", 1.0},        {"J_over_gcol", 3.0},
                         {"Delta_over_gcol", 20.0},          {"kappa_p_over_chi", 5.0},
                         {"kappa_s_over_kappa_p", 0.3},      {"alpha_sq", 1.0}};
  const ResolvedParams a = resolve_params(json::object(), defaults);
  CHECK(a.rates.chi == doctest::Approx(3.0 / 400.0));
  CHECK(a.p.kappa_p == doctest::Approx(5.0 * a.rates.chi));
  CHECK(a.p.kappa_s == doctest::Approx(0.3 * a.p.kappa_p));
  CHECK(a.alpha_sq == doctest::Approx(1.0));
  CHECK(a.rates.kappa_2at == doctest::Approx(0.8 * a.rates.chi));

  // a value replaces the default ratio of the same group
  const ResolvedParams b = resolve_params({{"J", 2.0}}, defaults);
  CHECK(b.p.J == 2.0);
  const ResolvedParams c = resolve_params({{"g", 0.1}}, defaults);
  CHECK(c.rates.g_col == doctest::Approx(1.0));
  CHECK(resolve_params({{"compensate", true}}, defaults).compensated);
  CHECK(code_of([&] { resolve_params({{"Delta_over_gcol", 0.0}}, defaults); }) == ErrorCode::Config);
  CHECK(code_of([&] { resolve_params({{"N", 0}}, defaults); }) == ErrorCode::Config);
  CHECK(code_of([&] { resolve_params({{"alpha_sq", -1.0}}, defaults); }) == ErrorCode::Config);
}

TEST_CASE("seed policy") {
  const ExperimentConfig c = parse_config({{"experiment", "fig3a"}, {"output_dir", "x"}, {"seeds", 11}});
  SeedMap a = seed_policy(c), b = seed_policy(c);
  CHECK_FALSE(a.drawn);
  CHECK(a.stream("delta_j") == b.stream("delta_j"));
  CHECK(a.stream("delta_j") != a.stream("trajectory/n2_traj0"));
  CHECK(a.to_json()["streams"].size() == 2);

  const auto s1 = sample_lorentzian(16, 1.0, a.stream("delta_j"));
  const auto s2 = sample_lorentzian(16, 1.0, b.stream("delta_j"));
  CHECK(s1 == s2);

  const ExperimentConfig d = parse_config({{"experiment", "fig3a"}, {"output_dir", "x"}});
  const SeedMap m = seed_policy(d);
  CHECK(m.drawn);
  CHECK(m.to_json()["master_drawn"] == true);
  CHECK(m.to_json()["master"] == m.master);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("run writes artifacts and a complete manifest") {
  TempDir tmp;
  const fs::path out = tmp.path / "table";
  const std::string text =
      write(tmp.path / "t.json", {{"experiment", "table_s1"}, {"output_dir", out.string()},
                                  {"thermal", {{"T", 0.1}}}});
  std::ostringstream o, e;
  REQUIRE(run_command((tmp.path / "t.json").string(), {}, o, e) == kExitOk);
  CHECK(slurp(out / "config.json") == text);
  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["config_sha256"] == sha256_hex(text));
  CHECK(manifest["experiment"] == "table_s1");
  std::size_t listed = 0;
  for (const auto& f : manifest["files"]) {
    const std::string bytes = slurp(out / f["name"].get<std::string>());
    CHECK(f["sha256"] == sha256_hex(bytes));
    CHECK(f["bytes"] == bytes.size());
    ++listed;
  }
  std::size_t on_disk = 0;
  for (const auto& entry : fs::directory_iterator(out)) on_disk += entry.path().filename() != "manifest.json";
  CHECK(listed == on_disk);
  const json resolved = json::parse(slurp(out / "resolved_config.json"));
  CHECK(resolved["thermal"]["T"] == 0.1);
  CHECK(resolved["seeds"].contains("master"));
  for (const auto& entry : fs::directory_iterator(tmp.path))
    CHECK(entry.path().filename().string().find(".partial-") == std::string::npos);
}

TEST_CASE("failures leave no artifacts") {
  TempDir tmp;
  const fs::path out = tmp.path / "never";
  write(tmp.path / "bad.json", {{"experiment", "fig2a"}, {"output_dir", out.string()},
                                {"options", {{"n_max", "many"}}}});
  std::ostringstream o, e;
  CHECK(run_command((tmp.path / "bad.json").string(), {}, o, e) == kExitConfig);
  const json err = json::parse(e.str());
  CHECK(err["exit_code"] == kExitConfig);
  CHECK(err["error"]["kind"] == "config");
  CHECK_FALSE(fs::exists(out));

  std::ofstream(tmp.path / "broken.json") << "{\"experiment\": ";
  std::ostringstream o2, e2;
  CHECK(run_command((tmp.path / "broken.json").string(), {}, o2, e2) == kExitConfig);

  // output_dir taken by a regular file: a runtime failure
  std::ofstream(tmp.path / "taken") << "x";
  write(tmp.path / "rt.json", {{"experiment", "table_s1"}, {"output_dir", (tmp.path / "taken").string()}});
  std::ostringstream o3, e3;
  CHECK(run_command((tmp.path / "rt.json").string(), {}, o3, e3) == kExitRuntime);
  CHECK(json::parse(e3.str())["error"]["kind"] == "runtime");
  for (const auto& entry : fs::directory_iterator(tmp.path))
    CHECK(entry.path().filename().string().find(".partial-") == std::string::npos);
}

TEST_CASE("same config and seed reproduce identical outputs") {
  TempDir tmp;
  const json cfg = {{"experiment", "fig3a"},
                    {"seeds", 21},
                    {"params", {{"N", 4}, {"alpha_sq", 0.4}}},
                    {"options", {{"ratios", {2.0}}, {"t_end_kappa_2at", 2.0}, {"points", 5}}}};
  for (const char* run : {"a", "b"}) {
    json c = cfg;
    c["output_dir"] = (tmp.path / run).string();
    write(tmp.path / (std::string(run) + ".json"), c);
    std::ostringstream o, e;
    REQUIRE(run_command((tmp.path / (std::string(run) + ".json")).string(), {}, o, e) == kExitOk);
  }
  for (const char* f : {"fig3a_eta.csv", "fig3a_detunings.csv", "report.json"})
    CHECK_MESSAGE(slurp(tmp.path / "a" / f) == slurp(tmp.path / "b" / f), f);
}

TEST_CASE("desk default for fig1d and the full flag") {
  TempDir tmp;
  write(tmp.path / "d.json", {{"experiment", "fig1d"}, {"output_dir", (tmp.path / "o").string()}});
  std::ostringstream o1, e1, o2, e2;
  REQUIRE(validate_command((tmp.path / "d.json").string(), {}, o1, e1) == kExitOk);
  CHECK(json::parse(o1.str())["resolved"]["params"]["N"] == 20);
  REQUIRE(validate_command((tmp.path / "d.json").string(), {true}, o2, e2) == kExitOk);
  CHECK(json::parse(o2.str())["resolved"]["params"]["N"] == 100);
}
