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


#include "catsim/cli/runner.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "catsim/cli/config.hpp"
#include "catsim/cli/experiments.hpp"
#include "catsim/diagnostics.hpp"
#include "catsim/dynamics.hpp"
#include "catsim/error.hpp"
#include "catsim/io.hpp"
#include "catsim/version.hpp"

namespace fs = std::filesystem;

namespace catsim::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::Io, "SHA-256 failed");
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return s.str();
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void report_error(std::ostream& err, int exit_code, const std::string& code,
                  const std::string& message) {
  json e = {{"error",
             {{"kind", exit_code == kExitConfig ? "config" : "runtime"},
              {"code", code},
              {"message", message}}},
            {"exit_code", exit_code}};
  err << e.dump() << '\n';
}

struct Prepared {
  ExperimentConfig cfg;
  std::string raw_text;
  const Experiment* exp = nullptr;
  SeedMap seeds;
  json resolved;
};

// Everything that can be checked without simulating. Throws Config errors.
Prepared prepare(const std::string& path, const RunOptions& opts) {
  Prepared p;
  try {
    p.cfg = load_config(path, &p.raw_text);
    p.exp = find_experiment(p.cfg.experiment);
    if (!p.exp) fail(ErrorCode::Config, "unknown experiment '" + p.cfg.experiment + "'");
    check_blocks(*p.exp, p.cfg);
    p.seeds = seed_policy(p.cfg);
    RunContext ctx{p.cfg, opts.full, true, "", p.seeds};
    p.exp->run(ctx);
    p.resolved = ctx.resolved;
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    fail(ErrorCode::Config, std::string("config rejected: ") + e.what());
  }
  return p;
}

json resolved_document(const Prepared& p, const RunContext& ctx, bool full) {
  json r = ctx.resolved;
  r["experiment"] = p.cfg.experiment;
  r["output_dir"] = p.cfg.output_dir;
  r["full"] = full;
  r["options"] = p.cfg.options;
  r["seeds"] = ctx.seeds.to_json();
  return r;
}

void write_json(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace

void list_command(std::ostream& out) {
  for (const auto& e : registry()) out << std::left << std::setw(10) << e.name << "  " << e.description << '\n';
}

int validate_command(const std::string& path, const RunOptions& opts, std::ostream& out,
                     std::ostream& err) {
  try {
    const Prepared p = prepare(path, opts);
    json r = p.resolved;
    r["experiment"] = p.cfg.experiment;
    out << json{{"valid", true}, {"resolved", r}}.dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    report_error(err, kExitConfig, std::string(to_string(e.code())), e.what());
    return kExitConfig;
  }
}

int run_command(const std::string& path, const RunOptions& opts, std::ostream& out,
                std::ostream& err) {
  Prepared p;
  try {
    p = prepare(path, opts);
  } catch (const Error& e) {
    report_error(err, kExitConfig, std::string(to_string(e.code())), e.what());
    return kExitConfig;
  }

  const fs::path target = fs::absolute(p.cfg.output_dir);
  const fs::path staging = target.parent_path() /
                           (target.filename().string() + ".partial-" + std::to_string(getpid()));
  auto cleanup = [&] {
    std::error_code ec;
    fs::remove_all(staging, ec);
  };
  const auto t0 = std::chrono::steady_clock::now();
  take_warnings();
  try {
    if (fs::exists(target) && !fs::is_directory(target))
      fail(ErrorCode::Io, "output_dir exists and is not a directory: " + target.string());
    fs::create_directories(staging);

    RunContext ctx{p.cfg, opts.full, false, staging.string(), p.seeds};
    err << "catsim: running " << p.exp->name << '\n';
    p.exp->run(ctx);

    write_text_file(ctx.file("config.json"), p.raw_text);
    write_json(ctx.file("resolved_config.json"), resolved_document(p, ctx, opts.full));
    write_json(ctx.file("report.json"), ctx.report);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json files = json::array();
    for (const auto& f : ctx.files) {
      const std::string bytes = read_file(staging / f);
      files.push_back({{"name", f}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    const json manifest = {{"experiment", p.exp->name},
                           {"software", "catsim"},
                           {"version", kVersion},
                           {"config_sha256", sha256_hex(p.raw_text)},
                           {"wall_time_s", wall},
                           {"threads", default_thread_count()},
                           {"full", opts.full},
                           {"seeds", ctx.seeds.to_json()},
                           {"resolved_params", ctx.resolved.value("params", json::object())},
                           {"warnings", take_warnings()},
                           {"files", files}};
    write_json((staging / "manifest.json").string(), manifest);

    fs::create_directories(target);
    for (const auto& f : ctx.files) fs::rename(staging / f, target / f);
    fs::rename(staging / "manifest.json", target / "manifest.json");
    cleanup();
    out << (target / "manifest.json").string() << '\n';
    return kExitOk;
  } catch (const Error& e) {
    cleanup();
    const int code = e.code() == ErrorCode::Config ? kExitConfig : kExitRuntime;
    report_error(err, code, std::string(to_string(e.code())), e.what());
    return code;
  } catch (const std::exception& e) {
    cleanup();
    report_error(err, kExitRuntime, "internal", e.what());
    return kExitRuntime;
  }
}

}  // namespace catsim::cli
