/*
 * Copyright 2026 The dcfsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// sim: run or sweep contention experiments from a JSON config.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dcfsim/config.hpp"
#include "dcfsim/metrics.hpp"
#include "dcfsim/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

unsigned
default_jobs()
{
  if (const char* env = std::getenv("SIM_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) {
        return static_cast<unsigned>(v);
      }
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring SIM_JOBS=" << env << "\n";
  }
  return 1;
}

void
print_paths(const std::vector<std::filesystem::path>& files)
{
  for (const auto& f : files) {
    std::cout << f.string() << "\n";
  }
}

}  // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Discrete-event simulator of Wi-Fi DCF contention (BEB, DB, IYT backoff)"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  bool dump_deployment = false;
  bool trace = false;
  unsigned jobs = default_jobs();
  std::string param;
  bool keep_runs = false;

  auto* run = app.add_subcommand("run", "Run n_sim deployments of one experiment");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--seed", seed, "Override experiment.master_seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--dump-deployment", dump_deployment, "Write each deployment as JSON");
  run->add_flag("--trace", trace, "Write the event trace of each run");
  run->add_option("--jobs", jobs, "Parallel runs (default: SIM_JOBS or 1)")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over values of one parameter");
  sweep->add_option("--config", config_path, "JSON config file")->required();
  sweep->add_option("--param", param, "name=a..b or name=v1,v2,...")->required();
  sweep->add_option("--seed", seed, "Override experiment.master_seed");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--jobs", jobs, "Parallel runs (default: SIM_JOBS or 1)")->check(CLI::PositiveNumber);
  sweep->add_flag("--keep-runs", keep_runs, "Also write per-run metric files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    dcfsim::RunConfig config = dcfsim::load_config(config_path);
    if (seed) {
      config.experiment.master_seed = *seed;
    }
    dcfsim::RunnerOptions options;
    options.out_dir = out_dir;
    options.jobs = jobs;
    options.dump_deployment = dump_deployment;
    options.trace = trace;
    options.progress = [](std::string_view line) { std::cerr << line << "\n"; };

    if (*run) {
      print_paths(dcfsim::run_and_export(config, options));
    } else {
      const auto p = dcfsim::parse_sweep_param(param, config);
      print_paths(dcfsim::run_sweep(config, p, options, keep_runs));
    }
  } catch (const dcfsim::ConfigError& e) {
    for (const auto& msg : e.errors()) {
      std::cerr << "config error: " << msg << "\n";
    }
    return kExitConfig;
  } catch (const dcfsim::ScenarioError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dcfsim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
