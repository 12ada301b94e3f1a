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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>

#include "dcfsim/config.hpp"
#include "dcfsim/runner.hpp"

using namespace dcfsim;
namespace fs = std::filesystem;

namespace {

RunConfig
small(ExperimentKind kind = ExperimentKind::Overlap, int n_bss = 3, int n_sim = 3)
{
  RunConfig c;
  c.experiment.kind = kind;
  c.experiment.n_bss = n_bss;
  c.experiment.n_sim = n_sim;
  c.experiment.horizon_s = 2.0;
  c.output_prefix = "t";
  return resolve_config(to_json(c));
}

struct TempDir
{
  fs::path path;

  explicit TempDir(const std::string& tag)
    : path(fs::temp_directory_path() / ("dcfsim_runner_" + tag))
  {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::set<std::string>
names(const fs::path& dir)
{
  std::set<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    out.insert(e.path().filename().string());
  }
  return out;
}

}  // namespace

TEST_CASE("sweep specs: ranges, lists, braces and aliases")
{
  const RunConfig base = small();
  auto p = parse_sweep_param("n_bss=1..9", base);
  CHECK(p.path == "experiment.n_bss");
  CHECK(p.values.size() == 9);
  CHECK(p.values.front() == "1");
  CHECK(p.values.back() == "9");

  CHECK(parse_sweep_param("n_bss=1..1", base).values == std::vector<std::string>{"1"});

  p = parse_sweep_param("policy={beb,db,iyt}", base);
  CHECK(p.path == "policy.kind");
  CHECK(p.values == std::vector<std::string>{"beb", "db", "iyt"});

  p = parse_sweep_param("radio.cca_dbm=-85,-82", base);
  CHECK(p.path == "radio.cca_dbm");
  CHECK(p.values.size() == 2);
}

TEST_CASE("malformed or unknown sweep specs raise ConfigError")
{
  const RunConfig base = small();
  for (const char* bad : {"bogus=1..3", "n_bss=3..1", "n_bss=a..b", "n_bss", "=1",
                          "n_bss=1,,2", "n_bss=", "radio=1"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_sweep_param(bad, base), ConfigError);
  }
  try {
    parse_sweep_param("bogus=1", base);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("unknown sweep parameter: bogus") != std::string::npos);
  }
}

TEST_CASE("sweep values are substituted and re-validated")
{
  const RunConfig base = small();
  auto p = parse_sweep_param("policy=iyt", base);
  CHECK(apply_sweep_value(base, p, "iyt").policy == PolicyKind::Iyt);
  p = parse_sweep_param("cw0=8", base);
  CHECK(apply_sweep_value(base, p, "8").policy_params.cw0 == 8);
  p = parse_sweep_param("n_bss=4", base);
  CHECK(apply_sweep_value(base, p, "4").experiment.n_bss == 4);
  CHECK_THROWS_AS(apply_sweep_value(base, p, "0"), ConfigError);
  p = parse_sweep_param("policy=x", base);
  CHECK_THROWS_AS(apply_sweep_value(base, p, "x"), ConfigError);
}

TEST_CASE("run_single is a pure function of (config, run index)")
{
  const RunConfig c = small();
  const RunResult a = run_single(c, 1);
  const RunResult b = run_single(c, 1);
  CHECK(a.seed == c.experiment.seed_for(1));
  CHECK(a.run_id == 1);
  CHECK(a.deployment.bsss.size() == 3);
  CHECK(a.attempts.size() == b.attempts.size());
  CHECK(to_json(a.deployment) == to_json(b.deployment));
  CHECK(a.summary.throughput_bps.mean == b.summary.throughput_bps.mean);
}

TEST_CASE("run_and_export writes per-run files and the aggregate")
{
  TempDir dir("export");
  const RunConfig c = small();
  RunnerOptions o;
  o.out_dir = dir.path;
  o.dump_deployment = true;
  const auto files = run_and_export(c, o);
  const auto got = names(dir.path);
  for (int k = 0; k < 3; ++k) {
    for (const char* s : {"_intervals.csv", "_delays.csv", "_summary.json", "_deployment.json"}) {
      CHECK(got.count("t_run" + std::to_string(k) + s) == 1);
    }
  }
  CHECK(got.count("t_aggregate_summary.json") == 1);
  CHECK(files.size() == got.size());

  std::istringstream csv(slurp(dir.path / "t_run0_intervals.csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header == kIntervalsHeader);
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) {
    ++rows;
  }
  CHECK(rows == 3 * 2);  // BSSs x intervals

  const auto agg = nlohmann::json::parse(slurp(dir.path / "t_aggregate_summary.json"));
  CHECK(agg.at("runs").size() == 3);
  CHECK(agg.at("n_sim") == 3);
  CHECK(agg.at("by_policy").contains("beb"));
  const auto& pool = agg.at("aggregate");
  for (const char* key : {"throughput_mean_bps", "access_delay_mean_ns", "access_delay_max_ns",
                          "loss_pct", "rts_attempts", "rts_losses", "pooled_loss_pct"}) {
    CHECK(pool.contains(key));
  }
  CHECK(pool.at("throughput_mean_bps").at("count") == 9);  // runs x BSSs

  const auto dep = nlohmann::json::parse(slurp(dir.path / "t_run2_deployment.json"));
  CHECK(dep.at("seed") == c.experiment.seed_for(2));
  CHECK(dep.at("bss").size() == 3);
}

TEST_CASE("outputs are byte-identical across job counts")
{
  TempDir one("jobs1");
  TempDir three("jobs3");
  const RunConfig c = small(ExperimentKind::Overlap, 4, 4);
  RunnerOptions o;
  o.trace = true;
  o.out_dir = one.path;
  o.jobs = 1;
  run_and_export(c, o);
  o.out_dir = three.path;
  o.jobs = 3;
  std::size_t progress_lines = 0;
  o.progress = [&](std::string_view) { ++progress_lines; };
  run_and_export(c, o);
  CHECK(progress_lines == 4);
  const auto a = names(one.path);
  REQUIRE(a == names(three.path));
  for (const auto& n : a) {
    INFO(n);
    CHECK(slurp(one.path / n) == slurp(three.path / n));
  }
}

TEST_CASE("write_runs=false returns digests without touching the disk")
{
  TempDir dir("digest");
  RunnerOptions o;
  o.out_dir = dir.path;
  o.write_runs = false;
  const auto runs = run_experiment(small(), o);
  CHECK(runs.size() == 3);
  CHECK(runs[2].run_id == 2);
  CHECK(runs[2].files.empty());
  CHECK(names(dir.path).empty());
}

TEST_CASE("policy sweep writes one aggregate per value and a long-format CSV")
{
  TempDir dir("sweep");
  RunConfig c = small(ExperimentKind::Overlap, 1, 2);
  const SweepParam p = parse_sweep_param("policy={beb,db,iyt}", c);
  RunnerOptions o;
  o.out_dir = dir.path;
  run_sweep(c, p, o, false);
  const auto got = names(dir.path);
  CHECK(got == std::set<std::string>{"t_policy_beb_aggregate.json", "t_policy_db_aggregate.json",
                                     "t_policy_iyt_aggregate.json", "sweep.csv"});
  std::istringstream csv(slurp(dir.path / "sweep.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == kSweepHeader);
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    CHECK(line.rfind("policy,", 0) == 0);
    ++rows;
  }
  CHECK(rows == 3 * 2);  // values x runs x 1 BSS
  const auto agg = nlohmann::json::parse(slurp(dir.path / "t_policy_db_aggregate.json"));
  CHECK(agg.at("value") == "db");
  CHECK(agg.at("by_policy").contains("db"));
}

TEST_CASE("an invalid sweep point fails before anything runs")
{
  TempDir dir("badsweep");
  const RunConfig c = small();
  SweepParam p = parse_sweep_param("n_bss=2,0", c);
  RunnerOptions o;
  o.out_dir = dir.path;
  CHECK_THROWS_AS(run_sweep(c, p, o, true), ConfigError);
  CHECK(names(dir.path).empty());
}
