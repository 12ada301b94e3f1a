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

#ifndef DCFSIM_RUNNER_HPP
#define DCFSIM_RUNNER_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcfsim/config.hpp"
#include "dcfsim/metrics.hpp"
#include "dcfsim/simulation.hpp"

namespace dcfsim {

/// Everything one deployment produced.
struct RunResult
{
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  Deployment deployment;
  std::vector<MetricRecord> records;
  RunSummary summary;
  std::vector<TxAttempt> attempts;
  std::vector<TraceRecord> trace;
};

/// Generates and simulates deployment \p run_index. The stream is derived from
/// the run seed alone, so a run reproduces from (config, seed).
RunResult run_single(const RunConfig& config, int run_index, bool trace = false);

nlohmann::json to_json(const Deployment& deployment);

struct RunnerOptions
{
  std::filesystem::path out_dir = ".";
  unsigned jobs = 1;
  bool dump_deployment = false;
  bool trace = false;
  /// When false nothing is written per run; only digests are returned.
  bool write_runs = true;
  /// Receives one line per finished run; calls are serialized.
  std::function<void(std::string_view)> progress;
};

/// Condensed view of a run kept for aggregation.
struct RunDigest
{
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  RunSummary summary;
  std::vector<std::filesystem::path> files;
};

/// Runs n_sim deployments, exporting each under <out>/<prefix>_run<k>.
/// Results are returned in run order regardless of the job count.
std::vector<RunDigest> run_experiment(const RunConfig& config, const RunnerOptions& options);

/// Per-policy statistics over (run, BSS) pairs.
nlohmann::json aggregate_json(const RunConfig& config, const std::vector<RunDigest>& runs);

/// run_experiment plus <out>/<prefix>_aggregate_summary.json. Returns every file written.
std::vector<std::filesystem::path> run_and_export(const RunConfig& config,
                                                  const RunnerOptions& options);

struct SweepParam
{
  std::string name;  // as given
  std::string path;  // dotted path in the config document
  std::vector<std::string> values;
};

/// Parses name=a..b (inclusive integer range) or name=v1,v2,... (braces optional).
/// Throws ConfigError for malformed specs or names absent from the config.
SweepParam parse_sweep_param(std::string_view spec, const RunConfig& base);

/// Base config with one value substituted, re-validated. Throws ConfigError.
RunConfig apply_sweep_value(const RunConfig& base, const SweepParam& param,
                            const std::string& value);

extern const char* const kSweepHeader;

/// One experiment per value; writes <out>/<prefix>_<name>_<value>_aggregate.json per
/// value and <out>/sweep.csv. Per-run files are kept only with \p keep_runs.
std::vector<std::filesystem::path> run_sweep(const RunConfig& base, const SweepParam& param,
                                             const RunnerOptions& options, bool keep_runs);

}  // namespace dcfsim

#endif  // DCFSIM_RUNNER_HPP
