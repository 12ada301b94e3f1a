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

#include "dcfsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace dcfsim {

namespace {

std::string
run_prefix(const RunConfig& config, const RunnerOptions& options, std::size_t k)
{
  return (options.out_dir / (config.output_prefix + "_run" + std::to_string(k))).string();
}

RunDigest
execute(const RunConfig& config, const RunnerOptions& options, std::size_t k)
{
  RunResult r = run_single(config, static_cast<int>(k), options.trace);
  RunDigest d{r.run_id, r.seed, std::move(r.summary), {}};
  if (!options.write_runs) {
    return d;
  }
  const std::string prefix = run_prefix(config, options, k);
  ExportMeta meta{r.run_id, std::string(to_string(config.experiment.kind)), r.seed, to_json(config)};
  d.files = export_run(r.records, d.summary, meta, prefix);
  if (options.dump_deployment) {
    const std::filesystem::path p = prefix + "_deployment.json";
    write_text_file(p, to_json(r.deployment).dump(2) + "\n");
    d.files.push_back(p);
  }
  if (options.trace) {
    const std::filesystem::path p = prefix + "_trace.csv";
    write_text_file(p, "time_ns,bss_id,event,detail\n" + format_trace(r.trace));
    d.files.push_back(p);
  }
  return d;
}

void
ensure_dir(const std::filesystem::path& dir)
{
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

std::string
progress_line(const RunConfig& config, const RunDigest& d, std::size_t finished, std::size_t n)
{
  std::ostringstream line;
  line << config.output_prefix << ": " << finished << "/" << n << " run " << d.run_id
       << " seed=" << d.seed << " throughput_mean_bps=" << format_number(d.summary.throughput_bps.mean);
  if (d.summary.loss_pct) {
    line << " loss_pct=" << format_number(*d.summary.loss_pct);
  }
  return line.str();
}

nlohmann::json
optional_stats(std::vector<double> values)
{
  if (values.empty()) {
    return nullptr;
  }
  return to_json(summarize(values));
}

}  // namespace

RunResult
run_single(const RunConfig& config, int run_index, bool trace)
{
  RunResult r;
  r.run_id = static_cast<std::size_t>(run_index);
  r.seed = config.experiment.seed_for(run_index);
  Rng rng = make_run_rng(r.seed, 0);
  Deployment dep = build_deployment(config, run_index, rng);
  Simulation sim(dep, make_simulation_config(config, r.run_id, trace), std::move(rng));
  sim.run();
  r.deployment = std::move(dep);
  r.records = sim.metrics().records();
  r.summary = summarize_run(r.records);
  r.attempts = sim.attempts();
  r.trace = sim.trace();
  return r;
}

nlohmann::json
to_json(const Deployment& d)
{
  nlohmann::json bsss = nlohmann::json::array();
  for (const auto& b : d.bsss) {
    bsss.push_back({{"bss_id", to_underlying(b.id)},
                    {"ap", {b.ap.x, b.ap.y}},
                    {"sta", {b.sta.x, b.sta.y}},
                    {"channel", b.channel},
                    {"policy", std::string(to_string(b.policy))},
                    {"cw0", b.params.cw0},
                    {"n_max", b.params.n_max},
                    {"db_base", b.params.db_base}});
  }
  return {{"seed", d.seed}, {"width_m", d.width_m}, {"height_m", d.height_m}, {"bss", bsss}};
}

std::vector<RunDigest>
run_experiment(const RunConfig& config, const RunnerOptions& options)
{
  if (options.write_runs) {
    ensure_dir(options.out_dir);
  }
  const auto n = static_cast<std::size_t>(config.experiment.n_sim);
  std::vector<RunDigest> out(n);
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(n)));

  std::atomic<std::size_t> next{0};
  std::mutex lock;
  std::exception_ptr failure;
  std::size_t finished = 0;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n) {
        return;
      }
      try {
        RunDigest d = execute(config, options, k);
        std::lock_guard<std::mutex> g(lock);
        if (options.progress) {
          options.progress(progress_line(config, d, ++finished, n));
        }
        out[k] = std::move(d);
      } catch (...) {
        std::lock_guard<std::mutex> g(lock);
        if (!failure) {
          failure = std::current_exception();
        }
        next = n;
        return;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return out;
}

nlohmann::json
aggregate_json(const RunConfig& config, const std::vector<RunDigest>& runs)
{
  struct Pool
  {
    std::vector<double> throughput, delay_mean, delay_max, loss;
    std::int64_t attempts = 0, losses = 0;
  };
  std::vector<std::pair<std::string, Pool>> pools;
  auto pool_for = [&](const std::string& policy) -> Pool& {
    for (auto& [name, p] : pools) {
      if (name == policy) {
        return p;
      }
    }
    return pools.emplace_back(policy, Pool{}).second;
  };
  Pool all;
  nlohmann::json run_list = nlohmann::json::array();
  for (const auto& r : runs) {
    run_list.push_back({{"run_id", r.run_id},
                        {"seed", r.seed},
                        {"throughput_mean_bps", r.summary.throughput_bps.mean},
                        {"loss_pct", r.summary.loss_pct ? nlohmann::json(*r.summary.loss_pct)
                                                        : nlohmann::json(nullptr)}});
    for (const auto& b : r.summary.per_bss) {
      for (Pool* p : {&pool_for(b.policy), &all}) {
        p->throughput.push_back(b.throughput_bps.mean);
        if (b.access_delay_ns) {
          p->delay_mean.push_back(b.access_delay_ns->mean);
          p->delay_max.push_back(b.access_delay_ns->max);
        }
        if (b.loss_pct) {
          p->loss.push_back(*b.loss_pct);
        }
        p->attempts += b.rts_attempts;
        p->losses += b.rts_losses;
      }
    }
  }
  auto pool_json = [](const Pool& p) {
    return nlohmann::json{
      {"throughput_mean_bps", optional_stats(p.throughput)},
      {"access_delay_mean_ns", optional_stats(p.delay_mean)},
      {"access_delay_max_ns", optional_stats(p.delay_max)},
      {"loss_pct", optional_stats(p.loss)},
      {"rts_attempts", p.attempts},
      {"rts_losses", p.losses},
      {"pooled_loss_pct", p.attempts > 0 ? nlohmann::json(100.0 * static_cast<double>(p.losses) /
                                                          static_cast<double>(p.attempts))
                                         : nlohmann::json(nullptr)}};
  };
  nlohmann::json by_policy = nlohmann::json::object();
  for (const auto& [name, p] : pools) {
    by_policy[name] = pool_json(p);
  }
  return {{"scenario", std::string(to_string(config.experiment.kind))},
          {"master_seed", config.experiment.master_seed},
          {"n_sim", config.experiment.n_sim},
          {"config", to_json(config)},
          {"runs", run_list},
          {"by_policy", by_policy},
          {"aggregate", pool_json(all)}};
}

std::vector<std::filesystem::path>
run_and_export(const RunConfig& config, const RunnerOptions& options)
{
  ensure_dir(options.out_dir);
  const auto runs = run_experiment(config, options);
  std::vector<std::filesystem::path> files;
  for (const auto& r : runs) {
    files.insert(files.end(), r.files.begin(), r.files.end());
  }
  const auto p = options.out_dir / (config.output_prefix + "_aggregate_summary.json");
  write_text_file(p, aggregate_json(config, runs).dump(2) + "\n");
  files.push_back(p);
  return files;
}

namespace {

const std::vector<std::pair<std::string, std::string>>&
sweep_aliases()
{
  static const std::vector<std::pair<std::string, std::string>> aliases{
    {"n_bss", "experiment.n_bss"},
    {"n_sim", "experiment.n_sim"},
    {"kind", "experiment.kind"},
    {"scenario", "experiment.kind"},
    {"horizon_s", "experiment.horizon_s"},
    {"master_seed", "experiment.master_seed"},
    {"seed", "experiment.master_seed"},
    {"policy", "policy.kind"},
    {"cw0", "policy.cw0"},
    {"n_max", "policy.n_max"},
    {"db_base", "policy.db_base"},
  };
  return aliases;
}

nlohmann::json::json_pointer
pointer_for(const std::string& dotted)
{
  std::string p;
  std::istringstream in(dotted);
  std::string part;
  while (std::getline(in, part, '.')) {
    p += "/" + part;
  }
  return nlohmann::json::json_pointer(p);
}

std::vector<std::string>
split_values(std::string_view text)
{
  if (text.size() >= 2 && text.front() == '{' && text.back() == '}') {
    text = text.substr(1, text.size() - 2);
  }
  const auto range = text.find("..");
  if (range != std::string_view::npos) {
    const std::string lo(text.substr(0, range));
    const std::string hi(text.substr(range + 2));
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    long long a = 0;
    long long b = 0;
    try {
      a = std::stoll(lo, &used_lo);
      b = std::stoll(hi, &used_hi);
    } catch (const std::exception&) {
      throw ConfigError({"malformed sweep range: " + std::string(text)});
    }
    if (used_lo != lo.size() || used_hi != hi.size() || a > b) {
      throw ConfigError({"malformed sweep range: " + std::string(text)});
    }
    std::vector<std::string> out;
    for (long long v = a; v <= b; ++v) {
      out.push_back(std::to_string(v));
    }
    return out;
  }
  std::vector<std::string> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    if (item.empty()) {
      throw ConfigError({"empty sweep value in: " + std::string(text)});
    }
    out.push_back(item);
  }
  if (out.empty()) {
    throw ConfigError({"no sweep values given"});
  }
  return out;
}

std::string
file_safe(std::string s)
{
  for (char& c : s) {
    if (c == '.' || c == '/' || c == ' ') {
      c = '_';
    }
  }
  return s;
}

}  // namespace

SweepParam
parse_sweep_param(std::string_view spec, const RunConfig& base)
{
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError({"sweep parameter must look like name=values: " + std::string(spec)});
  }
  SweepParam p;
  p.name = std::string(spec.substr(0, eq));
  p.path = p.name;
  for (const auto& [alias, path] : sweep_aliases()) {
    if (alias == p.name) {
      p.path = path;
    }
  }
  const nlohmann::json doc = to_json(base);
  const auto ptr = pointer_for(p.path);
  if (!doc.contains(ptr) || doc.at(ptr).is_structured()) {
    throw ConfigError({"unknown sweep parameter: " + p.name});
  }
  p.values = split_values(spec.substr(eq + 1));
  return p;
}

RunConfig
apply_sweep_value(const RunConfig& base, const SweepParam& param, const std::string& value)
{
  nlohmann::json doc = to_json(base);
  const auto ptr = pointer_for(param.path);
  nlohmann::json& slot = doc.at(ptr);
  if (slot.is_string()) {
    slot = value;
  } else {
    nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
    if (parsed.is_discarded()) {
      parsed = value;
    }
    slot = std::move(parsed);
  }
  return resolve_config(doc);
}

const char* const kSweepHeader =
  "param,value,run_id,seed,bss_id,policy,throughput_mean_bps,access_delay_mean_ns,"
  "access_delay_max_ns,rts_attempts,rts_losses,loss_pct";

std::vector<std::filesystem::path>
run_sweep(const RunConfig& base, const SweepParam& param, const RunnerOptions& options,
          bool keep_runs)
{
  ensure_dir(options.out_dir);
  // Validate every point before running any of them.
  std::vector<RunConfig> configs;
  for (const auto& v : param.values) {
    configs.push_back(apply_sweep_value(base, param, v));
  }

  std::vector<std::filesystem::path> files;
  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const std::string& value = param.values[i];
    RunConfig config = configs[i];
    const std::string tag = config.output_prefix + "_" + file_safe(param.name) + "_" + file_safe(value);
    config.output_prefix = tag;
    RunnerOptions opts = options;
    opts.write_runs = keep_runs;
    const auto runs = run_experiment(config, opts);
    for (const auto& r : runs) {
      files.insert(files.end(), r.files.begin(), r.files.end());
      for (const auto& b : r.summary.per_bss) {
        csv << param.name << ',' << value << ',' << r.run_id << ',' << r.seed << ','
            << to_underlying(b.bss) << ',' << b.policy << ',' << format_number(b.throughput_bps.mean)
            << ',' << (b.access_delay_ns ? format_number(b.access_delay_ns->mean) : "") << ','
            << (b.access_delay_ns ? format_number(b.access_delay_ns->max) : "") << ','
            << b.rts_attempts << ',' << b.rts_losses << ','
            << (b.loss_pct ? format_number(*b.loss_pct) : "") << '\n';
      }
    }
    nlohmann::json agg = aggregate_json(config, runs);
    agg["param"] = param.name;
    agg["value"] = value;
    const auto p = options.out_dir / (tag + "_aggregate.json");
    write_text_file(p, agg.dump(2) + "\n");
    files.push_back(p);
  }
  const auto p = options.out_dir / "sweep.csv";
  write_text_file(p, csv.str());
  files.push_back(p);
  return files;
}

}  // namespace dcfsim
