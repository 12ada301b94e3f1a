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

#ifndef DCFSIM_METRICS_HPP
#define DCFSIM_METRICS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcfsim/backoff.hpp"
#include "dcfsim/mac.hpp"
#include "dcfsim/sim_time.hpp"

namespace dcfsim {

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Observables of one BSS over one reporting interval.
struct MetricRecord
{
  std::size_t run_id = 0;
  std::string scenario;
  std::string policy;
  BssId bss{};
  std::size_t interval_index = 0;
  double throughput_bps = 0.0;
  std::vector<std::int64_t> access_delay_samples_ns;
  std::int64_t rts_attempts = 0;
  std::int64_t rts_losses = 0;
  std::int64_t acked_bits = 0;
};

struct SummaryStats
{
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  std::size_t count = 0;
  std::vector<std::pair<double, double>> cdf_points;
};

struct CollectorBss
{
  BssId bss{};
  PolicyKind policy = PolicyKind::Beb;
};

/// Per-run accumulator. Bits are credited to the interval holding the TXOP end.
class MetricsCollector
{
public:
  MetricsCollector(std::size_t run_id, std::string scenario, std::vector<CollectorBss> bsss,
                   SimDuration interval, std::size_t interval_count);

  void record_txop(const TxAttempt& attempt);

  /// Finalizes throughput of interval \p index. Idempotent.
  void close_interval(std::size_t index);

  /// Closes every interval not yet closed.
  void finish();

  /// Interval-major, BSS order within an interval.
  const std::vector<MetricRecord>& records() const noexcept { return m_records; }

  std::size_t interval_count() const noexcept { return m_interval_count; }
  SimDuration interval() const noexcept { return m_interval; }

private:
  MetricRecord& slot(std::size_t bss_index, SimTime t);

  std::vector<CollectorBss> m_bsss;
  SimDuration m_interval;
  std::size_t m_interval_count;
  std::vector<MetricRecord> m_records;
  std::vector<bool> m_closed;
};

/// 100 * losses / attempts, or nullopt when there were no attempts.
std::optional<double> loss_percentage(std::span<const MetricRecord> records);

/// Quartiles interpolate linearly between order statistics. The CDF is the
/// empirical distribution at each distinct value; \p max_cdf_points > 0 thins
/// it to that many points (always keeping the last). Throws std::invalid_argument
/// on empty input.
SummaryStats summarize(std::span<const double> samples, std::size_t max_cdf_points = 0);

nlohmann::json to_json(const SummaryStats& stats);

/// Per-BSS and whole-run statistics for one run.
struct BssSummary
{
  BssId bss{};
  std::string policy;
  SummaryStats throughput_bps;
  std::optional<SummaryStats> access_delay_ns;
  std::int64_t rts_attempts = 0;
  std::int64_t rts_losses = 0;
  std::int64_t acked_bits = 0;
  std::optional<double> loss_pct;
};

struct RunSummary
{
  std::vector<BssSummary> per_bss;
  SummaryStats throughput_bps;
  std::optional<SummaryStats> access_delay_ns;
  std::optional<double> loss_pct;
};

RunSummary summarize_run(std::span<const MetricRecord> records);

struct ExportMeta
{
  std::size_t run_id = 0;
  std::string scenario;
  std::uint64_t seed = 0;
  nlohmann::json config;
};

inline constexpr const char* kIntervalsHeader =
  "run_id,scenario,policy,bss_id,interval_index,throughput_bps,rts_attempts,rts_losses";
inline constexpr const char* kDelaysHeader = "run_id,scenario,policy,bss_id,interval_index,access_delay_ns";

/// Writes <prefix>_intervals.csv, <prefix>_delays.csv and <prefix>_summary.json.
/// Throws IoError when a file cannot be written.
std::vector<std::filesystem::path> export_run(std::span<const MetricRecord> records,
                                              const RunSummary& summary, const ExportMeta& meta,
                                              const std::string& path_prefix);

/// Locale-independent shortest round-trip formatting.
std::string format_number(double value);

/// Writes \p text to \p path, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace dcfsim

#endif  // DCFSIM_METRICS_HPP
