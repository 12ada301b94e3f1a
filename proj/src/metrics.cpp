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

#include "dcfsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace dcfsim {

MetricsCollector::MetricsCollector(std::size_t run_id, std::string scenario,
                                   std::vector<CollectorBss> bsss, SimDuration interval,
                                   std::size_t interval_count)
  : m_bsss(std::move(bsss)),
    m_interval(interval),
    m_interval_count(std::max<std::size_t>(interval_count, 1)),
    m_closed(m_interval_count, false)
{
  m_records.reserve(m_interval_count * m_bsss.size());
  for (std::size_t k = 0; k < m_interval_count; ++k) {
    for (const auto& b : m_bsss) {
      MetricRecord r;
      r.run_id = run_id;
      r.scenario = scenario;
      r.policy = std::string(to_string(b.policy));
      r.bss = b.bss;
      r.interval_index = k;
      m_records.push_back(std::move(r));
    }
  }
}

MetricRecord&
MetricsCollector::slot(std::size_t bss_index, SimTime t)
{
  auto k = static_cast<std::size_t>(to_ns(t) / m_interval.count());
  k = std::min(k, m_interval_count - 1);
  return m_records[k * m_bsss.size() + bss_index];
}

void
MetricsCollector::record_txop(const TxAttempt& attempt)
{
  const auto it = std::find_if(m_bsss.begin(), m_bsss.end(),
                               [&](const CollectorBss& b) { return b.bss == attempt.bss; });
  if (it == m_bsss.end()) {
    return;
  }
  MetricRecord& r = slot(static_cast<std::size_t>(it - m_bsss.begin()), attempt.end);
  ++r.rts_attempts;
  if (attempt.outcome == TxOutcome::RtsLoss) {
    ++r.rts_losses;
  }
  if (attempt.outcome == TxOutcome::Success) {
    r.acked_bits += attempt.payload_bits;
    if (auto delay = access_delay(attempt)) {
      r.access_delay_samples_ns.push_back(delay->count());
    }
  }
}

void
MetricsCollector::close_interval(std::size_t index)
{
  if (index >= m_interval_count || m_closed[index]) {
    return;
  }
  m_closed[index] = true;
  const double seconds = to_seconds(m_interval);
  for (std::size_t b = 0; b < m_bsss.size(); ++b) {
    auto& r = m_records[index * m_bsss.size() + b];
    r.throughput_bps = static_cast<double>(r.acked_bits) / seconds;
  }
}

void
MetricsCollector::finish()
{
  for (std::size_t k = 0; k < m_interval_count; ++k) {
    close_interval(k);
  }
}

std::optional<double>
loss_percentage(std::span<const MetricRecord> records)
{
  std::int64_t attempts = 0;
  std::int64_t losses = 0;
  for (const auto& r : records) {
    attempts += r.rts_attempts;
    losses += r.rts_losses;
  }
  if (attempts == 0) {
    return std::nullopt;
  }
  return 100.0 * static_cast<double>(losses) / static_cast<double>(attempts);
}

namespace {

double
quantile_sorted(const std::vector<double>& sorted, double p)
{
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

SummaryStats
summarize(std::span<const double> samples, std::size_t max_cdf_points)
{
  if (samples.empty()) {
    throw std::invalid_argument("no samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  SummaryStats s;
  s.count = sorted.size();
  // Sorted summation keeps the mean independent of input order.
  s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(s.count);
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);

  const double n = static_cast<double>(s.count);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) {
      continue;
    }
    s.cdf_points.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  if (max_cdf_points > 1 && s.cdf_points.size() > max_cdf_points) {
    std::vector<std::pair<double, double>> thinned;
    thinned.reserve(max_cdf_points);
    const std::size_t last = s.cdf_points.size() - 1;
    for (std::size_t j = 0; j < max_cdf_points; ++j) {
      thinned.push_back(s.cdf_points[j * last / (max_cdf_points - 1)]);
    }
    s.cdf_points = std::move(thinned);
  }
  return s;
}

nlohmann::json
to_json(const SummaryStats& s)
{
  nlohmann::json cdf = nlohmann::json::array();
  for (const auto& [v, p] : s.cdf_points) {
    cdf.push_back({v, p});
  }
  return nlohmann::json{{"count", s.count}, {"mean", s.mean},     {"min", s.min},
                        {"max", s.max},     {"median", s.median}, {"q1", s.q1},
                        {"q3", s.q3},       {"cdf_points", std::move(cdf)}};
}

RunSummary
summarize_run(std::span<const MetricRecord> records)
{
  RunSummary out;
  std::vector<BssId> order;
  for (const auto& r : records) {
    if (std::find(order.begin(), order.end(), r.bss) == order.end()) {
      order.push_back(r.bss);
    }
  }
  std::vector<double> all_tput;
  std::vector<double> all_delay;
  for (BssId id : order) {
    BssSummary b;
    b.bss = id;
    std::vector<double> tput;
    std::vector<double> delay;
    std::vector<MetricRecord> mine;
    for (const auto& r : records) {
      if (r.bss != id) {
        continue;
      }
      b.policy = r.policy;
      tput.push_back(r.throughput_bps);
      for (auto d : r.access_delay_samples_ns) {
        delay.push_back(static_cast<double>(d));
      }
      b.rts_attempts += r.rts_attempts;
      b.rts_losses += r.rts_losses;
      b.acked_bits += r.acked_bits;
      mine.push_back(r);
    }
    b.throughput_bps = summarize(tput, 101);
    if (!delay.empty()) {
      b.access_delay_ns = summarize(delay, 101);
    }
    b.loss_pct = loss_percentage(mine);
    all_tput.insert(all_tput.end(), tput.begin(), tput.end());
    all_delay.insert(all_delay.end(), delay.begin(), delay.end());
    out.per_bss.push_back(std::move(b));
  }
  if (!all_tput.empty()) {
    out.throughput_bps = summarize(all_tput, 101);
  }
  if (!all_delay.empty()) {
    out.access_delay_ns = summarize(all_delay, 101);
  }
  out.loss_pct = loss_percentage(records);
  return out;
}

std::string
format_number(double value)
{
  char buf[64];
  if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 1e15) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(value));
    return std::string(buf, end);
  }
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void
write_text_file(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError("write failed: " + path.string());
  }
}

namespace {

nlohmann::json
optional_json(const std::optional<double>& v)
{
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json
optional_json(const std::optional<SummaryStats>& s)
{
  return s ? to_json(*s) : nlohmann::json(nullptr);
}

}  // namespace

std::vector<std::filesystem::path>
export_run(std::span<const MetricRecord> records, const RunSummary& summary,
           const ExportMeta& meta, const std::string& path_prefix)
{
  std::ostringstream intervals;
  intervals << kIntervalsHeader << '\n';
  std::ostringstream delays;
  delays << kDelaysHeader << '\n';
  for (const auto& r : records) {
    intervals << r.run_id << ',' << r.scenario << ',' << r.policy << ',' << to_underlying(r.bss)
              << ',' << r.interval_index << ',' << format_number(r.throughput_bps) << ','
              << r.rts_attempts << ',' << r.rts_losses << '\n';
    for (auto d : r.access_delay_samples_ns) {
      delays << r.run_id << ',' << r.scenario << ',' << r.policy << ',' << to_underlying(r.bss)
             << ',' << r.interval_index << ',' << d << '\n';
    }
  }

  nlohmann::json per_bss = nlohmann::json::array();
  for (const auto& b : summary.per_bss) {
    per_bss.push_back({{"bss_id", to_underlying(b.bss)},
                       {"policy", b.policy},
                       {"throughput_bps", to_json(b.throughput_bps)},
                       {"access_delay_ns", optional_json(b.access_delay_ns)},
                       {"rts_attempts", b.rts_attempts},
                       {"rts_losses", b.rts_losses},
                       {"acked_bits", b.acked_bits},
                       {"loss_pct", optional_json(b.loss_pct)}});
  }
  nlohmann::json doc{
    {"run_id", meta.run_id},
    {"scenario", meta.scenario},
    {"seed", meta.seed},
    {"config", meta.config},
    {"per_bss", std::move(per_bss)},
    {"aggregate",
     {{"throughput_bps", to_json(summary.throughput_bps)},
      {"access_delay_ns", optional_json(summary.access_delay_ns)},
      {"loss_pct", optional_json(summary.loss_pct)}}},
  };

  const std::filesystem::path ip = path_prefix + "_intervals.csv";
  const std::filesystem::path dp = path_prefix + "_delays.csv";
  const std::filesystem::path sp = path_prefix + "_summary.json";
  write_text_file(ip, intervals.str());
  write_text_file(dp, delays.str());
  write_text_file(sp, doc.dump(2) + "\n");
  return {ip, dp, sp};
}

}  // namespace dcfsim
