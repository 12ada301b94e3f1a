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

#ifndef DCFSIM_SIMULATION_HPP
#define DCFSIM_SIMULATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcfsim/backoff.hpp"
#include "dcfsim/event_queue.hpp"
#include "dcfsim/mac.hpp"
#include "dcfsim/metrics.hpp"
#include "dcfsim/phy.hpp"
#include "dcfsim/scenario.hpp"

namespace dcfsim {

struct SimulationConfig
{
  RadioConfig radio;
  PathLossParams path_loss;
  McsTable mcs = default_mcs_table();
  MacTimings timings;
  TxopLimits limits;
  SimDuration horizon = from_seconds(100.0);
  SimDuration interval = from_seconds(1.0);
  bool iyt_redraw_on_token_change = true;
  bool trace = false;
  std::size_t run_id = 0;
  std::string scenario = "custom";
};

SimulationConfig make_simulation_config(const RunConfig& config, std::size_t run_id,
                                        bool trace = false);

struct TraceRecord
{
  SimTime time{};
  BssId bss{};
  std::string kind;
  std::string detail;
};

/// Line-delimited "time_ns,bss_id,kind,detail" records.
std::string format_trace(std::span<const TraceRecord> trace);

/// Received powers between every transmitter and every node, fixed for a run.
struct LinkTable
{
  /// ap_to_ap[i][j]: power at AP j while AP i transmits; -inf across channels.
  std::vector<std::vector<double>> ap_to_ap;
  /// ap_to_sta[i][j]: power at the STA of BSS j while AP i transmits.
  std::vector<std::vector<double>> ap_to_sta;
};

/// Distances below the 1 m reference are evaluated at 1 m. Sampled shadowing
/// draws from \p rng: AP pairs (i < j) first, then every ordered AP->STA link.
LinkTable build_link_table(const Deployment& deployment, const RadioConfig& radio,
                           const PathLossParams& path_loss, Rng& rng);

/// Downlink full-buffer DCF over one deployment: APs contend, STAs answer.
///
/// Interference from an exchange is radiated from its AP for the whole
/// exchange. Virtual carrier sensing is folded into energy detection, so a
/// device stays frozen for as long as it senses any exchange.
class Simulation
{
public:
  Simulation(Deployment deployment, SimulationConfig config, Rng rng);

  /// Runs to the configured horizon and closes all metric intervals.
  SimTime run();

  const Deployment& deployment() const noexcept { return m_deployment; }
  const LinkTable& links() const noexcept { return m_links; }
  std::size_t device_count() const noexcept { return m_devices.size(); }
  const DeviceMacState& device_state(std::size_t i) const { return m_devices.at(i).mac; }
  std::optional<TxopPlan> txop_plan(std::size_t i) const { return m_devices.at(i).plan; }
  std::uint64_t backoff_expiries(std::size_t i) const { return m_devices.at(i).expiries; }
  const std::vector<TxAttempt>& attempts() const noexcept { return m_attempts; }
  const MetricsCollector& metrics() const noexcept { return m_metrics; }
  const std::vector<TraceRecord>& trace() const noexcept { return m_trace; }
  SimTime now() const noexcept { return m_queue.now(); }

private:
  struct Device
  {
    BssConfig bss;
    DeviceMacState mac;
    std::optional<TxopPlan> plan;  // empty: link unusable, never contends
    SimTime count_origin{};        // first slot boundary after DIFS
    std::optional<EventHandle> expiry;
    SimTime access_started_at{};
    std::optional<std::size_t> attempt;
    bool busy = false;
    std::uint64_t expiries = 0;
  };

  void start();
  void dispatch(const Event& ev);

  void begin_contention(std::size_t dev, int ipt_for_draw, bool first = false);
  void resume(std::size_t dev);
  void freeze(std::size_t dev);
  void redraw(std::size_t dev);
  void update_busy(std::size_t dev);
  bool sensing_busy(std::size_t dev) const;
  bool committed(const Device& d) const;
  bool contending(const Device& d) const;

  void on_backoff_expiry(std::size_t dev);
  void on_rts_end(std::size_t dev);
  void on_cts_end(std::size_t dev);
  void on_data_end(std::size_t dev);
  void on_exchange_end(std::size_t dev);
  void observe_start(std::size_t observer, const TxAttempt& attempt);
  void observe_end(std::size_t observer, const TxAttempt& attempt);

  double phase_sinr(const TxAttempt& attempt, SimTime from, SimTime to) const;
  void note(std::size_t dev, const char* kind, std::string detail = {});

  Deployment m_deployment;
  SimulationConfig m_config;
  Rng m_rng;
  LinkTable m_links;
  EventQueue m_queue;
  std::vector<Device> m_devices;
  std::vector<TxAttempt> m_attempts;
  std::vector<std::size_t> m_active;
  MetricsCollector m_metrics;
  std::vector<TraceRecord> m_trace;
  bool m_started = false;
};

}  // namespace dcfsim

#endif  // DCFSIM_SIMULATION_HPP
