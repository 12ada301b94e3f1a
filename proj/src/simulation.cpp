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

#include "dcfsim/simulation.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include "dcfsim/config.hpp"

namespace dcfsim {

namespace {

constexpr double kNoSignal = -std::numeric_limits<double>::infinity();
constexpr double kReferenceDistance = 1.0;

std::vector<CollectorBss>
collector_bsss(const Deployment& d)
{
  std::vector<CollectorBss> out;
  for (const auto& b : d.bsss) {
    out.push_back({b.id, b.policy});
  }
  return out;
}

std::size_t
interval_count(const SimulationConfig& c)
{
  const auto n = c.horizon.count() / c.interval.count();
  return static_cast<std::size_t>(std::max<std::int64_t>(n, 1));
}

}  // namespace

SimulationConfig
make_simulation_config(const RunConfig& config, std::size_t run_id, bool trace)
{
  SimulationConfig s;
  s.radio = config.radio;
  s.path_loss = config.path_loss;
  s.mcs = config.mcs;
  s.timings = config.mac;
  s.limits = config.txop;
  s.horizon = from_seconds(config.experiment.horizon_s);
  s.interval = from_seconds(config.experiment.interval_s);
  s.iyt_redraw_on_token_change = config.iyt_redraw_on_token_change;
  s.trace = trace;
  s.run_id = run_id;
  s.scenario = std::string(to_string(config.experiment.kind));
  return s;
}

std::string
format_trace(std::span<const TraceRecord> trace)
{
  std::ostringstream out;
  for (const auto& r : trace) {
    out << to_ns(r.time) << ',' << to_underlying(r.bss) << ',' << r.kind << ',' << r.detail << '\n';
  }
  return out.str();
}

LinkTable
build_link_table(const Deployment& d, const RadioConfig& radio, const PathLossParams& pl, Rng& rng)
{
  const std::size_t n = d.bsss.size();
  const double gains = radio.tx_power_dbm + radio.antenna_gain_tx_dbi + radio.antenna_gain_rx_dbi;
  const bool sampled = pl.shadowing == ShadowingMode::Sampled;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  auto loss = [&](double dist) {
    dist = std::max(dist, kReferenceDistance);
    if (!sampled) {
      return path_loss(dist, pl);
    }
    const double shadow_u = unit(rng);
    const double obstacle_u = unit(rng);
    return path_loss_sampled(dist, pl, shadow_u, obstacle_u);
  };

  LinkTable t;
  t.ap_to_ap.assign(n, std::vector<double>(n, kNoSignal));
  t.ap_to_sta.assign(n, std::vector<double>(n, kNoSignal));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = gains - loss(distance(d.bsss[i].ap, d.bsss[j].ap));
      if (d.bsss[i].channel == d.bsss[j].channel) {
        t.ap_to_ap[i][j] = p;
        t.ap_to_ap[j][i] = p;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = gains - loss(distance(d.bsss[i].ap, d.bsss[j].sta));
      if (d.bsss[i].channel == d.bsss[j].channel) {
        t.ap_to_sta[i][j] = p;
      }
    }
  }
  return t;
}

Simulation::Simulation(Deployment deployment, SimulationConfig config, Rng rng)
  : m_deployment(std::move(deployment)),
    m_config(std::move(config)),
    m_rng(std::move(rng)),
    m_links(build_link_table(m_deployment, m_config.radio, m_config.path_loss, m_rng)),
    m_metrics(m_config.run_id, m_config.scenario, collector_bsss(m_deployment), m_config.interval,
              interval_count(m_config))
{
  m_devices.reserve(m_deployment.bsss.size());
  for (std::size_t i = 0; i < m_deployment.bsss.size(); ++i) {
    Device d;
    d.bss = m_deployment.bsss[i];
    d.mac.contention = make_contention_state(d.bss.id);
    const double snr = m_links.ap_to_sta[i][i] - m_config.radio.noise_dbm;
    const double rate = snr_to_rate(snr, m_config.mcs);
    if (rate > 0.0) {
      d.plan = plan_txop(rate, m_config.timings, m_config.limits);
    }
    m_devices.push_back(std::move(d));
  }
}

void
Simulation::note(std::size_t dev, const char* kind, std::string detail)
{
  if (m_config.trace) {
    m_trace.push_back(TraceRecord{m_queue.now(), m_devices[dev].bss.id, kind, std::move(detail)});
  }
}

void
Simulation::start()
{
  m_started = true;
  const auto n = static_cast<std::int64_t>(m_metrics.interval_count());
  for (std::int64_t k = 1; k <= n; ++k) {
    // The device slot carries the index of the interval being closed.
    m_queue.schedule(kSimStart + k * m_config.interval, EventKind::IntervalBoundary,
                     static_cast<std::size_t>(k - 1));
  }
  for (std::size_t i = 0; i < m_devices.size(); ++i) {
    if (!m_devices[i].plan) {
      note(i, "starved", "link unusable");
      continue;
    }
    m_devices[i].access_started_at = m_queue.now();
    begin_contention(i, 0, true);
  }
}

SimTime
Simulation::run()
{
  if (!m_started) {
    start();
  }
  const SimTime until = kSimStart + m_config.horizon;
  const SimTime end = m_queue.run(until, [this](const Event& ev) { dispatch(ev); });
  m_metrics.finish();
  return end;
}

void
Simulation::dispatch(const Event& ev)
{
  switch (ev.kind) {
    case EventKind::BackoffExpiry:
      on_backoff_expiry(ev.device);
      break;
    case EventKind::TxPhaseEnd:
      switch (ev.phase) {
        case TxPhase::Rts:
          on_rts_end(ev.device);
          break;
        case TxPhase::Cts:
          on_cts_end(ev.device);
          break;
        case TxPhase::Data:
          on_data_end(ev.device);
          break;
        case TxPhase::Exchange:
          on_exchange_end(ev.device);
          break;
      }
      break;
    case EventKind::IntervalBoundary:
      m_metrics.close_interval(ev.device);
      break;
  }
}

bool
Simulation::committed(const Device& d) const
{
  return d.expiry && d.expiry->time == m_queue.now();
}

bool
Simulation::contending(const Device& d) const
{
  return d.plan && (d.mac.phase == MacPhase::CountingDown || d.mac.phase == MacPhase::Frozen ||
                    d.mac.phase == MacPhase::IdleWaitDifs);
}

bool
Simulation::sensing_busy(std::size_t dev) const
{
  std::vector<double> powers;
  for (std::size_t id : m_active) {
    const std::size_t src = m_attempts[id].device;
    if (src != dev && m_links.ap_to_ap[src][dev] != kNoSignal) {
      powers.push_back(m_links.ap_to_ap[src][dev]);
    }
  }
  return cca_busy(powers, m_config.radio.cca_dbm);
}

void
Simulation::begin_contention(std::size_t dev, int ipt_for_draw, bool first)
{
  Device& d = m_devices[dev];
  // No transmission outcome exists yet, so the first backoff is the legacy
  // random draw for every policy; otherwise identical DB devices never desynchronize.
  const BackoffDraw draw =
    first ? beb_backoff(0, d.bss.params, m_rng)
          : compute_backoff(d.bss.policy, d.mac.contention, ipt_for_draw, d.bss.params, m_rng);
  d.mac.remaining_slots = draw.slots;
  d.mac.backoff_started_at = m_queue.now();
  note(dev, "backoff", "slots=" + std::to_string(draw.slots) + " cw=" + std::to_string(draw.cw_used));
  d.busy = sensing_busy(dev);
  if (d.busy) {
    d.mac.phase = MacPhase::Frozen;
    note(dev, "freeze", "remaining=" + std::to_string(d.mac.remaining_slots));
  } else {
    resume(dev);
  }
}

void
Simulation::resume(std::size_t dev)
{
  Device& d = m_devices[dev];
  const auto& t = m_config.timings;
  d.count_origin = m_queue.now() + t.difs();
  d.mac.phase = d.mac.remaining_slots > 0 ? MacPhase::CountingDown : MacPhase::IdleWaitDifs;
  d.expiry = m_queue.schedule(d.count_origin + d.mac.remaining_slots * t.slot(),
                              EventKind::BackoffExpiry, dev);
}

void
Simulation::freeze(std::size_t dev)
{
  Device& d = m_devices[dev];
  if (d.expiry) {
    m_queue.cancel(*d.expiry);
    d.expiry.reset();
  }
  const SimTime now = m_queue.now();
  if (now > d.count_origin) {
    const auto elapsed = static_cast<int>((now - d.count_origin) / m_config.timings.slot());
    d.mac.remaining_slots = std::max(0, d.mac.remaining_slots - elapsed);
  }
  d.mac.phase = MacPhase::Frozen;
  d.mac.contention = on_backoff_decrement_interrupted(d.bss.policy, std::move(d.mac.contention));
  note(dev, "freeze", "remaining=" + std::to_string(d.mac.remaining_slots));
}

void
Simulation::redraw(std::size_t dev)
{
  Device& d = m_devices[dev];
  const BackoffDraw draw = iyt_backoff(d.mac.contention, d.bss.params, m_rng);
  d.mac.remaining_slots = draw.slots;
  note(dev, "redraw", "slots=" + std::to_string(draw.slots) +
                        " d=" + std::to_string(d.mac.contention.token_distance));
  if (d.mac.phase == MacPhase::Frozen) {
    return;
  }
  // Counting on an idle channel: restart the count from the next slot boundary.
  if (d.expiry) {
    m_queue.cancel(*d.expiry);
  }
  const SimTime now = m_queue.now();
  if (now > d.count_origin) {
    d.count_origin = now;
  }
  d.mac.phase = draw.slots > 0 ? MacPhase::CountingDown : MacPhase::IdleWaitDifs;
  d.expiry = m_queue.schedule(d.count_origin + draw.slots * m_config.timings.slot(),
                              EventKind::BackoffExpiry, dev);
}

void
Simulation::update_busy(std::size_t dev)
{
  Device& d = m_devices[dev];
  const bool busy = sensing_busy(dev);
  if (busy == d.busy) {
    return;
  }
  d.busy = busy;
  if (busy) {
    if (d.mac.phase == MacPhase::CountingDown || d.mac.phase == MacPhase::IdleWaitDifs) {
      freeze(dev);
    }
  } else if (d.mac.phase == MacPhase::Frozen) {
    resume(dev);
  }
}

void
Simulation::observe_start(std::size_t observer, const TxAttempt& a)
{
  Device& d = m_devices[observer];
  if (!d.plan || is_transmitting(d.mac.phase) || committed(d)) {
    return;
  }
  const double p = m_links.ap_to_ap[a.device][observer];
  if (d.bss.policy == PolicyKind::Iyt) {
    d.mac.contention =
      iyt_on_tx_start(std::move(d.mac.contention), a.bss, p, m_config.radio.cca_dbm);
  }
  update_busy(observer);
}

void
Simulation::observe_end(std::size_t observer, const TxAttempt& a)
{
  Device& d = m_devices[observer];
  if (!d.plan || is_transmitting(d.mac.phase) || committed(d)) {
    return;
  }
  const double p = m_links.ap_to_ap[a.device][observer];
  if (d.bss.policy == PolicyKind::Iyt && p >= m_config.radio.cca_dbm) {
    const auto token = d.mac.contention.token;
    const int distance = d.mac.contention.token_distance;
    d.mac.contention = iyt_on_tx_end(std::move(d.mac.contention), a.bss);
    const bool moved =
      token != d.mac.contention.token || distance != d.mac.contention.token_distance;
    if (moved && m_config.iyt_redraw_on_token_change && contending(d)) {
      redraw(observer);
    }
  }
  update_busy(observer);
}

void
Simulation::on_backoff_expiry(std::size_t dev)
{
  Device& d = m_devices[dev];
  d.expiry.reset();
  ++d.expiries;

  TxAttempt a;
  a.id = m_attempts.size();
  a.device = dev;
  a.bss = d.bss.id;
  a.channel = d.bss.channel;
  a.access_started_at = d.access_started_at;
  a.start = m_queue.now();
  a.mpdu_count = d.plan->mpdu_count;
  a.payload_bits = d.plan->payload_bits();
  for (std::size_t other : m_active) {
    if (m_attempts[other].channel == a.channel) {
      a.overlaps.push_back(other);
      m_attempts[other].overlaps.push_back(a.id);
    }
  }
  m_attempts.push_back(std::move(a));
  m_active.push_back(m_attempts.back().id);
  d.attempt = m_attempts.back().id;
  d.mac.phase = MacPhase::TxRts;
  d.mac.remaining_slots = 0;
  note(dev, "tx_start", "attempt=" + std::to_string(*d.attempt));

  m_queue.schedule(m_queue.now() + m_config.timings.rts(), EventKind::TxPhaseEnd, dev, TxPhase::Rts);
  const TxAttempt& started = m_attempts[*d.attempt];
  for (std::size_t k = 0; k < m_devices.size(); ++k) {
    if (k != dev && m_devices[k].bss.channel == started.channel) {
      observe_start(k, m_attempts[*m_devices[dev].attempt]);
    }
  }
}

double
Simulation::phase_sinr(const TxAttempt& a, SimTime from, SimTime to) const
{
  std::vector<double> interferers;
  for (std::size_t id : a.overlaps) {
    const TxAttempt& y = m_attempts[id];
    if (y.start < to && (!y.ended || y.end > from)) {
      interferers.push_back(m_links.ap_to_sta[y.device][a.device]);
    }
  }
  return sinr(m_links.ap_to_sta[a.device][a.device], interferers, m_config.radio.noise_dbm);
}

void
Simulation::on_rts_end(std::size_t dev)
{
  Device& d = m_devices[dev];
  TxAttempt& a = m_attempts[*d.attempt];
  const auto& t = m_config.timings;
  const SimTime now = m_queue.now();
  a.rts_end = now;
  a.rts_sinr_db = phase_sinr(a, a.start, now);
  d.mac.phase = MacPhase::WaitCts;
  if (decodable(a.rts_sinr_db, m_config.radio.capture_threshold_db)) {
    a.data_start = now + t.sifs() + t.cts() + t.sifs();
    m_queue.schedule(a.data_start, EventKind::TxPhaseEnd, dev, TxPhase::Cts);
    note(dev, "rts_end", "decoded sinr=" + format_number(a.rts_sinr_db));
  } else {
    a.outcome = TxOutcome::RtsLoss;
    a.end = now + t.sifs() + t.cts();
    m_queue.schedule(a.end, EventKind::TxPhaseEnd, dev, TxPhase::Exchange);
    note(dev, "rts_end", "lost sinr=" + format_number(a.rts_sinr_db));
  }
}

void
Simulation::on_cts_end(std::size_t dev)
{
  Device& d = m_devices[dev];
  TxAttempt& a = m_attempts[*d.attempt];
  d.mac.phase = MacPhase::TxData;
  a.data_end = m_queue.now() + d.plan->data_duration;
  m_queue.schedule(a.data_end, EventKind::TxPhaseEnd, dev, TxPhase::Data);
}

void
Simulation::on_data_end(std::size_t dev)
{
  Device& d = m_devices[dev];
  TxAttempt& a = m_attempts[*d.attempt];
  const auto& t = m_config.timings;
  a.data_sinr_db = phase_sinr(a, a.data_start, m_queue.now());
  a.outcome = decodable(a.data_sinr_db, m_config.radio.capture_threshold_db) ? TxOutcome::Success
                                                                             : TxOutcome::DataLoss;
  d.mac.phase = MacPhase::WaitBack;
  a.end = m_queue.now() + t.sifs() + t.back();
  m_queue.schedule(a.end, EventKind::TxPhaseEnd, dev, TxPhase::Exchange);
  note(dev, "data_end", std::string(to_string(a.outcome)) + " sinr=" + format_number(a.data_sinr_db));
}

void
Simulation::on_exchange_end(std::size_t dev)
{
  Device& d = m_devices[dev];
  const std::size_t id = *d.attempt;
  TxAttempt& a = m_attempts[id];
  a.ended = true;
  m_active.erase(std::find(m_active.begin(), m_active.end(), id));
  m_metrics.record_txop(a);
  note(dev, "tx_end", std::string(to_string(a.outcome)));

  const bool success = a.outcome == TxOutcome::Success;
  const int ipt = d.mac.contention.ipt;
  d.mac.contention = on_transmission_outcome(std::move(d.mac.contention), success);
  if (d.bss.policy == PolicyKind::Iyt) {
    d.mac.contention = iyt_on_tx_end(std::move(d.mac.contention), d.bss.id);
  }
  if (success) {
    d.access_started_at = m_queue.now();
  }
  d.attempt.reset();
  d.mac.phase = MacPhase::Frozen;

  for (std::size_t k = 0; k < m_devices.size(); ++k) {
    if (k != dev && m_devices[k].bss.channel == d.bss.channel) {
      observe_end(k, m_attempts[id]);
    }
  }
  begin_contention(dev, ipt);
}

}  // namespace dcfsim
