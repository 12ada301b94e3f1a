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

#include "dcfsim/mac.hpp"

#include <cmath>

namespace dcfsim {

SimDuration
ampdu_airtime(int mpdu_count, int mpdu_bytes, double rate_bps)
{
  const double ns = static_cast<double>(mpdu_count) * mpdu_bytes * 8.0 * 1e9 / rate_bps;
  // Absorb representation error before rounding up so exact rates stay exact.
  return SimDuration{static_cast<std::int64_t>(std::ceil(ns - 1e-6))};
}

TxopPlan
plan_txop(double link_rate_bps, const MacTimings& timings, const TxopLimits& limits)
{
  if (!(link_rate_bps > 0.0)) {
    throw LinkUnusable("link unusable: no MCS supports the link SNR");
  }
  const SimDuration limit = from_us(limits.txop_max_us);
  const SimDuration overhead = timings.phy_header() + timings.sifs() + timings.back();

  TxopPlan plan;
  plan.mpdu_bytes = limits.mpdu_bytes;
  plan.data_rate_bps = link_rate_bps;
  plan.mpdu_count = 1;
  for (int k = limits.ampdu_max; k >= 1; --k) {
    if (overhead + ampdu_airtime(k, limits.mpdu_bytes, link_rate_bps) <= limit) {
      plan.mpdu_count = k;
      break;
    }
  }
  plan.data_duration =
    timings.phy_header() + ampdu_airtime(plan.mpdu_count, limits.mpdu_bytes, link_rate_bps);
  plan.total_duration = plan.data_duration + timings.sifs() + timings.back();
  plan.exceeds_limit = plan.total_duration > limit;
  return plan;
}

SimDuration
exchange_duration(const TxopPlan& plan, const MacTimings& timings)
{
  return timings.rts() + timings.sifs() + timings.cts() + timings.sifs() + plan.total_duration;
}

SimDuration
failed_exchange_duration(const MacTimings& timings)
{
  return timings.rts() + timings.sifs() + timings.cts();
}

std::string_view
to_string(MacPhase phase)
{
  switch (phase) {
    case MacPhase::IdleWaitDifs:
      return "idle_wait_difs";
    case MacPhase::CountingDown:
      return "counting_down";
    case MacPhase::Frozen:
      return "frozen";
    case MacPhase::TxRts:
      return "tx_rts";
    case MacPhase::WaitCts:
      return "wait_cts";
    case MacPhase::TxData:
      return "tx_data";
    case MacPhase::WaitBack:
      return "wait_back";
  }
  return "unknown";
}

std::string_view
to_string(TxOutcome outcome)
{
  switch (outcome) {
    case TxOutcome::Pending:
      return "pending";
    case TxOutcome::Success:
      return "success";
    case TxOutcome::RtsLoss:
      return "rts_loss";
    case TxOutcome::DataLoss:
      return "data_loss";
  }
  return "unknown";
}

std::optional<SimDuration>
access_delay(const TxAttempt& attempt)
{
  if (attempt.outcome != TxOutcome::Success) {
    return std::nullopt;
  }
  return attempt.start - attempt.access_started_at;
}

}  // namespace dcfsim
