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

#ifndef DCFSIM_MAC_HPP
#define DCFSIM_MAC_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "dcfsim/backoff.hpp"
#include "dcfsim/sim_time.hpp"

namespace dcfsim {

class LinkUnusable : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Inter-frame spaces and control frame airtimes. Control frames are sized
/// for a 6 Mb/s legacy rate; all of these are approximate defaults.
struct MacTimings
{
  double slot_us = 9.0;
  double sifs_us = 16.0;
  double difs_us = 34.0;
  double rts_us = 52.0;
  double cts_us = 44.0;
  double back_us = 68.0;
  double phy_header_us = 40.0;

  SimDuration slot() const { return from_us(slot_us); }
  SimDuration sifs() const { return from_us(sifs_us); }
  SimDuration difs() const { return from_us(difs_us); }
  SimDuration rts() const { return from_us(rts_us); }
  SimDuration cts() const { return from_us(cts_us); }
  SimDuration back() const { return from_us(back_us); }
  SimDuration phy_header() const { return from_us(phy_header_us); }
};

struct TxopLimits
{
  double txop_max_us = 5484.0;
  int ampdu_max = 64;
  int mpdu_bytes = 1500;
};

struct TxopPlan
{
  int mpdu_count = 0;
  int mpdu_bytes = 0;
  double data_rate_bps = 0.0;
  /// PHY header + A-MPDU + SIFS + Block Ack, the part bounded by the TXOP limit.
  SimDuration total_duration{};
  /// PHY header + A-MPDU.
  SimDuration data_duration{};
  /// Set when even a single MPDU overruns the TXOP limit.
  bool exceeds_limit = false;

  std::int64_t payload_bits() const
  {
    return static_cast<std::int64_t>(mpdu_count) * mpdu_bytes * 8;
  }
};

/// Airtime of \p mpdu_count MPDUs of \p mpdu_bytes at \p rate_bps, rounded up to whole ns.
SimDuration ampdu_airtime(int mpdu_count, int mpdu_bytes, double rate_bps);

/// Largest A-MPDU (at least one MPDU) whose data phase plus SIFS and Block Ack
/// fits the TXOP limit. Throws LinkUnusable for a non-positive rate.
TxopPlan plan_txop(double link_rate_bps, const MacTimings& timings, const TxopLimits& limits);

/// RTS + SIFS + CTS + SIFS + data + SIFS + Block Ack.
SimDuration exchange_duration(const TxopPlan& plan, const MacTimings& timings);

/// RTS + SIFS + CTS timeout, after which a transmitter gives up on a lost RTS.
SimDuration failed_exchange_duration(const MacTimings& timings);

enum class MacPhase : std::uint8_t
{
  IdleWaitDifs,  // zero slots left, deferring DIFS
  CountingDown,
  Frozen,
  TxRts,
  WaitCts,
  TxData,
  WaitBack,
};

std::string_view to_string(MacPhase phase);

inline bool is_transmitting(MacPhase phase)
{
  return phase == MacPhase::TxRts || phase == MacPhase::WaitCts || phase == MacPhase::TxData ||
         phase == MacPhase::WaitBack;
}

struct DeviceMacState
{
  MacPhase phase = MacPhase::Frozen;
  int remaining_slots = 0;
  ContentionState contention;
  SimTime backoff_started_at{};
};

enum class TxOutcome : std::uint8_t
{
  Pending,
  Success,
  RtsLoss,
  DataLoss,
};

std::string_view to_string(TxOutcome outcome);

/// One RTS-initiated TXOP attempt.
struct TxAttempt
{
  std::size_t id = 0;
  std::size_t device = 0;
  BssId bss{};
  int channel = 0;
  /// Start of the contention that led here, carried across failed attempts.
  SimTime access_started_at{};
  SimTime start{};
  SimTime rts_end{};
  SimTime data_start{};
  SimTime data_end{};
  SimTime end{};
  bool ended = false;
  TxOutcome outcome = TxOutcome::Pending;
  int mpdu_count = 0;
  std::int64_t payload_bits = 0;
  double rts_sinr_db = 0.0;
  double data_sinr_db = 0.0;
  /// Attempts on the same channel whose airtime intersected this one.
  std::vector<std::size_t> overlaps;
};

/// Delay from the start of contention to the RTS, for successful attempts only.
std::optional<SimDuration> access_delay(const TxAttempt& attempt);

}  // namespace dcfsim

#endif  // DCFSIM_MAC_HPP
