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

#ifndef DCFSIM_EVENT_QUEUE_HPP
#define DCFSIM_EVENT_QUEUE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "dcfsim/sim_time.hpp"

namespace dcfsim {

enum class EventKind : std::uint8_t
{
  BackoffExpiry,
  TxPhaseEnd,
  IntervalBoundary,
};

/// Phases of an RTS-initiated exchange whose end is an event.
enum class TxPhase : std::uint8_t
{
  Rts,       // RTS on air
  Cts,       // SIFS + CTS; data follows on success
  Data,      // PHY header + A-MPDU
  Exchange,  // SIFS + Block Ack, or the CTS timeout after a lost RTS
};

struct Event
{
  SimTime time{};
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::IntervalBoundary;
  std::size_t device = 0;
  TxPhase phase = TxPhase::Rts;
};

struct EventHandle
{
  SimTime time{};
  std::uint64_t sequence = 0;
};

class SchedulingError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Ordered event queue and simulation clock.
///
/// Events dispatch in (time, sequence) order; events sharing a timestamp
/// dispatch in insertion order.
class EventQueue
{
public:
  SimTime now() const noexcept { return m_now; }
  bool empty() const noexcept { return m_events.empty(); }
  std::size_t size() const noexcept { return m_events.size(); }

  /// Throws SchedulingError when \p time lies before the current clock.
  EventHandle schedule(SimTime time, EventKind kind, std::size_t device = 0,
                       TxPhase phase = TxPhase::Rts);

  /// Returns false if the event was already dispatched or cancelled.
  bool cancel(const EventHandle& handle);

  std::optional<Event> peek() const;

  /// Dispatches events until the queue drains or the next event lies beyond
  /// \p until. Returns the clock after the last dispatched event.
  template <typename Dispatch>
  SimTime run(SimTime until, Dispatch&& dispatch)
  {
    while (!m_events.empty()) {
      auto it = m_events.begin();
      if (it->second.time > until) {
        break;
      }
      Event ev = it->second;
      m_events.erase(it);
      m_now = ev.time;
      dispatch(ev);
    }
    return m_now;
  }

private:
  using Key = std::pair<std::int64_t, std::uint64_t>;

  std::map<Key, Event> m_events;
  std::uint64_t m_next_sequence = 0;
  SimTime m_now{};
};

}  // namespace dcfsim

#endif  // DCFSIM_EVENT_QUEUE_HPP
