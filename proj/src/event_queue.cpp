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

#include "dcfsim/event_queue.hpp"

namespace dcfsim {

EventHandle
EventQueue::schedule(SimTime time, EventKind kind, std::size_t device, TxPhase phase)
{
  if (time < m_now) {
    throw SchedulingError("event scheduled in the past: t=" + std::to_string(to_ns(time)) +
                          " ns, clock=" + std::to_string(to_ns(m_now)) + " ns");
  }
  const std::uint64_t seq = m_next_sequence++;
  m_events.emplace(Key{to_ns(time), seq}, Event{time, seq, kind, device, phase});
  return EventHandle{time, seq};
}

bool
EventQueue::cancel(const EventHandle& handle)
{
  return m_events.erase(Key{to_ns(handle.time), handle.sequence}) > 0;
}

std::optional<Event>
EventQueue::peek() const
{
  if (m_events.empty()) {
    return std::nullopt;
  }
  return m_events.begin()->second;
}

}  // namespace dcfsim
