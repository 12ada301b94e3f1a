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

#ifndef DCFSIM_SIM_TIME_HPP
#define DCFSIM_SIM_TIME_HPP

#include <chrono>
#include <cmath>
#include <cstdint>

namespace dcfsim {

/// Simulated clock. Time points count integer nanoseconds since the start of a run.
struct SimClock
{
  using rep = std::int64_t;
  using period = std::nano;
  using duration = std::chrono::duration<rep, period>;
  using time_point = std::chrono::time_point<SimClock, duration>;
  static constexpr bool is_steady = true;
};

using SimDuration = SimClock::duration;
using SimTime = SimClock::time_point;

inline constexpr SimTime kSimStart{};

constexpr SimTime at_ns(std::int64_t ns) { return SimTime{SimDuration{ns}}; }

constexpr std::int64_t to_ns(SimTime t) { return t.time_since_epoch().count(); }
constexpr std::int64_t to_ns(SimDuration d) { return d.count(); }

/// Converts a configured duration in microseconds to the integer time base (nearest ns).
inline SimDuration from_us(double us) { return SimDuration{std::llround(us * 1e3)}; }
inline SimDuration from_seconds(double s) { return SimDuration{std::llround(s * 1e9)}; }

inline double to_seconds(SimDuration d) { return static_cast<double>(d.count()) * 1e-9; }
inline double to_seconds(SimTime t) { return to_seconds(t.time_since_epoch()); }

}  // namespace dcfsim

#endif  // DCFSIM_SIM_TIME_HPP
