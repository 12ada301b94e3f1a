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

#ifndef DCFSIM_BACKOFF_HPP
#define DCFSIM_BACKOFF_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace dcfsim {

/// BSS identifier, the neighbor identity observed in frame headers.
enum class BssId : std::uint32_t {};

constexpr std::uint32_t to_underlying(BssId id) { return static_cast<std::uint32_t>(id); }

/// One random stream per run.
using Rng = std::mt19937_64;

enum class PolicyKind : std::uint8_t
{
  Beb,
  Db,
  Iyt,
};

std::string_view to_string(PolicyKind kind);
std::optional<PolicyKind> parse_policy_kind(std::string_view name);

struct PolicyParams
{
  int cw0 = 16;    // initial contention window
  int n_max = 5;   // maximum CW stage
  int db_base = 5; // DB base backoff b

  bool operator==(const PolicyParams&) const = default;
};

/// Per-device contention bookkeeping shared by the three mechanisms.
struct ContentionState
{
  BssId self{};
  int n = 0;    // consecutive failed attempts
  int ipt = 0;  // countdown interruptions since the last backoff computation
  std::vector<BssId> neighbor_list;  // ascending, includes self
  std::optional<BssId> token;
  int token_distance = 0;
};

ContentionState make_contention_state(BssId self);

struct BackoffDraw
{
  int slots = 0;
  int cw_used = 0;  // 0 marks a deterministic draw
};

/// Order in which neighbors take turns. Only ascending-identifier round robin ships.
class OrderingPolicy
{
public:
  virtual ~OrderingPolicy() = default;

  /// Position at which \p id enters \p list.
  virtual std::size_t insert_position(std::span<const BssId> list, BssId id) const = 0;

  /// Index of the token holder after the member at \p source_index ends a transmission.
  virtual std::size_t next_index(std::span<const BssId> list, std::size_t source_index) const = 0;
};

class AscendingRoundRobin final : public OrderingPolicy
{
public:
  std::size_t insert_position(std::span<const BssId> list, BssId id) const override;
  std::size_t next_index(std::span<const BssId> list, std::size_t source_index) const override;
};

const OrderingPolicy& default_ordering();

/// Contention window after \p n consecutive failures: CW0 * 2^min(n, Nmax).
int beb_contention_window(int n, const PolicyParams& params);

/// Inclusive slot range of an IYT draw at token distance \p d.
std::pair<int, int> iyt_window(int d, int cw0);

BackoffDraw beb_backoff(int n, const PolicyParams& params, Rng& rng);

/// BO = b + IPT while n == 0; random BEB draw after a failure.
BackoffDraw db_backoff(int n, int ipt, const PolicyParams& params, Rng& rng);

/// BO ~ U[max(0, d*CW0 - 1), (d+1)*CW0 - 1]; n plays no part.
BackoffDraw iyt_backoff(const ContentionState& state, const PolicyParams& params, Rng& rng);

/// Draws for \p kind. \p ipt is the interruption count accumulated before the reset
/// that follows every backoff computation.
BackoffDraw compute_backoff(PolicyKind kind, const ContentionState& state, int ipt,
                            const PolicyParams& params, Rng& rng);

/// Adds \p id at its ordered position if absent. Returns true when inserted.
bool insert_neighbor(ContentionState& state, BssId id,
                     const OrderingPolicy& ordering = default_ordering());

/// Detected inter-BSS transmission start. Below CCA the state is returned unchanged.
ContentionState iyt_on_tx_start(ContentionState state, BssId source, double rx_power_dbm,
                                double cca_dbm,
                                const OrderingPolicy& ordering = default_ordering());

/// Detected transmission end: hands the token to the successor of \p source and
/// recomputes the circular distance from the token to self.
ContentionState iyt_on_tx_end(ContentionState state, BssId source,
                              const OrderingPolicy& ordering = default_ordering());

/// Idle-to-busy transition during a countdown. Only DB counts it.
ContentionState on_backoff_decrement_interrupted(PolicyKind kind, ContentionState state);

/// n resets on success and grows on failure; IPT always resets.
ContentionState on_transmission_outcome(ContentionState state, bool success);

}  // namespace dcfsim

#endif  // DCFSIM_BACKOFF_HPP
