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

#include "dcfsim/backoff.hpp"

#include <algorithm>
#include <cassert>

namespace dcfsim {

std::string_view
to_string(PolicyKind kind)
{
  switch (kind) {
    case PolicyKind::Beb:
      return "beb";
    case PolicyKind::Db:
      return "db";
    case PolicyKind::Iyt:
      return "iyt";
  }
  return "unknown";
}

std::optional<PolicyKind>
parse_policy_kind(std::string_view name)
{
  if (name == "beb") {
    return PolicyKind::Beb;
  }
  if (name == "db") {
    return PolicyKind::Db;
  }
  if (name == "iyt") {
    return PolicyKind::Iyt;
  }
  return std::nullopt;
}

ContentionState
make_contention_state(BssId self)
{
  ContentionState state;
  state.self = self;
  state.neighbor_list.push_back(self);
  return state;
}

std::size_t
AscendingRoundRobin::insert_position(std::span<const BssId> list, BssId id) const
{
  return static_cast<std::size_t>(std::lower_bound(list.begin(), list.end(), id) - list.begin());
}

std::size_t
AscendingRoundRobin::next_index(std::span<const BssId> list, std::size_t source_index) const
{
  return (source_index + 1) % list.size();
}

const OrderingPolicy&
default_ordering()
{
  static const AscendingRoundRobin rr;
  return rr;
}

int
beb_contention_window(int n, const PolicyParams& params)
{
  return params.cw0 << std::min(n, params.n_max);
}

std::pair<int, int>
iyt_window(int d, int cw0)
{
  return {std::max(0, d * cw0 - 1), (d + 1) * cw0 - 1};
}

namespace {

int
uniform_slots(int lo, int hi, Rng& rng)
{
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

BackoffDraw
beb_backoff(int n, const PolicyParams& params, Rng& rng)
{
  assert(n >= 0);
  const int cw = beb_contention_window(n, params);
  return BackoffDraw{uniform_slots(0, cw - 1, rng), cw};
}

BackoffDraw
db_backoff(int n, int ipt, const PolicyParams& params, Rng& rng)
{
  if (n == 0) {
    return BackoffDraw{params.db_base + ipt, 0};
  }
  return beb_backoff(n, params, rng);
}

BackoffDraw
iyt_backoff(const ContentionState& state, const PolicyParams& params, Rng& rng)
{
  const int d = state.token ? state.token_distance : 0;
  const auto [lo, hi] = iyt_window(d, params.cw0);
  return BackoffDraw{uniform_slots(lo, hi, rng), hi - lo + 1};
}

BackoffDraw
compute_backoff(PolicyKind kind, const ContentionState& state, int ipt,
                const PolicyParams& params, Rng& rng)
{
  switch (kind) {
    case PolicyKind::Beb:
      return beb_backoff(state.n, params, rng);
    case PolicyKind::Db:
      return db_backoff(state.n, ipt, params, rng);
    case PolicyKind::Iyt:
      return iyt_backoff(state, params, rng);
  }
  return {};
}

bool
insert_neighbor(ContentionState& state, BssId id, const OrderingPolicy& ordering)
{
  auto& list = state.neighbor_list;
  if (std::find(list.begin(), list.end(), id) != list.end()) {
    return false;
  }
  const std::size_t pos = ordering.insert_position(list, id);
  list.insert(list.begin() + static_cast<std::ptrdiff_t>(pos), id);
  if (state.token) {
    // Indices shifted; the distance to the token is positional.
    const auto index_of = [&](BssId x) {
      return static_cast<int>(std::find(list.begin(), list.end(), x) - list.begin());
    };
    const int size = static_cast<int>(list.size());
    state.token_distance = ((index_of(state.self) - index_of(*state.token)) % size + size) % size;
  }
  return true;
}

ContentionState
iyt_on_tx_start(ContentionState state, BssId source, double rx_power_dbm, double cca_dbm,
                const OrderingPolicy& ordering)
{
  if (rx_power_dbm < cca_dbm) {
    return state;
  }
  ++state.ipt;
  if (source != state.self) {
    insert_neighbor(state, source, ordering);
  }
  return state;
}

ContentionState
iyt_on_tx_end(ContentionState state, BssId source, const OrderingPolicy& ordering)
{
  const auto& list = state.neighbor_list;
  const auto src = std::find(list.begin(), list.end(), source);
  if (src == list.end()) {
    return state;
  }
  const auto size = static_cast<int>(list.size());
  const std::size_t token_index =
    ordering.next_index(list, static_cast<std::size_t>(src - list.begin()));
  const auto self_index =
    static_cast<int>(std::find(list.begin(), list.end(), state.self) - list.begin());
  state.token = list[token_index];
  state.token_distance = ((self_index - static_cast<int>(token_index)) % size + size) % size;
  return state;
}

ContentionState
on_backoff_decrement_interrupted(PolicyKind kind, ContentionState state)
{
  if (kind == PolicyKind::Db) {
    ++state.ipt;
  }
  return state;
}

ContentionState
on_transmission_outcome(ContentionState state, bool success)
{
  state.n = success ? 0 : state.n + 1;
  state.ipt = 0;
  return state;
}

}  // namespace dcfsim
