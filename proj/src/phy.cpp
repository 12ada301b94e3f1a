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

#include "dcfsim/phy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dcfsim {

McsTable
default_mcs_table()
{
  return {
    {2.0, 8.6e6},  {5.0, 17.2e6},  {9.0, 25.8e6},  {11.0, 34.4e6},
    {15.0, 51.6e6}, {18.0, 68.8e6}, {20.0, 77.4e6}, {25.0, 86.0e6},
  };
}

double
dbm_to_mw(double dbm)
{
  return std::pow(10.0, dbm / 10.0);
}

double
mw_to_dbm(double mw)
{
  if (mw <= 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(mw);
}

namespace {

void
check_distance(double distance_m)
{
  if (!(distance_m > 0.0)) {
    throw GeometryError("degenerate geometry: distance must be positive");
  }
}

}  // namespace

double
path_loss(double distance_m, const PathLossParams& params)
{
  return path_loss_sampled(distance_m, params, 0.5, 0.5);
}

double
path_loss_sampled(double distance_m, const PathLossParams& params, double shadow_u,
                  double obstacle_u)
{
  check_distance(distance_m);
  return params.pl0_db + 10.0 * params.exponent * std::log10(distance_m) +
         params.shadow_db * shadow_u + params.obstacle_db * obstacle_u * (distance_m / 10.0);
}

double
rx_power(const RadioConfig& tx, double distance_m, const PathLossParams& params)
{
  return tx.tx_power_dbm + tx.antenna_gain_tx_dbi + tx.antenna_gain_rx_dbi -
         path_loss(distance_m, params);
}

bool
cca_busy(std::span<const double> detected_powers_dbm, double cca_dbm)
{
  if (detected_powers_dbm.empty()) {
    return false;
  }
  double total_mw = 0.0;
  for (double p : detected_powers_dbm) {
    total_mw += dbm_to_mw(p);
  }
  return mw_to_dbm(total_mw) >= cca_dbm;
}

double
sinr(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm)
{
  if (interferers_dbm.empty()) {
    return signal_dbm - noise_dbm;
  }
  double denom_mw = dbm_to_mw(noise_dbm);
  for (double p : interferers_dbm) {
    denom_mw += dbm_to_mw(p);
  }
  return signal_dbm - mw_to_dbm(denom_mw);
}

double
snr_to_rate(double snr_db, std::span<const McsEntry> table)
{
  double rate = 0.0;
  for (const auto& entry : table) {
    if (entry.min_snr_db > snr_db) {
      break;
    }
    rate = entry.rate_bps;
  }
  return rate;
}

bool
mcs_table_sorted(std::span<const McsEntry> table)
{
  if (table.empty()) {
    return false;
  }
  return std::is_sorted(table.begin(), table.end(),
                        [](const McsEntry& a, const McsEntry& b) { return a.min_snr_db < b.min_snr_db; });
}

LinkBudget
link_budget(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm)
{
  return LinkBudget{signal_dbm, signal_dbm - noise_dbm, sinr(signal_dbm, interferers_dbm, noise_dbm)};
}

}  // namespace dcfsim
