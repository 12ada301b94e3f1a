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

#ifndef DCFSIM_PHY_HPP
#define DCFSIM_PHY_HPP

#include <span>
#include <stdexcept>
#include <vector>

namespace dcfsim {

class GeometryError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct RadioConfig
{
  double tx_power_dbm = 20.0;
  double antenna_gain_tx_dbi = 0.0;
  double antenna_gain_rx_dbi = 0.0;
  double noise_dbm = -95.0;
  double cca_dbm = -82.0;
  double capture_threshold_db = 10.0;
  double bandwidth_mhz = 20.0;
  double carrier_ghz = 6.0;
};

enum class ShadowingMode
{
  Expected,  // sigma/2 and omega/2 per 10 m, fixed
  Sampled,   // sigma*U and omega*U*(d/10), drawn once per link
};

struct PathLossParams
{
  double pl0_db = 5.0;
  double exponent = 4.4;
  double shadow_db = 9.5;
  double obstacle_db = 30.0;
  ShadowingMode shadowing = ShadowingMode::Expected;
};

struct LinkBudget
{
  double rx_power_dbm = 0.0;
  double snr_db = 0.0;
  double sinr_db = 0.0;
};

struct McsEntry
{
  double min_snr_db = 0.0;
  double rate_bps = 0.0;
};

using McsTable = std::vector<McsEntry>;

/// 20 MHz, single spatial stream, 0.8 us GI; thresholds are approximate.
McsTable default_mcs_table();

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Log-distance path loss with expected-value shadowing and obstacle terms:
/// PL(d) = PL0 + 10*nu*log10(d) + sigma/2 + (omega/2)*(d/10).
/// Throws GeometryError for d <= 0.
double path_loss(double distance_m, const PathLossParams& params);

/// Same model with the shadowing and obstacle terms scaled by per-link draws
/// in [0, 1] instead of their expected value 1/2.
double path_loss_sampled(double distance_m, const PathLossParams& params, double shadow_u,
                         double obstacle_u);

double rx_power(const RadioConfig& tx, double distance_m, const PathLossParams& params);

/// Energy detection: linear-domain sum of the detected powers against the CCA threshold.
bool cca_busy(std::span<const double> detected_powers_dbm, double cca_dbm);

double sinr(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm);

/// Capture rule; the threshold itself decodes.
inline bool decodable(double sinr_db, double capture_threshold_db)
{
  return sinr_db >= capture_threshold_db;
}

/// Returns 0 when the SNR is below the first entry (unusable link).
double snr_to_rate(double snr_db, std::span<const McsEntry> table);

/// True when the table is non-empty and ascending by threshold.
bool mcs_table_sorted(std::span<const McsEntry> table);

LinkBudget link_budget(double signal_dbm, std::span<const double> interferers_dbm,
                       double noise_dbm);

}  // namespace dcfsim

#endif  // DCFSIM_PHY_HPP
