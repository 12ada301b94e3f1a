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

#include "dcfsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "dcfsim/config.hpp"

namespace dcfsim {

double
distance(const Position& a, const Position& b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

std::string_view
to_string(ExperimentKind kind)
{
  switch (kind) {
    case ExperimentKind::ToyA:
      return "toy_a";
    case ExperimentKind::ToyB:
      return "toy_b";
    case ExperimentKind::Overlap:
      return "overlap";
    case ExperimentKind::Grid:
      return "grid";
  }
  return "unknown";
}

std::optional<ExperimentKind>
parse_experiment_kind(std::string_view name)
{
  for (auto kind : {ExperimentKind::ToyA, ExperimentKind::ToyB, ExperimentKind::Overlap,
                    ExperimentKind::Grid}) {
    if (name == to_string(kind)) {
      return kind;
    }
  }
  return std::nullopt;
}

Rng
make_run_rng(std::uint64_t master_seed, std::uint64_t index)
{
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

namespace {

std::string
format_db(double v)
{
  std::ostringstream out;
  out.precision(2);
  out << std::fixed << v;
  return out.str();
}

/// SINR at \p sta for its own AP with the other AP transmitting concurrently.
double
concurrent_sinr(const Position& sta, const Position& own_ap, const Position& other_ap,
                const RadioConfig& radio, const PathLossParams& pl)
{
  const double signal = rx_power(radio, distance(sta, own_ap), pl);
  const double interferer = rx_power(radio, distance(sta, other_ap), pl);
  const double interferers[] = {interferer};
  return sinr(signal, interferers, radio.noise_dbm);
}

/// Bisection for the boundary of a monotone predicate on [lo, hi]; returns the
/// end of the interval on which \p ok holds (\p ok(lo) is assumed true).
double
bisect_boundary(double lo, double hi, const std::function<bool(double)>& ok)
{
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

Deployment
gen_toy(ToyVariant variant, const RadioConfig& radio, const PathLossParams& pl,
        const ToyGeometry& g)
{
  const double sep = g.ap_separation_m;
  if (!(sep > 0.0) || !(g.sta_distance_m > 0.0)) {
    throw ScenarioError("toy geometry: distances must be positive");
  }
  const double ap_ap = rx_power(radio, sep, pl);
  if (ap_ap < radio.cca_dbm + g.margin_db) {
    throw ScenarioError("toy geometry violates P_rx(AP1->AP2) >= CCA + margin: " +
                        format_db(ap_ap) + " dBm < " + format_db(radio.cca_dbm + g.margin_db) +
                        " dBm");
  }

  const double x0 = g.sta_distance_m + 1.0;
  const double y0 = 2.0;
  const Position ap1{x0, y0};
  const Position ap2{x0 + sep, y0};
  // The near-field reference distance bounds how close a STA may sit.
  constexpr double kMinStaDistance = 1.0;

  double r = g.sta_distance_m;
  Position sta1;
  Position sta2;
  if (variant == ToyVariant::A) {
    // STAs on the far side of their own AP; SINR falls as r grows.
    const double need = radio.capture_threshold_db + g.margin_db;
    auto sinr_at = [&](double dist) {
      return concurrent_sinr(Position{ap1.x - dist, y0}, ap1, ap2, radio, pl);
    };
    if (sinr_at(r) < need) {
      if (sinr_at(kMinStaDistance) < need) {
        throw ScenarioError("toy_a has no solution: SINR >= gamma_CE + margin (" + format_db(need) +
                            " dB) fails even at " + format_db(kMinStaDistance) + " m");
      }
      r = bisect_boundary(kMinStaDistance, r, [&](double d) { return sinr_at(d) >= need; });
    }
    sta1 = Position{ap1.x - r, y0};
    sta2 = Position{ap2.x + r, y0};
  } else {
    // STAs between the APs; SINR falls towards the midpoint.
    const double need = radio.capture_threshold_db - g.margin_db;
    auto sinr_at = [&](double dist) {
      return concurrent_sinr(Position{ap1.x + dist, y0}, ap1, ap2, radio, pl);
    };
    const double far = 0.5 * sep - 1e-3;
    if (r > far) {
      r = far;
    }
    if (sinr_at(r) > need) {
      if (sinr_at(far) > need) {
        throw ScenarioError("toy_b has no solution: SINR <= gamma_CE - margin (" + format_db(need) +
                            " dB) fails even at the AP midpoint");
      }
      // Smallest distance still satisfying the loss inequality.
      const double boundary = bisect_boundary(r, far, [&](double d) { return sinr_at(d) > need; });
      r = std::min(far, boundary + 1e-6);
    }
    sta1 = Position{ap1.x + r, y0};
    sta2 = Position{ap2.x - r, y0};
  }

  Deployment d;
  d.bsss.push_back(BssConfig{BssId{1}, ap1, sta1, 0, PolicyKind::Beb, {}});
  d.bsss.push_back(BssConfig{BssId{2}, ap2, sta2, 0, PolicyKind::Beb, {}});
  d.width_m = sep + 2.0 * x0;
  d.height_m = 2.0 * y0;
  return d;
}

Deployment
gen_overlap(int n_bss, Rng& rng, const OverlapGeometry& g)
{
  if (n_bss < 1 || n_bss > 9) {
    throw ScenarioError("n_bss out of [1,9]");
  }
  const double extent = g.ap_disc_radius_m + g.sta_max_m;
  const Position center{extent, extent};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  Deployment d;
  d.width_m = 2.0 * extent;
  d.height_m = 2.0 * extent;
  // Draw order per BSS: AP radius, AP angle, STA angle, STA radius.
  for (int i = 0; i < n_bss; ++i) {
    const double ap_r = g.ap_disc_radius_m * std::sqrt(unit(rng));
    const double ap_theta = kTwoPi * unit(rng);
    const Position ap{center.x + ap_r * std::cos(ap_theta), center.y + ap_r * std::sin(ap_theta)};
    const double sta_theta = kTwoPi * unit(rng);
    const double sta_r = g.sta_min_m + (g.sta_max_m - g.sta_min_m) * unit(rng);
    const Position sta{ap.x + sta_r * std::cos(sta_theta), ap.y + sta_r * std::sin(sta_theta)};
    d.bsss.push_back(BssConfig{BssId{static_cast<std::uint32_t>(i + 1)}, ap, sta, 0,
                               PolicyKind::Beb, {}});
  }
  return d;
}

Deployment
gen_grid(Rng& rng)
{
  constexpr int kSide = 3;
  constexpr double kCell = 5.0;
  constexpr int kReuse = 3;
  constexpr double kMinStaDistance = 0.1;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Deployment d;
  d.width_m = kSide * kCell;
  d.height_m = kSide * kCell;
  for (int row = 0; row < kSide; ++row) {
    for (int col = 0; col < kSide; ++col) {
      const Position ap{(col + 0.5) * kCell, (row + 0.5) * kCell};
      Position sta;
      // Resample the (measure-zero) case of a STA on top of its AP.
      do {
        sta = Position{(col + unit(rng)) * kCell, (row + unit(rng)) * kCell};
      } while (distance(ap, sta) < kMinStaDistance);
      d.bsss.push_back(BssConfig{BssId{static_cast<std::uint32_t>(row * kSide + col + 1)}, ap,
                                 sta, (row + col) % kReuse, PolicyKind::Beb, {}});
    }
  }
  return d;
}

void
assign_policies(Deployment& deployment, const RunConfig& config)
{
  for (auto& bss : deployment.bsss) {
    bss.policy = config.policy;
    bss.params = config.policy_params;
    for (const auto& o : config.bss_policies) {
      if (o.bss != bss.id) {
        continue;
      }
      bss.policy = o.kind.value_or(bss.policy);
      bss.params.cw0 = o.cw0.value_or(bss.params.cw0);
      bss.params.n_max = o.n_max.value_or(bss.params.n_max);
      bss.params.db_base = o.db_base.value_or(bss.params.db_base);
    }
  }
}

Deployment
build_deployment(const RunConfig& config, int run_index, Rng& rng)
{
  Deployment d;
  switch (config.experiment.kind) {
    case ExperimentKind::ToyA:
      d = gen_toy(ToyVariant::A, config.radio, config.path_loss, config.toy);
      break;
    case ExperimentKind::ToyB:
      d = gen_toy(ToyVariant::B, config.radio, config.path_loss, config.toy);
      break;
    case ExperimentKind::Overlap:
      d = gen_overlap(config.experiment.n_bss, rng, config.overlap);
      break;
    case ExperimentKind::Grid:
      d = gen_grid(rng);
      break;
  }
  d.seed = config.experiment.seed_for(run_index);
  assign_policies(d, config);
  return d;
}

std::vector<std::string>
validate(const ExperimentSpec& spec, const RunConfig& c)
{
  std::vector<std::string> errors;
  auto check = [&](bool ok, std::string message) {
    if (!ok) {
      errors.push_back(std::move(message));
    }
  };

  const bool toy = spec.kind == ExperimentKind::ToyA || spec.kind == ExperimentKind::ToyB;
  if (toy) {
    check(spec.n_bss == 2, "n_bss must be 2 for toy scenarios");
  } else if (spec.kind == ExperimentKind::Grid) {
    check(spec.n_bss == 9, "n_bss must be 9 for the grid scenario");
  } else {
    check(spec.n_bss >= 1 && spec.n_bss <= 9, "n_bss out of [1,9]");
  }
  check(spec.n_sim >= 1, "n_sim must be >= 1");
  check(spec.horizon_s > 0.0, "horizon_s must be positive");
  check(spec.interval_s > 0.0 && spec.interval_s <= spec.horizon_s,
        "interval_s must be in (0, horizon_s]");
  check(!c.output_prefix.empty(), "output_prefix must not be empty");

  check(c.radio.cca_dbm > c.radio.noise_dbm, "radio: cca_dbm must exceed noise_dbm");
  check(c.radio.capture_threshold_db >= 0.0, "radio: capture_threshold_db must be >= 0");
  check(c.path_loss.exponent > 0.0, "path_loss: exponent must be positive");
  check(c.path_loss.pl0_db >= 0.0, "path_loss: pl0_db must be >= 0");
  check(c.path_loss.shadow_db >= 0.0 && c.path_loss.obstacle_db >= 0.0,
        "path_loss: shadow_db and obstacle_db must be >= 0");

  const auto& m = c.mac;
  check(m.slot_us > 0 && m.sifs_us > 0 && m.difs_us > 0 && m.rts_us > 0 && m.cts_us > 0 &&
          m.back_us > 0 && m.phy_header_us > 0,
        "mac: all durations must be positive");
  check(m.difs() == m.sifs() + 2 * m.slot(), "mac: difs_us must equal sifs_us + 2*slot_us");
  check(c.txop.txop_max_us > 0.0, "mac: txop_max_us must be positive");
  check(c.txop.ampdu_max >= 1 && c.txop.ampdu_max <= 64, "mac: ampdu_max out of [1,64]");
  check(c.txop.mpdu_bytes >= 1, "mac: mpdu_bytes must be positive");

  check(mcs_table_sorted(c.mcs), "mcs_table must be non-empty and sorted ascending by min_snr_db");
  check(std::all_of(c.mcs.begin(), c.mcs.end(), [](const McsEntry& e) { return e.rate_bps > 0.0; }),
        "mcs_table: rates must be positive");

  auto check_params = [&](const PolicyParams& p, const std::string& where) {
    check(p.cw0 >= 1, where + ": cw0 must be >= 1");
    check(p.n_max >= 0 && p.n_max <= 20, where + ": n_max out of [0,20]");
    check(p.db_base >= 0, where + ": db_base must be >= 0");
  };
  check_params(c.policy_params, "policy");
  std::vector<std::uint32_t> seen;
  for (const auto& o : c.bss_policies) {
    const auto id = to_underlying(o.bss);
    const std::string where = "bss_policies[" + std::to_string(id) + "]";
    check(id >= 1 && static_cast<int>(id) <= spec.n_bss, where + ": bss_id out of [1,n_bss]");
    check(std::find(seen.begin(), seen.end(), id) == seen.end(), where + ": duplicate bss_id");
    seen.push_back(id);
    PolicyParams p = c.policy_params;
    p.cw0 = o.cw0.value_or(p.cw0);
    p.n_max = o.n_max.value_or(p.n_max);
    p.db_base = o.db_base.value_or(p.db_base);
    check_params(p, where);
  }

  if (spec.kind == ExperimentKind::Overlap) {
    const auto& g = c.overlap;
    check(g.ap_disc_radius_m >= 0.0, "geometry.overlap: ap_disc_radius_m must be >= 0");
    check(g.sta_min_m > 0.0 && g.sta_min_m <= g.sta_max_m,
          "geometry.overlap: need 0 < sta_min_m <= sta_max_m");
  }
  if (toy && c.toy.ap_separation_m > 0.0 && c.toy.sta_distance_m > 0.0 &&
      c.path_loss.exponent > 0.0) {
    try {
      gen_toy(spec.kind == ExperimentKind::ToyA ? ToyVariant::A : ToyVariant::B, c.radio,
              c.path_loss, c.toy);
    } catch (const ScenarioError& e) {
      errors.emplace_back(e.what());
    }
  } else if (toy) {
    errors.emplace_back("geometry.toy: distances must be positive");
  }
  return errors;
}

}  // namespace dcfsim
