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

#ifndef DCFSIM_SCENARIO_HPP
#define DCFSIM_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dcfsim/backoff.hpp"
#include "dcfsim/phy.hpp"

namespace dcfsim {

struct RunConfig;

class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Position
{
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Position&) const = default;
};

double distance(const Position& a, const Position& b);

struct BssConfig
{
  BssId id{};
  Position ap;
  Position sta;
  int channel = 0;
  PolicyKind policy = PolicyKind::Beb;
  PolicyParams params;
};

struct Deployment
{
  std::vector<BssConfig> bsss;
  double width_m = 0.0;
  double height_m = 0.0;
  std::uint64_t seed = 0;
};

enum class ExperimentKind : std::uint8_t
{
  ToyA,
  ToyB,
  Overlap,
  Grid,
};

std::string_view to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

struct ExperimentSpec
{
  ExperimentKind kind = ExperimentKind::Overlap;
  int n_bss = 9;
  int n_sim = 100;
  double horizon_s = 100.0;
  double interval_s = 1.0;
  std::uint64_t master_seed = 1;

  /// Deployment k of the experiment uses master_seed + k.
  std::uint64_t seed_for(int run_index) const
  {
    return master_seed + static_cast<std::uint64_t>(run_index);
  }
};

struct ToyGeometry
{
  double ap_separation_m = 10.0;
  double sta_distance_m = 3.5;  // preferred AP-STA distance
  double margin_db = 3.0;
};

struct OverlapGeometry
{
  double ap_disc_radius_m = 2.0;
  double sta_min_m = 3.0;
  double sta_max_m = 4.0;
};

enum class ToyVariant : std::uint8_t
{
  A,  // concurrent transmissions both decode
  B,  // concurrent transmissions both fail
};

/// Independent stream for deployment \p index of a run family.
Rng make_run_rng(std::uint64_t master_seed, std::uint64_t index);

/// Two overlapping BSSs whose STA positions are solved from the capture
/// inequalities. Throws ScenarioError naming the violated inequality.
Deployment gen_toy(ToyVariant variant, const RadioConfig& radio, const PathLossParams& path_loss,
                   const ToyGeometry& geometry = {});

/// Fully overlapping BSSs: APs inside a small disc, STAs on an annulus around their AP.
Deployment gen_overlap(int n_bss, Rng& rng, const OverlapGeometry& geometry = {});

/// 3x3 grid of 5 m cells, AP at each cell center, STA uniform in the cell,
/// channel (row + col) mod 3.
Deployment gen_grid(Rng& rng);

/// Applies the experiment-wide policy and any per-BSS overrides.
void assign_policies(Deployment& deployment, const RunConfig& config);

/// Generates deployment \p run_index of the configured experiment from \p rng.
Deployment build_deployment(const RunConfig& config, int run_index, Rng& rng);

/// Every violated constraint, in a stable order. Empty when the config is usable.
std::vector<std::string> validate(const ExperimentSpec& spec, const RunConfig& config);

}  // namespace dcfsim

#endif  // DCFSIM_SCENARIO_HPP
