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

#ifndef DCFSIM_CONFIG_HPP
#define DCFSIM_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcfsim/backoff.hpp"
#include "dcfsim/mac.hpp"
#include "dcfsim/phy.hpp"
#include "dcfsim/scenario.hpp"

namespace dcfsim {

inline constexpr int kConfigSchemaVersion = 1;

/// Raised for unreadable, malformed or invalid configurations. Carries every problem found.
class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(std::vector<std::string> errors);

  const std::vector<std::string>& errors() const noexcept { return m_errors; }

private:
  std::vector<std::string> m_errors;
};

struct PolicyOverride
{
  BssId bss{};
  std::optional<PolicyKind> kind;
  std::optional<int> cw0;
  std::optional<int> n_max;
  std::optional<int> db_base;
};

/// Fully resolved run configuration. Defaults follow the reference parameter set.
struct RunConfig
{
  ExperimentSpec experiment;
  std::string output_prefix = "run";

  RadioConfig radio;
  PathLossParams path_loss;
  MacTimings mac;
  TxopLimits txop;
  McsTable mcs = default_mcs_table();

  PolicyKind policy = PolicyKind::Beb;
  PolicyParams policy_params;
  /// IYT devices re-draw a pending backoff when an observed transmission end moves their token distance.
  bool iyt_redraw_on_token_change = true;
  std::vector<PolicyOverride> bss_policies;

  ToyGeometry toy;
  OverlapGeometry overlap;
};

nlohmann::json to_json(const RunConfig& config);

/// Strict parse over the defaults: unknown keys and type mismatches are errors.
/// Throws ConfigError. Does not run validate().
RunConfig parse_config(const nlohmann::json& document);

/// Reads, parses and validates. Throws ConfigError (including for a missing file).
RunConfig load_config(const std::filesystem::path& path);

/// parse_config followed by validate(); throws ConfigError listing every violation.
RunConfig resolve_config(const nlohmann::json& document);

}  // namespace dcfsim

#endif  // DCFSIM_CONFIG_HPP
