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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>

#include "dcfsim/config.hpp"

using namespace dcfsim;
using nlohmann::json;

namespace {

bool
mentions(const ConfigError& e, const std::string& needle)
{
  return std::any_of(e.errors().begin(), e.errors().end(),
                     [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

ConfigError
parse_error(const json& doc)
{
  try {
    resolve_config(doc);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("config accepted");
  return ConfigError({});
}

}  // namespace

TEST_CASE("minimal document resolves to the defaults")
{
  const RunConfig c = resolve_config(json{{"schema_version", 1}});
  const RunConfig d;
  CHECK(to_json(c) == to_json(d));
  CHECK(c.radio.tx_power_dbm == 20.0);
  CHECK(c.radio.cca_dbm == -82.0);
  CHECK(c.radio.noise_dbm == -95.0);
  CHECK(c.radio.capture_threshold_db == 10.0);
  CHECK(c.path_loss.exponent == 4.4);
  CHECK(c.policy_params.cw0 == 16);
  CHECK(c.policy_params.n_max == 5);
  CHECK(c.policy_params.db_base == 5);
  CHECK(c.txop.txop_max_us == 5484.0);
  CHECK(c.txop.ampdu_max == 64);
  CHECK(c.txop.mpdu_bytes == 1500);
  CHECK(c.experiment.horizon_s == 100.0);
  CHECK(c.experiment.n_sim == 100);
  CHECK(c.experiment.interval_s == 1.0);
}

TEST_CASE("round trip through JSON is lossless")
{
  RunConfig c;
  c.experiment.kind = ExperimentKind::ToyA;
  c.experiment.n_bss = 2;
  c.experiment.master_seed = 77;
  c.policy = PolicyKind::Iyt;
  c.path_loss.shadowing = ShadowingMode::Sampled;
  c.bss_policies = {PolicyOverride{BssId{1}, PolicyKind::Beb, std::nullopt, 3, std::nullopt}};
  c.output_prefix = "rt";
  const json j = to_json(c);
  CHECK(to_json(resolve_config(j)) == j);
}

TEST_CASE("schema version is required")
{
  CHECK(mentions(parse_error(json::object()), "schema_version: missing"));
  CHECK(mentions(parse_error(json{{"schema_version", 2}}), "unsupported version 2"));
}

TEST_CASE("unknown keys are errors")
{
  const auto e = parse_error(json{{"schema_version", 1}, {"radio", {{"tx_powr_dbm", 10}}}, {"extra", 1}});
  CHECK(mentions(e, "radio.tx_powr_dbm: unknown key"));
  CHECK(mentions(e, "extra: unknown key"));
}

TEST_CASE("type mismatches and bad enum values are errors")
{
  const auto e = parse_error(json{{"schema_version", 1},
                                  {"experiment", {{"n_bss", "nine"}, {"kind", "ring"}}},
                                  {"policy", {{"kind", "aloha"}}}});
  CHECK(mentions(e, "n_bss: wrong type"));
  CHECK(mentions(e, "unknown value \"ring\""));
  CHECK(mentions(e, "unknown value \"aloha\""));
}

TEST_CASE("validation errors surface through resolve_config")
{
  const auto e = parse_error(json{{"schema_version", 1},
                                  {"experiment", {{"n_bss", 10}}},
                                  {"mac", {{"difs_us", 30}}}});
  CHECK(mentions(e, "n_bss out of [1,9]"));
  CHECK(mentions(e, "difs_us must equal sifs_us + 2*slot_us"));
}

TEST_CASE("unsorted MCS table is rejected")
{
  const auto e = parse_error(json{{"schema_version", 1},
                                  {"mcs_table", json::array({{{"min_snr_db", 9}, {"rate_bps", 2e7}},
                                                             {{"min_snr_db", 2}, {"rate_bps", 1e7}}})}});
  CHECK(mentions(e, "mcs_table"));
}

TEST_CASE("per-BSS overrides parse")
{
  const RunConfig c = resolve_config(
    json{{"schema_version", 1},
         {"experiment", {{"kind", "toy_a"}, {"n_bss", 2}}},
         {"bss_policies", json::array({{{"bss_id", 2}, {"kind", "iyt"}, {"cw0", 5}}})}});
  REQUIRE(c.bss_policies.size() == 1);
  CHECK(c.bss_policies[0].bss == BssId{2});
  CHECK(c.bss_policies[0].kind == PolicyKind::Iyt);
  CHECK(c.bss_policies[0].cw0 == 5);
  CHECK_FALSE(c.bss_policies[0].n_max.has_value());

  const auto e = parse_error(json{{"schema_version", 1},
                                  {"experiment", {{"kind", "toy_a"}, {"n_bss", 2}}},
                                  {"bss_policies", json::array({{{"bss_id", 4}}})}});
  CHECK(mentions(e, "bss_id out of [1,n_bss]"));
}

TEST_CASE("load_config names a missing path")
{
  const auto missing = std::filesystem::temp_directory_path() / "dcfsim_no_such_config.json";
  std::filesystem::remove(missing);
  try {
    load_config(missing);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(missing.string()) != std::string::npos);
  }
}

TEST_CASE("load_config reports malformed JSON")
{
  const auto path = std::filesystem::temp_directory_path() / "dcfsim_bad_config.json";
  {
    std::ofstream out(path);
    out << "{ \"schema_version\": 1, ";
  }
  CHECK_THROWS_AS(load_config(path), ConfigError);
  std::filesystem::remove(path);
}
