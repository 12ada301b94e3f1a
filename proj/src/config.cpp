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

#include "dcfsim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace dcfsim {

namespace {

std::string
join_errors(const std::vector<std::string>& errors)
{
  std::ostringstream out;
  out << "invalid configuration";
  for (const auto& e : errors) {
    out << "\n  " << e;
  }
  return out.str();
}

/// Reads keys from one JSON object, recording type errors and unknown keys.
class ObjectReader
{
public:
  ObjectReader(const nlohmann::json& object, std::string path, std::vector<std::string>& errors)
    : m_object(object), m_path(std::move(path)), m_errors(errors)
  {
    if (!m_object.is_object()) {
      m_errors.push_back(m_path + ": expected an object");
      m_valid = false;
    }
  }

  template <typename T>
  void read(const char* key, T& out)
  {
    if (!m_valid) {
      return;
    }
    m_known.insert(key);
    auto it = m_object.find(key);
    if (it == m_object.end()) {
      return;
    }
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception&) {
      m_errors.push_back(m_path + "." + key + ": wrong type (" + std::string(it->type_name()) + ")");
    }
  }

  template <typename T>
  void read(const char* key, std::optional<T>& out)
  {
    if (!m_valid || !m_object.contains(key)) {
      m_known.insert(key);
      return;
    }
    T value{};
    read(key, value);
    out = value;
  }

  /// Calls \p fn with the nested value when present.
  template <typename Fn>
  void nested(const char* key, Fn&& fn)
  {
    if (!m_valid) {
      return;
    }
    m_known.insert(key);
    auto it = m_object.find(key);
    if (it != m_object.end()) {
      fn(*it, m_path + "." + key);
    }
  }

  void finish()
  {
    if (!m_valid) {
      return;
    }
    for (const auto& [key, value] : m_object.items()) {
      if (!m_known.contains(key)) {
        m_errors.push_back(m_path + "." + key + ": unknown key");
      }
    }
  }

private:
  const nlohmann::json& m_object;
  std::string m_path;
  std::vector<std::string>& m_errors;
  std::set<std::string, std::less<>> m_known;
  bool m_valid = true;
};

template <typename Enum, typename Parse>
void
read_enum(ObjectReader& reader, const char* key, Enum& out, Parse&& parse, const std::string& path,
          std::vector<std::string>& errors)
{
  std::optional<std::string> name;
  reader.read(key, name);
  if (!name) {
    return;
  }
  if (auto parsed = parse(*name)) {
    out = *parsed;
  } else {
    errors.push_back(path + "." + key + ": unknown value \"" + *name + "\"");
  }
}

std::optional<ShadowingMode>
parse_shadowing(std::string_view name)
{
  if (name == "expected") {
    return ShadowingMode::Expected;
  }
  if (name == "sampled") {
    return ShadowingMode::Sampled;
  }
  return std::nullopt;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
  : std::runtime_error(join_errors(errors)), m_errors(std::move(errors))
{
}

nlohmann::json
to_json(const RunConfig& c)
{
  using nlohmann::json;
  json mcs = json::array();
  for (const auto& e : c.mcs) {
    mcs.push_back({{"min_snr_db", e.min_snr_db}, {"rate_bps", e.rate_bps}});
  }
  json overrides = json::array();
  for (const auto& o : c.bss_policies) {
    json entry = {{"bss_id", to_underlying(o.bss)}};
    if (o.kind) {
      entry["kind"] = std::string(to_string(*o.kind));
    }
    if (o.cw0) {
      entry["cw0"] = *o.cw0;
    }
    if (o.n_max) {
      entry["n_max"] = *o.n_max;
    }
    if (o.db_base) {
      entry["db_base"] = *o.db_base;
    }
    overrides.push_back(std::move(entry));
  }
  const auto& e = c.experiment;
  return json{
    {"schema_version", kConfigSchemaVersion},
    {"experiment",
     {{"kind", std::string(to_string(e.kind))},
      {"n_bss", e.n_bss},
      {"n_sim", e.n_sim},
      {"horizon_s", e.horizon_s},
      {"interval_s", e.interval_s},
      {"master_seed", e.master_seed},
      {"output_prefix", c.output_prefix}}},
    {"radio",
     {{"tx_power_dbm", c.radio.tx_power_dbm},
      {"antenna_gain_tx_dbi", c.radio.antenna_gain_tx_dbi},
      {"antenna_gain_rx_dbi", c.radio.antenna_gain_rx_dbi},
      {"noise_dbm", c.radio.noise_dbm},
      {"cca_dbm", c.radio.cca_dbm},
      {"capture_threshold_db", c.radio.capture_threshold_db},
      {"bandwidth_mhz", c.radio.bandwidth_mhz},
      {"carrier_ghz", c.radio.carrier_ghz}}},
    {"path_loss",
     {{"pl0_db", c.path_loss.pl0_db},
      {"exponent", c.path_loss.exponent},
      {"shadow_db", c.path_loss.shadow_db},
      {"obstacle_db", c.path_loss.obstacle_db},
      {"shadowing", c.path_loss.shadowing == ShadowingMode::Sampled ? "sampled" : "expected"}}},
    {"mac",
     {{"slot_us", c.mac.slot_us},
      {"sifs_us", c.mac.sifs_us},
      {"difs_us", c.mac.difs_us},
      {"rts_us", c.mac.rts_us},
      {"cts_us", c.mac.cts_us},
      {"back_us", c.mac.back_us},
      {"phy_header_us", c.mac.phy_header_us},
      {"txop_max_us", c.txop.txop_max_us},
      {"ampdu_max", c.txop.ampdu_max},
      {"mpdu_bytes", c.txop.mpdu_bytes}}},
    {"mcs_table", std::move(mcs)},
    {"policy",
     {{"kind", std::string(to_string(c.policy))},
      {"cw0", c.policy_params.cw0},
      {"n_max", c.policy_params.n_max},
      {"db_base", c.policy_params.db_base},
      {"iyt_redraw_on_token_change", c.iyt_redraw_on_token_change}}},
    {"bss_policies", std::move(overrides)},
    {"geometry",
     {{"toy",
       {{"ap_separation_m", c.toy.ap_separation_m},
        {"sta_distance_m", c.toy.sta_distance_m},
        {"margin_db", c.toy.margin_db}}},
      {"overlap",
       {{"ap_disc_radius_m", c.overlap.ap_disc_radius_m},
        {"sta_min_m", c.overlap.sta_min_m},
        {"sta_max_m", c.overlap.sta_max_m}}}}},
  };
}

RunConfig
parse_config(const nlohmann::json& document)
{
  using nlohmann::json;
  RunConfig c;
  std::vector<std::string> errors;
  ObjectReader root(document, "config", errors);

  std::optional<int> version;
  root.read("schema_version", version);
  if (document.is_object()) {
    if (!version) {
      errors.push_back("config.schema_version: missing");
    } else if (*version != kConfigSchemaVersion) {
      errors.push_back("config.schema_version: unsupported version " + std::to_string(*version));
    }
  }

  root.nested("experiment", [&](const json& j, const std::string& path) {
    ObjectReader r(j, path, errors);
    read_enum(r, "kind", c.experiment.kind, parse_experiment_kind, path, errors);
    r.read("n_bss", c.experiment.n_bss);
    r.read("n_sim", c.experiment.n_sim);
    r.read("horizon_s", c.experiment.horizon_s);
    r.read("interval_s", c.experiment.interval_s);
    r.read("master_seed", c.experiment.master_seed);
    r.read("output_prefix", c.output_prefix);
    r.finish();
  });

  root.nested("radio", [&](const json& j, const std::string& path) {
    ObjectReader r(j, path, errors);
    r.read("tx_power_dbm", c.radio.tx_power_dbm);
    r.read("antenna_gain_tx_dbi", c.radio.antenna_gain_tx_dbi);
    r.read("antenna_gain_rx_dbi", c.radio.antenna_gain_rx_dbi);
    r.read("noise_dbm", c.radio.noise_dbm);
    r.read("cca_dbm", c.radio.cca_dbm);
    r.read("capture_threshold_db", c.radio.capture_threshold_db);
    r.read("bandwidth_mhz", c.radio.bandwidth_mhz);
    r.read("carrier_ghz", c.radio.carrier_ghz);
    r.finish();
  });

  root.nested("path_loss", [&](const json& j, const std::string& path) {
    ObjectReader r(j, path, errors);
    r.read("pl0_db", c.path_loss.pl0_db);
    r.read("exponent", c.path_loss.exponent);
    r.read("shadow_db", c.path_loss.shadow_db);
    r.read("obstacle_db", c.path_loss.obstacle_db);
    read_enum(r, "shadowing", c.path_loss.shadowing, parse_shadowing, path, errors);
    r.finish();
  });

  root.nested("mac", [&](const json& j, const std::string& path) {
    ObjectReader r(j, path, errors);
    r.read("slot_us", c.mac.slot_us);
    r.read("sifs_us", c.mac.sifs_us);
    r.read("difs_us", c.mac.difs_us);
    r.read("rts_us", c.mac.rts_us);
    r.read("cts_us", c.mac.cts_us);
    r.read("back_us", c.mac.back_us);
    r.read("phy_header_us", c.mac.phy_header_us);
    r.read("txop_max_us", c.txop.txop_max_us);
    r.read("ampdu_max", c.txop.ampdu_max);
    r.read("mpdu_bytes", c.txop.mpdu_bytes);
    r.finish();
  });

  root.nested("mcs_table", [&](const json& j, const std::string& path) {
    if (!j.is_array()) {
      errors.push_back(path + ": expected an array");
      return;
    }
    c.mcs.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string entry_path = path + "[" + std::to_string(i) + "]";
      ObjectReader r(j[i], entry_path, errors);
      McsEntry entry;
      r.read("min_snr_db", entry.min_snr_db);
      r.read("rate_bps", entry.rate_bps);
      r.finish();
      c.mcs.push_back(entry);
    }
  });

  root.nested("policy", [&](const json& j, const std::string& path) {
    ObjectReader r(j, path, errors);
    read_enum(r, "kind", c.policy, parse_policy_kind, path, errors);
    r.read("cw0", c.policy_params.cw0);
    r.read("n_max", c.policy_params.n_max);
    r.read("db_base", c.policy_params.db_base);
    r.read("iyt_redraw_on_token_change", c.iyt_redraw_on_token_change);
    r.finish();
  });

  root.nested("bss_policies", [&](const json& j, const std::string& path) {
    if (!j.is_array()) {
      errors.push_back(path + ": expected an array");
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string entry_path = path + "[" + std::to_string(i) + "]";
      ObjectReader r(j[i], entry_path, errors);
      PolicyOverride o;
      std::optional<std::uint32_t> id;
      r.read("bss_id", id);
      if (j[i].is_object() && !id) {
        errors.push_back(entry_path + ".bss_id: missing");
      }
      o.bss = BssId{id.value_or(0)};
      std::optional<std::string> kind;
      r.read("kind", kind);
      if (kind) {
        o.kind = parse_policy_kind(*kind);
        if (!o.kind) {
          errors.push_back(entry_path + ".kind: unknown value \"" + *kind + "\"");
        }
      }
      r.read("cw0", o.cw0);
      r.read("n_max", o.n_max);
      r.read("db_base", o.db_base);
      r.finish();
      c.bss_policies.push_back(o);
    }
  });

  root.nested("geometry", [&](const json& j, const std::string& path) {
    ObjectReader r(j, path, errors);
    r.nested("toy", [&](const json& t, const std::string& tpath) {
      ObjectReader tr(t, tpath, errors);
      tr.read("ap_separation_m", c.toy.ap_separation_m);
      tr.read("sta_distance_m", c.toy.sta_distance_m);
      tr.read("margin_db", c.toy.margin_db);
      tr.finish();
    });
    r.nested("overlap", [&](const json& o, const std::string& opath) {
      ObjectReader orr(o, opath, errors);
      orr.read("ap_disc_radius_m", c.overlap.ap_disc_radius_m);
      orr.read("sta_min_m", c.overlap.sta_min_m);
      orr.read("sta_max_m", c.overlap.sta_max_m);
      orr.finish();
    });
    r.finish();
  });

  root.finish();
  if (!errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return c;
}

RunConfig
resolve_config(const nlohmann::json& document)
{
  RunConfig config = parse_config(document);
  if (auto errors = validate(config.experiment, config); !errors.empty()) {
    throw ConfigError(std::move(errors));
  }
  return config;
}

RunConfig
load_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({"cannot open config file: " + path.string()});
  }
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return resolve_config(document);
}

}  // namespace dcfsim
