// SPDX-License-Identifier: Apache-2.0

#include "ofdma/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ofdma/errors.hpp"

namespace ofdma {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail_field(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

void check_positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) fail_field(field, "must be > 0");
}

/// 1-based line of the first occurrence of `"key"` in the file text, or 0.
int key_line(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i)
    if (text[i] == '\n') ++line;
  return line;
}

int get_int(const ordered_json& v, const std::string& key) {
  if (!v.is_number_integer())
    fail_field(key, "expected an integer, got " + v.dump());
  return v.get<int>();
}

double get_double(const ordered_json& v, const std::string& key) {
  if (!v.is_number())
    fail_field(key, "expected a number, got " + v.dump());
  return v.get<double>();
}

std::uint64_t get_seed(const ordered_json& v, const std::string& key) {
  if (!v.is_number_unsigned() && !v.is_number_integer())
    fail_field(key, "expected a 64-bit unsigned integer, got " + v.dump());
  if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
    fail_field(key, "must be >= 0");
  return v.get<std::uint64_t>();
}

}  // namespace

void ScenarioConfig::validate() const {
  if (num_users < 1) fail_field("K", "must be >= 1");
  if (num_subcarriers < 1) fail_field("N", "must be >= 1");
  check_positive(subcarrier_bandwidth, "B");
  check_positive(noise_psd, "N0");
  check_positive(max_power, "Pmax");
  if (!(min_rate >= 0.0) || !std::isfinite(min_rate))
    fail_field("Rmin", "must be >= 0");
  if (!(circuit_power >= 0.0) || !std::isfinite(circuit_power))
    fail_field("Pc", "must be >= 0");
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0))
    fail_field("loss_rate", "must be in [0, 1]");
  if (num_taps < 1) fail_field("num_taps", "must be >= 1");
  check_positive(delay_decay, "delay_decay");
  check_positive(dist_min, "dist_min");
  check_positive(dist_max, "dist_max");
  if (dist_min > dist_max) fail_field("dist_min", "must be <= dist_max");
  check_positive(freq_weight, "freq_weight");
  check_positive(space_weight, "space_weight");
  if (freq_weight < space_weight)
    fail_field("freq_weight", "must be >= space_weight");
  if (num_power_levels < 1) fail_field("L", "must be >= 1");
  if (repair_max_iters < 1) fail_field("repair_max_iters", "must be >= 1");
}

ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& source_name,
                            const ConfigOverrides& overrides) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  if (!j.is_object())
    throw ConfigError(source_name + ": expected a flat JSON object");

  ScenarioConfig cfg;
  bool iters_set = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "K") cfg.num_users = get_int(value, key);
    else if (key == "N") cfg.num_subcarriers = get_int(value, key);
    else if (key == "B") cfg.subcarrier_bandwidth = get_double(value, key);
    else if (key == "N0") cfg.noise_psd = get_double(value, key);
    else if (key == "Pmax") cfg.max_power = get_double(value, key);
    else if (key == "Rmin") cfg.min_rate = get_double(value, key);
    else if (key == "Pc") cfg.circuit_power = get_double(value, key);
    else if (key == "loss_rate") cfg.loss_rate = get_double(value, key);
    else if (key == "seed") cfg.seed = get_seed(value, key);
    else if (key == "num_taps") cfg.num_taps = get_int(value, key);
    else if (key == "delay_decay") cfg.delay_decay = get_double(value, key);
    else if (key == "dist_min") cfg.dist_min = get_double(value, key);
    else if (key == "dist_max") cfg.dist_max = get_double(value, key);
    else if (key == "freq_weight") cfg.freq_weight = get_double(value, key);
    else if (key == "space_weight") cfg.space_weight = get_double(value, key);
    else if (key == "L") cfg.num_power_levels = get_int(value, key);
    else if (key == "repair_max_iters") {
      cfg.repair_max_iters = get_int(value, key);
      iters_set = true;
    } else {
      const int line = key_line(json_text, key);
      std::ostringstream msg;
      msg << source_name << ": unknown config key '" << key << "'";
      if (line > 0) msg << " (line " << line << ")";
      throw ConfigError(msg.str());
    }
  }

  auto apply = [&](auto& field, const auto& opt) {
    if (opt) field = *opt;
  };
  apply(cfg.num_users, overrides.num_users);
  apply(cfg.num_subcarriers, overrides.num_subcarriers);
  apply(cfg.subcarrier_bandwidth, overrides.subcarrier_bandwidth);
  apply(cfg.noise_psd, overrides.noise_psd);
  apply(cfg.max_power, overrides.max_power);
  apply(cfg.min_rate, overrides.min_rate);
  apply(cfg.circuit_power, overrides.circuit_power);
  apply(cfg.loss_rate, overrides.loss_rate);
  apply(cfg.seed, overrides.seed);
  apply(cfg.num_taps, overrides.num_taps);
  apply(cfg.delay_decay, overrides.delay_decay);
  apply(cfg.dist_min, overrides.dist_min);
  apply(cfg.dist_max, overrides.dist_max);
  apply(cfg.freq_weight, overrides.freq_weight);
  apply(cfg.space_weight, overrides.space_weight);
  apply(cfg.num_power_levels, overrides.num_power_levels);
  if (overrides.repair_max_iters) {
    cfg.repair_max_iters = *overrides.repair_max_iters;
    iters_set = true;
  }
  if (!iters_set) cfg.repair_max_iters = cfg.num_users + cfg.num_subcarriers;

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path,
                           const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path, overrides);
}

ScenarioConfig load_config(const std::string& path) {
  return load_config(path, ConfigOverrides{});
}

ScenarioConfig make_config(const ConfigOverrides& overrides) {
  return parse_config("{}", "<defaults>", overrides);
}

std::string config_to_json(const ScenarioConfig& cfg) {
  ordered_json j;
  j["K"] = cfg.num_users;
  j["N"] = cfg.num_subcarriers;
  j["B"] = cfg.subcarrier_bandwidth;
  j["N0"] = cfg.noise_psd;
  j["Pmax"] = cfg.max_power;
  j["Rmin"] = cfg.min_rate;
  j["Pc"] = cfg.circuit_power;
  j["loss_rate"] = cfg.loss_rate;
  j["seed"] = cfg.seed;
  j["num_taps"] = cfg.num_taps;
  j["delay_decay"] = cfg.delay_decay;
  j["dist_min"] = cfg.dist_min;
  j["dist_max"] = cfg.dist_max;
  j["freq_weight"] = cfg.freq_weight;
  j["space_weight"] = cfg.space_weight;
  j["L"] = cfg.num_power_levels;
  j["repair_max_iters"] = cfg.repair_max_iters;
  return j.dump(2) + "\n";
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << config_to_json(cfg);
}

}  // namespace ofdma
