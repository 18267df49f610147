// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_CONFIG_HPP
#define OFDMA_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace ofdma {

/// All physical and algorithmic parameters of one scenario.
///
/// JSON keys (flat object, unknown keys rejected): K, N, B, N0, Pmax, Rmin,
/// Pc, loss_rate, seed, num_taps, delay_decay, dist_min, dist_max,
/// freq_weight, space_weight, L, repair_max_iters.
struct ScenarioConfig {
  int num_users = 8;                   // K
  int num_subcarriers = 20;            // N
  double subcarrier_bandwidth = 180e3; // B [Hz]
  double noise_psd = 1e-17;            // N0 [W/Hz]
  double max_power = 20.0;             // Pmax [W]
  double min_rate = 2e6;               // Rmin [bit/s per user]
  double circuit_power = 5.0;          // Pc [W]
  double loss_rate = 0.2;              // fraction of entries lost
  std::uint64_t seed = 1;
  int num_taps = 4;
  double delay_decay = 1.0;
  double dist_min = 100.0;             // [m]
  double dist_max = 500.0;             // [m]
  double freq_weight = 8.0;
  double space_weight = 1.0;
  int num_power_levels = 100;          // L
  int repair_max_iters = 28;           // defaults to K + N when not set

  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

/// Optional per-field overrides, applied on top of a loaded config
/// (CLI flags override file values).
struct ConfigOverrides {
  std::optional<int> num_users, num_subcarriers, num_taps, num_power_levels,
      repair_max_iters;
  std::optional<double> subcarrier_bandwidth, noise_psd, max_power, min_rate,
      circuit_power, loss_rate, delay_decay, dist_min, dist_max, freq_weight,
      space_weight;
  std::optional<std::uint64_t> seed;
};

/// Parses a flat JSON config file.  Absent keys keep their defaults;
/// `repair_max_iters` defaults to K + N of the resolved config.  Unknown keys
/// and invariant violations throw ConfigError naming the key (and line, when
/// recoverable from the file text).
ScenarioConfig load_config(const std::string& path);
ScenarioConfig load_config(const std::string& path,
                           const ConfigOverrides& overrides);

/// Parses config JSON text; `source_name` appears in error messages.
ScenarioConfig parse_config(const std::string& json_text,
                            const std::string& source_name,
                            const ConfigOverrides& overrides = {});

/// Applies overrides to defaults without reading a file.
ScenarioConfig make_config(const ConfigOverrides& overrides);

std::string config_to_json(const ScenarioConfig& cfg);
void save_config(const ScenarioConfig& cfg, const std::string& path);

}  // namespace ofdma

#endif  // OFDMA_CONFIG_HPP
