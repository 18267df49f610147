// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_ORACLE_HPP
#define OFDMA_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "ofdma/config.hpp"
#include "ofdma/matrix.hpp"

namespace ofdma {

/// Brute-force reference result.  best_assignment[n] is the user of
/// subcarrier n; ties in best_value resolve to the lexicographically
/// smallest assignment vector regardless of thread count.
struct OracleResult {
  double best_value = 0.0;
  std::vector<int> best_assignment;
  std::uint64_t instances_enumerated = 0;
};

/// Enumerates all K^N full assignments, water-fills each against `budget`,
/// and returns the maximum sum rate.  K^N is capped at 10^6 (ConfigError).
/// Enumeration is partitioned across OpenMP threads with a deterministic
/// merge; brute_force_p1_serial is the plain-loop reference.
OracleResult brute_force_p1(const ChannelMatrix& g, const ScenarioConfig& cfg,
                            double budget);
OracleResult brute_force_p1_serial(const ChannelMatrix& g,
                                   const ScenarioConfig& cfg, double budget);

/// Enumerates the K^N full assignments, skips those leaving any user empty,
/// applies equal-rate channel inversion per user, and returns the minimum
/// total power.  instances_enumerated counts the feasible assignments.
/// This is the optimum of P2 restricted to the equal-rate-per-subcarrier
/// power rule, not of unrestricted P2.
OracleResult brute_force_p2(const ChannelMatrix& g, const ScenarioConfig& cfg);

}  // namespace ofdma

#endif  // OFDMA_ORACLE_HPP
