// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_REPAIR_HPP
#define OFDMA_REPAIR_HPP

#include <span>
#include <vector>

#include "ofdma/config.hpp"
#include "ofdma/matrix.hpp"

namespace ofdma {

/// Correlation weights for the four-neighbor weighted average: frequency
/// neighbors (k, n+-1) get freq_weight, spatial neighbors (k+-1, n) get
/// space_weight.  Invariant: freq_weight >= space_weight > 0.
struct NeighborWeights {
  double freq_weight = 8.0;
  double space_weight = 1.0;

  void validate() const;
  static NeighborWeights from_config(const ScenarioConfig& cfg);
};

struct RepairResult {
  ChannelMatrix repaired;
  std::vector<CellIndex> filled_indices;  // row-major order
  int iterations_used = 0;
  int fallback_count = 0;
};

/// Fills missing entries with the weighted average of valid neighbors,
/// sweeping Jacobi-style: values filled in pass i become usable neighbors in
/// pass i+1, never within pass i, so the result is independent of traversal
/// order and thread count.  Entries still missing after max_iters passes (or
/// after a pass that fills nothing) take the global observed mean (1.0 when
/// nothing was observed) and are counted in fallback_count.  Observed entries
/// are returned bit-exactly.
///
/// The parallel entry point distributes each pass over OpenMP threads;
/// nncf_repair_serial is the plain-loop reference, kept for testing and
/// benchmarks, and produces bit-identical results.
RepairResult nncf_repair(const MaskedChannelMatrix& raw,
                         const NeighborWeights& weights, int max_iters);
RepairResult nncf_repair_serial(const MaskedChannelMatrix& raw,
                                const NeighborWeights& weights, int max_iters);

/// Fills each missing entry with its row's observed mean; rows with no
/// observations use the global observed mean (1.0 when Omega is empty).
ChannelMatrix mean_impute(const MaskedChannelMatrix& raw);

/// sqrt(mean over `indices` of (truth - estimate)^2).  Empty index set is a
/// ConfigError.
double rmse(const ChannelMatrix& truth, const ChannelMatrix& estimate,
            std::span<const CellIndex> indices);

}  // namespace ofdma

#endif  // OFDMA_REPAIR_HPP
