// SPDX-License-Identifier: Apache-2.0

#include "ofdma/repair.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "ofdma/errors.hpp"

namespace ofdma {
namespace {

double observed_mean_or_one(const MaskedChannelMatrix& raw) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < raw.values.size(); ++i) {
    if (raw.observed[i]) {
      sum += raw.values[i];
      ++count;
    }
  }
  return count > 0 ? sum / static_cast<double>(count) : 1.0;
}

// Weighted average over the valid 4-neighborhood of (k, n).  Accumulation
// order is fixed (left, right, up, down) so the serial reference and the
// parallel kernel produce bit-identical values.
inline bool neighbor_fill(const std::vector<double>& values,
                          const std::vector<std::uint8_t>& filled, int K,
                          int N, int k, int n, const NeighborWeights& w,
                          double* out) {
  const std::size_t row = static_cast<std::size_t>(k) * N;
  double num = 0.0, den = 0.0;
  if (n > 0 && filled[row + n - 1]) {
    num += w.freq_weight * values[row + n - 1];
    den += w.freq_weight;
  }
  if (n + 1 < N && filled[row + n + 1]) {
    num += w.freq_weight * values[row + n + 1];
    den += w.freq_weight;
  }
  if (k > 0 && filled[row - N + n]) {
    num += w.space_weight * values[row - N + n];
    den += w.space_weight;
  }
  if (k + 1 < K && filled[row + N + n]) {
    num += w.space_weight * values[row + N + n];
    den += w.space_weight;
  }
  if (den <= 0.0) return false;
  *out = num / den;
  return true;
}

RepairResult finalize(const MaskedChannelMatrix& raw,
                      std::vector<double>&& values,
                      const std::vector<std::uint8_t>& filled, int passes) {
  RepairResult res;
  res.repaired.num_users = raw.num_users;
  res.repaired.num_subcarriers = raw.num_subcarriers;
  res.repaired.seed = raw.seed;
  res.iterations_used = passes;
  res.filled_indices = raw.missing_indices();

  const double fallback = observed_mean_or_one(raw);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!filled[i]) {
      values[i] = fallback;
      ++res.fallback_count;
    }
  }
  res.repaired.gains = std::move(values);
  return res;
}

void check_repair_args(const NeighborWeights& weights, int max_iters) {
  weights.validate();
  if (max_iters < 1) throw ConfigError("repair_max_iters must be >= 1");
}

}  // namespace

void NeighborWeights::validate() const {
  if (!(space_weight > 0.0) || !std::isfinite(space_weight))
    throw ConfigError("space_weight must be > 0");
  if (!(freq_weight >= space_weight) || !std::isfinite(freq_weight))
    throw ConfigError("freq_weight must be >= space_weight");
}

NeighborWeights NeighborWeights::from_config(const ScenarioConfig& cfg) {
  return NeighborWeights{cfg.freq_weight, cfg.space_weight};
}

// Reference implementation: full-grid sweeps with double-buffered fill
// flags.  Kept deliberately simple; the parallel kernel below must match it
// bit-for-bit.
RepairResult nncf_repair_serial(const MaskedChannelMatrix& raw,
                                const NeighborWeights& weights,
                                int max_iters) {
  check_repair_args(weights, max_iters);
  const int K = raw.num_users;
  const int N = raw.num_subcarriers;

  std::vector<double> values = raw.values;
  std::vector<std::uint8_t> filled = raw.observed;
  std::size_t remaining = raw.missing_count();
  int passes = 0;

  while (remaining > 0 && passes < max_iters) {
    ++passes;
    const std::vector<std::uint8_t> prev_filled = filled;
    std::size_t filled_this_pass = 0;
    for (int k = 0; k < K; ++k) {
      for (int n = 0; n < N; ++n) {
        const std::size_t cell = static_cast<std::size_t>(k) * N + n;
        if (prev_filled[cell]) continue;
        double v;
        if (neighbor_fill(values, prev_filled, K, N, k, n, weights, &v)) {
          values[cell] = v;
          filled[cell] = 1;
          ++filled_this_pass;
        }
      }
    }
    remaining -= filled_this_pass;
    if (filled_this_pass == 0) break;  // rest unreachable, fall back
  }

  return finalize(raw, std::move(values), filled, passes);
}

// Parallel kernel: each sweep distributes the still-missing cells over
// OpenMP threads.  Threads read only previous-sweep state (values of cells
// with prev_filled set, which no thread writes this sweep) and write
// disjoint cells, so the result is independent of the thread count.
RepairResult nncf_repair(const MaskedChannelMatrix& raw,
                         const NeighborWeights& weights, int max_iters) {
  check_repair_args(weights, max_iters);
  const int K = raw.num_users;
  const int N = raw.num_subcarriers;

  std::vector<double> values = raw.values;
  std::vector<std::uint8_t> filled = raw.observed;
  std::vector<CellIndex> pending = raw.missing_indices();
  std::vector<std::uint8_t> wrote(pending.size());
  std::vector<double> fresh(pending.size());
  int passes = 0;

  while (!pending.empty() && passes < max_iters) {
    ++passes;
    const auto count = static_cast<std::ptrdiff_t>(pending.size());

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto [k, n] = pending[i];
      double v;
      wrote[i] = neighbor_fill(values, filled, K, N, k, n, weights, &v) ? 1 : 0;
      if (wrote[i]) fresh[i] = v;
    }

    // Commit after the sweep: publishing values and flags here keeps the
    // sweep itself Jacobi (no freshly filled cell is visible above).
    std::size_t kept = 0;
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      const auto [k, n] = pending[i];
      const std::size_t cell = static_cast<std::size_t>(k) * N + n;
      if (wrote[i]) {
        values[cell] = fresh[i];
        filled[cell] = 1;
      } else {
        pending[kept++] = pending[i];
      }
    }
    if (kept == pending.size()) {
      pending.resize(kept);
      break;  // no progress; rest unreachable
    }
    pending.resize(kept);
    wrote.resize(kept);
    fresh.resize(kept);
  }

  return finalize(raw, std::move(values), filled, passes);
}

ChannelMatrix mean_impute(const MaskedChannelMatrix& raw) {
  const int K = raw.num_users;
  const int N = raw.num_subcarriers;
  const double global_mean = observed_mean_or_one(raw);

  ChannelMatrix out(K, N);
  out.seed = raw.seed;
  for (int k = 0; k < K; ++k) {
    double sum = 0.0;
    int count = 0;
    for (int n = 0; n < N; ++n) {
      if (raw.is_observed(k, n)) {
        sum += raw.value(k, n);
        ++count;
      }
    }
    const double fill = count > 0 ? sum / count : global_mean;
    for (int n = 0; n < N; ++n)
      out.at(k, n) = raw.is_observed(k, n) ? raw.value(k, n) : fill;
  }
  return out;
}

double rmse(const ChannelMatrix& truth, const ChannelMatrix& estimate,
            std::span<const CellIndex> indices) {
  if (truth.num_users != estimate.num_users ||
      truth.num_subcarriers != estimate.num_subcarriers)
    throw ConfigError("rmse: matrix shapes differ");
  if (indices.empty()) throw ConfigError("rmse: empty index set");
  double sum_sq = 0.0;
  for (const auto& [k, n] : indices) {
    const double d = truth.at(k, n) - estimate.at(k, n);
    sum_sq += d * d;
  }
  return std::sqrt(sum_sq / static_cast<double>(indices.size()));
}

}  // namespace ofdma
