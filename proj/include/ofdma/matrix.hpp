// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_MATRIX_HPP
#define OFDMA_MATRIX_HPP

#include <cstdint>
#include <utility>
#include <vector>

namespace ofdma {

/// Index of one matrix cell: (user k, subcarrier n).
using CellIndex = std::pair<int, int>;

/// Dense K x N grid of channel power gains (linear ratios, all > 0).
struct ChannelMatrix {
  int num_users = 0;
  int num_subcarriers = 0;
  std::vector<double> gains;  // row-major, gains[k * num_subcarriers + n]
  std::uint64_t seed = 0;     // provenance, recorded in the CSV header

  ChannelMatrix() = default;
  ChannelMatrix(int k, int n)
      : num_users(k), num_subcarriers(n),
        gains(static_cast<std::size_t>(k) * n, 0.0) {}

  double& at(int k, int n) { return gains[idx(k, n)]; }
  double at(int k, int n) const { return gains[idx(k, n)]; }
  std::size_t size() const { return gains.size(); }

  bool operator==(const ChannelMatrix&) const = default;

 private:
  std::size_t idx(int k, int n) const {
    return static_cast<std::size_t>(k) * num_subcarriers + n;
  }
};

/// Channel matrix with an observation mask: values[i] is meaningful iff
/// observed[i] != 0; masked cells hold NaN, matching the file format.
struct MaskedChannelMatrix {
  int num_users = 0;
  int num_subcarriers = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> observed;
  std::uint64_t seed = 0;

  MaskedChannelMatrix() = default;
  MaskedChannelMatrix(int k, int n);

  /// Wraps a complete matrix (everything observed).
  static MaskedChannelMatrix from_complete(const ChannelMatrix& m);

  double value(int k, int n) const { return values[idx(k, n)]; }
  bool is_observed(int k, int n) const { return observed[idx(k, n)] != 0; }

  std::size_t observed_count() const;
  std::size_t missing_count() const;

  /// Missing indices in row-major order.
  std::vector<CellIndex> missing_indices() const;
  /// Observed indices (the mask Omega) in row-major order.
  std::vector<CellIndex> observed_indices() const;

 private:
  std::size_t idx(int k, int n) const {
    return static_cast<std::size_t>(k) * num_subcarriers + n;
  }
};

}  // namespace ofdma

#endif  // OFDMA_MATRIX_HPP
