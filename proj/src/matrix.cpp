// SPDX-License-Identifier: Apache-2.0

#include "ofdma/matrix.hpp"

#include <algorithm>
#include <limits>

namespace ofdma {

MaskedChannelMatrix::MaskedChannelMatrix(int k, int n)
    : num_users(k),
      num_subcarriers(n),
      values(static_cast<std::size_t>(k) * n,
             std::numeric_limits<double>::quiet_NaN()),
      observed(static_cast<std::size_t>(k) * n, 0) {}

MaskedChannelMatrix MaskedChannelMatrix::from_complete(const ChannelMatrix& m) {
  MaskedChannelMatrix out(m.num_users, m.num_subcarriers);
  out.values = m.gains;
  std::fill(out.observed.begin(), out.observed.end(), std::uint8_t{1});
  out.seed = m.seed;
  return out;
}

std::size_t MaskedChannelMatrix::observed_count() const {
  return static_cast<std::size_t>(
      std::count(observed.begin(), observed.end(), std::uint8_t{1}));
}

std::size_t MaskedChannelMatrix::missing_count() const {
  return observed.size() - observed_count();
}

std::vector<CellIndex> MaskedChannelMatrix::missing_indices() const {
  std::vector<CellIndex> out;
  out.reserve(missing_count());
  for (int k = 0; k < num_users; ++k)
    for (int n = 0; n < num_subcarriers; ++n)
      if (!is_observed(k, n)) out.emplace_back(k, n);
  return out;
}

std::vector<CellIndex> MaskedChannelMatrix::observed_indices() const {
  std::vector<CellIndex> out;
  out.reserve(observed_count());
  for (int k = 0; k < num_users; ++k)
    for (int n = 0; n < num_subcarriers; ++n)
      if (is_observed(k, n)) out.emplace_back(k, n);
  return out;
}

}  // namespace ofdma
