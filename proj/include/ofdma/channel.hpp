// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_CHANNEL_HPP
#define OFDMA_CHANNEL_HPP

#include <cstdint>

#include "ofdma/config.hpp"
#include "ofdma/matrix.hpp"

namespace ofdma {

/// Generates the ground-truth frequency-selective channel matrix.
///
/// Deterministic in cfg.seed.  Draw order (see rng.hpp for the primitives):
///   1. K user distances, uniform in [dist_min, dist_max], then sorted
///      ascending so adjacent rows are spatially similar (row index order
///      carries the spatial correlation the repair stage relies on).
///   2. Per user k = 0..K-1: num_taps complex taps, one normal_pair() each;
///      tap l has mean power exp(-l / delay_decay), normalized to unit sum,
///      so tap l = sqrt(q_l / 2) * (z1 + i z2).
///
/// Gains: g[k][n] = pathloss_k * |sum_l h_l exp(-i 2 pi n l / N)|^2 with
/// pathloss PL(dB) = 128.1 + 37.6 log10(d / 1 km) converted to linear.
/// Every entry is finite and strictly positive.
ChannelMatrix generate_channel(const ScenarioConfig& cfg);

/// Masks exactly round(loss_rate * K * N) distinct entries, chosen uniformly
/// via a partial Fisher-Yates shuffle seeded with `seed`.  Surviving entries
/// equal the input bit-for-bit.
MaskedChannelMatrix apply_mask(const ChannelMatrix& channel, double loss_rate,
                               std::uint64_t seed);

}  // namespace ofdma

#endif  // OFDMA_CHANNEL_HPP
