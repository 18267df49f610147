// SPDX-License-Identifier: Apache-2.0

#include "ofdma/channel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "ofdma/errors.hpp"
#include "ofdma/rng.hpp"

namespace ofdma {
namespace {

/// PL(dB) = 128.1 + 37.6 log10(d / 1 km), returned as a linear power factor.
double pathloss_linear(double distance_m) {
  const double pl_db = 128.1 + 37.6 * std::log10(distance_m / 1000.0);
  return std::pow(10.0, -pl_db / 10.0);
}

}  // namespace

ChannelMatrix generate_channel(const ScenarioConfig& cfg) {
  cfg.validate();
  const int num_users = cfg.num_users;
  const int num_sc = cfg.num_subcarriers;
  Rng rng(cfg.seed);

  // Distances first, sorted ascending: row adjacency then reflects spatial
  // similarity, which the neighbor-weighted repair depends on.
  std::vector<double> dist(num_users);
  for (double& d : dist) d = rng.uniform(cfg.dist_min, cfg.dist_max);
  std::sort(dist.begin(), dist.end());

  // Tap mean powers decay exponentially and are normalized to unit sum.
  std::vector<double> tap_power(cfg.num_taps);
  for (int l = 0; l < cfg.num_taps; ++l)
    tap_power[l] = std::exp(-static_cast<double>(l) / cfg.delay_decay);
  const double tap_sum =
      std::accumulate(tap_power.begin(), tap_power.end(), 0.0);
  for (double& q : tap_power) q /= tap_sum;

  ChannelMatrix out(num_users, num_sc);
  out.seed = cfg.seed;
  std::vector<std::complex<double>> taps(cfg.num_taps);
  for (int k = 0; k < num_users; ++k) {
    const double pl = pathloss_linear(dist[k]);
    for (int l = 0; l < cfg.num_taps; ++l) {
      const auto [z1, z2] = rng.normal_pair();
      taps[l] = std::sqrt(tap_power[l] / 2.0) * std::complex<double>(z1, z2);
    }
    for (int n = 0; n < num_sc; ++n) {
      std::complex<double> h{0.0, 0.0};
      for (int l = 0; l < cfg.num_taps; ++l) {
        const double phase = -2.0 * M_PI * static_cast<double>(n) * l / num_sc;
        h += taps[l] * std::polar(1.0, phase);
      }
      out.at(k, n) = std::max(pl * std::norm(h),
                              std::numeric_limits<double>::min());
    }
  }
  return out;
}

MaskedChannelMatrix apply_mask(const ChannelMatrix& channel, double loss_rate,
                               std::uint64_t seed) {
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0))
    throw ConfigError("loss_rate must be in [0, 1]");

  const std::size_t total = channel.size();
  const auto num_missing = static_cast<std::size_t>(
      std::llround(loss_rate * static_cast<double>(total)));

  MaskedChannelMatrix out(channel.num_users, channel.num_subcarriers);
  out.values = channel.gains;
  out.seed = seed;
  std::fill(out.observed.begin(), out.observed.end(), std::uint8_t{1});

  // Partial Fisher-Yates: the first num_missing positions of the shuffled
  // index list are masked.
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < num_missing; ++i) {
    const std::size_t j = i + rng.uniform_below(total - i);
    std::swap(idx[i], idx[j]);
    out.values[idx[i]] = std::numeric_limits<double>::quiet_NaN();
    out.observed[idx[i]] = 0;
  }
  return out;
}

}  // namespace ofdma
