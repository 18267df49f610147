// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_RNG_HPP
#define OFDMA_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace ofdma {

// Deterministic random source shared by the channel generator, the masking
// stage and the experiment runners.  The full algorithm is documented here so
// recorded fixtures can be reproduced from the seed alone:
//
//   core stream     MT19937-64 (std::mt19937_64), seeded directly with the
//                   64-bit seed value.
//   uniform_unit()  next word >> 11, divided by 2^53  ->  double in [0, 1)
//   uniform(a, b)   a + (b - a) * uniform_unit()
//   uniform_below(n)  rejection sampling: draw 64-bit words, discard any
//                   word >= floor(2^64 / n) * n, return word % n
//   normal_pair()   Box-Muller: u1 = 1 - uniform_unit() (in (0, 1]),
//                   u2 = uniform_unit(), r = sqrt(-2 ln u1),
//                   returns (r cos(2 pi u2), r sin(2 pi u2))
//
// Byte-identical sequences across languages are not required (fixtures travel
// as CSV files); identical sequences across runs of this library are.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform_unit();
  }

  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = (UINT64_MAX / n) * n;
    std::uint64_t w;
    do {
      w = gen_();
    } while (w >= limit);
    return w % n;
  }

  std::pair<double, double> normal_pair() {
    const double u1 = 1.0 - uniform_unit();
    const double u2 = uniform_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
  }

 private:
  std::mt19937_64 gen_;
};

/// Derives an independent stream seed from a base seed and a stream tag
/// (splitmix64 finalizer of seed XOR tag).  Used to decouple the masking
/// stream from the channel-generation stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_tag) {
  std::uint64_t z = seed ^ stream_tag;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream tag for mask-index selection.
inline constexpr std::uint64_t kMaskStream = 0x6d61736bULL;  // "mask"

}  // namespace ofdma

#endif  // OFDMA_RNG_HPP
