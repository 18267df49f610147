// SPDX-License-Identifier: Apache-2.0

#include "ofdma/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ofdma/errors.hpp"
#include "ofdma/scheduler.hpp"

namespace ofdma {
namespace {

constexpr std::uint64_t kEnumerationCap = 1'000'000;

/// K^N with the enumeration cap enforced.
std::uint64_t assignment_count(int num_users, int num_subcarriers) {
  std::uint64_t total = 1;
  for (int n = 0; n < num_subcarriers; ++n) {
    total *= static_cast<std::uint64_t>(num_users);
    if (total > kEnumerationCap)
      throw ConfigError("instance too large: K^N exceeds " +
                        std::to_string(kEnumerationCap) + " enumerations");
  }
  return total;
}

// Assignment index i encodes user-per-subcarrier digits with subcarrier 0
// most significant, so ascending index order is lexicographic order of the
// assignment vector (ties resolve to the lexicographically smallest one).
void decode_assignment(std::uint64_t index, int num_users, std::vector<int>* a) {
  for (int n = static_cast<int>(a->size()) - 1; n >= 0; --n) {
    (*a)[n] = static_cast<int>(index % num_users);
    index /= num_users;
  }
}

double assignment_sum_rate(const ChannelMatrix& g, const ScenarioConfig& cfg,
                           const std::vector<int>& a, double budget,
                           std::vector<double>* gains) {
  for (int n = 0; n < g.num_subcarriers; ++n)
    (*gains)[n] = g.at(a[n], n);
  const WaterfillResult wf =
      waterfill(*gains, budget, cfg.subcarrier_bandwidth, cfg.noise_psd);
  double sum = 0.0;
  for (int n = 0; n < g.num_subcarriers; ++n)
    sum += rate(wf.power[n], (*gains)[n], cfg.subcarrier_bandwidth,
                cfg.noise_psd);
  return sum;
}

/// Equal-rate channel inversion power for one full assignment, or NaN when a
/// user has no subcarrier.
double assignment_inversion_power(const ChannelMatrix& g,
                                  const ScenarioConfig& cfg,
                                  const std::vector<int>& a,
                                  std::vector<int>* share) {
  share->assign(g.num_users, 0);
  for (const int u : a) ++(*share)[u];
  for (const int s : *share)
    if (s == 0) return std::numeric_limits<double>::quiet_NaN();

  const double noise_power = cfg.subcarrier_bandwidth * cfg.noise_psd;
  double total = 0.0;
  for (int n = 0; n < g.num_subcarriers; ++n) {
    const int u = a[n];
    const double factor =
        std::exp2(cfg.min_rate /
                  (cfg.subcarrier_bandwidth * static_cast<double>((*share)[u]))) -
        1.0;
    total += factor * noise_power / g.at(u, n);
  }
  return total;
}

}  // namespace

OracleResult brute_force_p1_serial(const ChannelMatrix& g,
                                   const ScenarioConfig& cfg, double budget) {
  const std::uint64_t total = assignment_count(g.num_users, g.num_subcarriers);

  OracleResult res;
  res.instances_enumerated = total;
  std::uint64_t best_index = 0;
  double best_value = -1.0;
  std::vector<int> a(g.num_subcarriers);
  std::vector<double> gains(g.num_subcarriers);
  for (std::uint64_t i = 0; i < total; ++i) {
    decode_assignment(i, g.num_users, &a);
    const double value = assignment_sum_rate(g, cfg, a, budget, &gains);
    if (value > best_value) {  // strict: first (lex smallest) index wins ties
      best_value = value;
      best_index = i;
    }
  }
  res.best_value = best_value;
  res.best_assignment.resize(g.num_subcarriers);
  decode_assignment(best_index, g.num_users, &res.best_assignment);
  return res;
}

OracleResult brute_force_p1(const ChannelMatrix& g, const ScenarioConfig& cfg,
                            double budget) {
  const std::uint64_t total = assignment_count(g.num_users, g.num_subcarriers);
  const auto count = static_cast<std::int64_t>(total);

  double best_value = -1.0;
  std::uint64_t best_index = 0;
  std::exception_ptr failure = nullptr;

#pragma omp parallel
  {
    double local_best = -1.0;
    std::uint64_t local_index = 0;
    std::vector<int> a(g.num_subcarriers);
    std::vector<double> gains(g.num_subcarriers);

#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < count; ++i) {
      try {
        decode_assignment(static_cast<std::uint64_t>(i), g.num_users, &a);
        const double value = assignment_sum_rate(g, cfg, a, budget, &gains);
        if (value > local_best ||
            (value == local_best &&
             static_cast<std::uint64_t>(i) < local_index)) {
          local_best = value;
          local_index = static_cast<std::uint64_t>(i);
        }
      } catch (...) {
#pragma omp critical(ofdma_oracle_err)
        if (!failure) failure = std::current_exception();
      }
    }

    // Merge rule (greater value, then smaller index) is associative and
    // order-independent, so the winner does not depend on the thread count.
#pragma omp critical(ofdma_oracle_merge)
    {
      if (local_best > best_value ||
          (local_best == best_value && local_index < best_index)) {
        best_value = local_best;
        best_index = local_index;
      }
    }
  }
  if (failure) std::rethrow_exception(failure);

  OracleResult res;
  res.instances_enumerated = total;
  res.best_value = best_value;
  res.best_assignment.resize(g.num_subcarriers);
  decode_assignment(best_index, g.num_users, &res.best_assignment);
  return res;
}

OracleResult brute_force_p2(const ChannelMatrix& g, const ScenarioConfig& cfg) {
  if (g.num_users > g.num_subcarriers)
    throw InfeasibleError("no feasible assignment: K > N");
  const std::uint64_t total = assignment_count(g.num_users, g.num_subcarriers);

  OracleResult res;
  double best_value = std::numeric_limits<double>::infinity();
  std::uint64_t best_index = 0;
  std::vector<int> a(g.num_subcarriers);
  std::vector<int> share;
  for (std::uint64_t i = 0; i < total; ++i) {
    decode_assignment(i, g.num_users, &a);
    const double power = assignment_inversion_power(g, cfg, a, &share);
    if (std::isnan(power)) continue;  // some user left empty
    ++res.instances_enumerated;
    if (power < best_value) {
      best_value = power;
      best_index = i;
    }
  }
  res.best_value = best_value;
  res.best_assignment.resize(g.num_subcarriers);
  decode_assignment(best_index, g.num_users, &res.best_assignment);
  return res;
}

}  // namespace ofdma
