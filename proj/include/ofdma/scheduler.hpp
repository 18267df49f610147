// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_SCHEDULER_HPP
#define OFDMA_SCHEDULER_HPP

#include <span>
#include <string>
#include <vector>

#include "ofdma/config.hpp"
#include "ofdma/matrix.hpp"

namespace ofdma {

enum class Objective { MaxRate, MinPower, MaxEE };
enum class CsiSource { Perfect, Nncf, MeanImputed };

std::string to_string(Objective o);
std::string to_string(CsiSource s);
Objective objective_from_string(const std::string& s);
CsiSource csi_source_from_string(const std::string& s);

/// Subcarrier assignment and per-subcarrier power.  At most one user per
/// subcarrier is structural: user_of_subcarrier[n] is that user, or -1.
/// power[n] > 0 implies user_of_subcarrier[n] >= 0.
struct Allocation {
  std::vector<int> user_of_subcarrier;
  std::vector<double> power;  // [W]

  bool operator==(const Allocation&) const = default;
};

struct AllocationReport {
  std::vector<double> per_user_rates;  // [bit/s]
  double sum_rate = 0.0;               // [bit/s]
  double total_power = 0.0;            // [W]
  double energy_efficiency = 0.0;      // [bit/J], sum_rate / (total + Pc)
  Objective objective = Objective::MaxRate;
  CsiSource csi_source = CsiSource::Perfect;
  bool budget_exceeded = false;        // P2 only: total power > Pmax
};

struct AllocationResult {
  Allocation allocation;
  AllocationReport report;
};

/// L strictly increasing power levels in (0, Pmax], last level == Pmax.
struct PowerGrid {
  std::vector<double> levels;
  static PowerGrid uniform(double pmax, int num_levels);
};

struct WaterfillResult {
  std::vector<double> power;  // aligned with the input gains
  double water_level = 0.0;   // mu = 1/lambda
  int iterations = 0;
  double residual = 0.0;      // |sum(power) - budget|
};

/// Shannon rate B log2(1 + p g / (N0 B)) in bit/s.
double rate(double power, double gain, double bandwidth, double noise_psd);

/// Per-subcarrier argmax_k G[k][n]; ties go to the lowest user index.
std::vector<int> assign_greedy(const ChannelMatrix& g);

/// Water-filling over `gains` with total budget: p_j = max(0, mu - N0 B/g_j),
/// mu found by bisection on [min_j N0 B/g_j, budget + max_j N0 B/g_j] until
/// the allocated power matches the budget within 1e-10 relative.  Throws
/// NumericalError (carrying the residual) if 200 bisection steps are not
/// enough.
WaterfillResult waterfill(std::span<const double> gains, double budget,
                          double bandwidth, double noise_psd);

/// P1: greedy assignment + water-filling against `budget`.
AllocationResult solve_max_rate(const ChannelMatrix& g,
                                const ScenarioConfig& cfg, double budget);

/// Round-robin draft: users 0..K-1 in order repeatedly pick their
/// highest-gain unassigned subcarrier (ties to the lowest subcarrier index)
/// until all N are taken.  Requires N >= K.
std::vector<std::vector<int>> assign_fair(const ChannelMatrix& g);

/// P2: fair assignment + equal-rate channel inversion.  Powers are exact for
/// the per-user Rmin target; budget_exceeded is reported, not enforced.
AllocationResult solve_min_power(const ChannelMatrix& g,
                                 const ScenarioConfig& cfg);

struct MaxEeResult {
  AllocationResult best;
  double chosen_budget = 0.0;  // P* grid level
  int chosen_level = 0;        // 1-based index into the grid
  double chosen_ee = 0.0;      // maximized quantity: sum_rate / (P* + Pc)
};

/// P3: evaluates the max-rate solver on the uniform power grid
/// {Pmax l / L} and returns the level maximizing sum_rate / (P_l + Pc);
/// ties go to the smaller level.  Grid levels run on OpenMP threads; the
/// argmax reduction is a deterministic ascending scan.  solve_max_ee_serial
/// is the plain-loop reference and produces bit-identical results.
MaxEeResult solve_max_ee(const ChannelMatrix& g, const ScenarioConfig& cfg);
MaxEeResult solve_max_ee_serial(const ChannelMatrix& g,
                                const ScenarioConfig& cfg);

/// Re-scores an allocation against a (possibly different) channel matrix:
/// same assignment and powers, rates from g_true.
AllocationReport evaluate_allocation(const Allocation& alloc,
                                     const ChannelMatrix& g_true,
                                     const ScenarioConfig& cfg,
                                     Objective objective,
                                     CsiSource csi_source);

/// The allocation JSON object: {objective, csi_source, assignment (user
/// index or null per subcarrier), power, per_user_rates, sum_rate,
/// total_power, energy_efficiency, budget_exceeded}.  Indices are 0-based.
std::string allocation_to_json(const AllocationResult& r);

}  // namespace ofdma

#endif  // OFDMA_SCHEDULER_HPP
