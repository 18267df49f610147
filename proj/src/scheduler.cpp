// SPDX-License-Identifier: Apache-2.0

#include "ofdma/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ofdma/errors.hpp"

namespace ofdma {
namespace {

void check_shapes(const Allocation& alloc, const ChannelMatrix& g) {
  const auto n = static_cast<std::size_t>(g.num_subcarriers);
  if (alloc.user_of_subcarrier.size() != n || alloc.power.size() != n)
    throw ConfigError("allocation/matrix shape mismatch");
}

/// Rates from Eq.-(1)-style evaluation of (X, P) against g; shared by the
/// solvers and evaluate_allocation so reports are arithmetically identical.
AllocationReport build_report(const Allocation& alloc, const ChannelMatrix& g,
                              const ScenarioConfig& cfg, Objective objective,
                              CsiSource csi_source) {
  check_shapes(alloc, g);
  AllocationReport rep;
  rep.objective = objective;
  rep.csi_source = csi_source;
  rep.per_user_rates.assign(g.num_users, 0.0);
  for (int n = 0; n < g.num_subcarriers; ++n) {
    const int user = alloc.user_of_subcarrier[n];
    const double p = alloc.power[n];
    if (user < 0) {
      if (p > 0.0) throw ConfigError("power on unassigned subcarrier");
      continue;
    }
    if (user >= g.num_users) throw ConfigError("user index out of range");
    rep.per_user_rates[user] +=
        rate(p, g.at(user, n), cfg.subcarrier_bandwidth, cfg.noise_psd);
    rep.total_power += p;
  }
  for (const double r : rep.per_user_rates) rep.sum_rate += r;
  rep.energy_efficiency = rep.sum_rate / (rep.total_power + cfg.circuit_power);
  rep.budget_exceeded =
      objective == Objective::MinPower && rep.total_power > cfg.max_power;
  return rep;
}

AllocationResult solve_max_rate_impl(const ChannelMatrix& g,
                                     const ScenarioConfig& cfg,
                                     double budget) {
  if (!(budget > 0.0))
    throw ConfigError("power budget must be > 0");

  AllocationResult out;
  out.allocation.user_of_subcarrier = assign_greedy(g);
  std::vector<double> gains(g.num_subcarriers);
  for (int n = 0; n < g.num_subcarriers; ++n)
    gains[n] = g.at(out.allocation.user_of_subcarrier[n], n);

  const WaterfillResult wf =
      waterfill(gains, budget, cfg.subcarrier_bandwidth, cfg.noise_psd);
  out.allocation.power = wf.power;
  out.report = build_report(out.allocation, g, cfg, Objective::MaxRate,
                            CsiSource::Perfect);
  return out;
}

}  // namespace

std::string to_string(Objective o) {
  switch (o) {
    case Objective::MaxRate: return "max-rate";
    case Objective::MinPower: return "min-power";
    case Objective::MaxEE: return "max-ee";
  }
  return "?";
}

std::string to_string(CsiSource s) {
  switch (s) {
    case CsiSource::Perfect: return "perfect";
    case CsiSource::Nncf: return "nncf";
    case CsiSource::MeanImputed: return "mean_imputed";
  }
  return "?";
}

Objective objective_from_string(const std::string& s) {
  if (s == "max-rate") return Objective::MaxRate;
  if (s == "min-power") return Objective::MinPower;
  if (s == "max-ee") return Objective::MaxEE;
  throw ConfigError("unknown objective '" + s +
                    "' (expected max-rate, min-power or max-ee)");
}

CsiSource csi_source_from_string(const std::string& s) {
  if (s == "perfect") return CsiSource::Perfect;
  if (s == "nncf") return CsiSource::Nncf;
  if (s == "mean_imputed") return CsiSource::MeanImputed;
  throw ConfigError("unknown csi source '" + s +
                    "' (expected perfect, nncf or mean_imputed)");
}

double rate(double power, double gain, double bandwidth, double noise_psd) {
  if (!(gain > 0.0)) throw ConfigError("rate: gain must be > 0");
  if (!(bandwidth > 0.0)) throw ConfigError("rate: bandwidth must be > 0");
  if (!(noise_psd > 0.0)) throw ConfigError("rate: noise psd must be > 0");
  if (!(power >= 0.0)) throw ConfigError("rate: power must be >= 0");
  return bandwidth * std::log2(1.0 + power * gain / (noise_psd * bandwidth));
}

std::vector<int> assign_greedy(const ChannelMatrix& g) {
  std::vector<int> user_of_subcarrier(g.num_subcarriers, 0);
  for (int n = 0; n < g.num_subcarriers; ++n) {
    int best = 0;
    for (int k = 1; k < g.num_users; ++k)
      if (g.at(k, n) > g.at(best, n)) best = k;  // ties keep the lowest k
    user_of_subcarrier[n] = best;
  }
  return user_of_subcarrier;
}

WaterfillResult waterfill(std::span<const double> gains, double budget,
                          double bandwidth, double noise_psd) {
  if (gains.empty()) throw ConfigError("waterfill: no channels");
  if (!(budget > 0.0)) throw ConfigError("waterfill: budget must be > 0");

  const double noise_power = noise_psd * bandwidth;
  std::vector<double> floor(gains.size());
  for (std::size_t j = 0; j < gains.size(); ++j) {
    if (!(gains[j] > 0.0)) throw ConfigError("waterfill: gains must be > 0");
    floor[j] = noise_power / gains[j];
  }
  const auto [min_it, max_it] = std::minmax_element(floor.begin(), floor.end());

  // Allocated power is continuous and nondecreasing in mu: 0 at the lower
  // bracket end, >= budget at the upper one.
  double lo = *min_it;
  double hi = budget + *max_it;
  const double tol = 1e-10 * budget;
  constexpr int kMaxIters = 200;

  WaterfillResult res;
  res.power.resize(gains.size());
  for (int it = 1; it <= kMaxIters; ++it) {
    const double mu = 0.5 * (lo + hi);
    double allocated = 0.0;
    for (std::size_t j = 0; j < gains.size(); ++j) {
      res.power[j] = std::max(0.0, mu - floor[j]);
      allocated += res.power[j];
    }
    res.water_level = mu;
    res.iterations = it;
    res.residual = std::abs(allocated - budget);
    if (res.residual <= tol) return res;
    if (allocated > budget)
      hi = mu;
    else
      lo = mu;
  }
  std::ostringstream msg;
  msg << "waterfill: no convergence after " << kMaxIters
      << " bisection steps (residual " << res.residual << ")";
  throw NumericalError(msg.str(), res.residual);
}

AllocationResult solve_max_rate(const ChannelMatrix& g,
                                const ScenarioConfig& cfg, double budget) {
  return solve_max_rate_impl(g, cfg, budget);
}

std::vector<std::vector<int>> assign_fair(const ChannelMatrix& g) {
  const int K = g.num_users;
  const int N = g.num_subcarriers;
  if (N < K)
    throw InfeasibleError(
        "cannot give every user a subcarrier: N=" + std::to_string(N) +
        " < K=" + std::to_string(K));

  std::vector<std::vector<int>> sets(K);
  std::vector<std::uint8_t> taken(N, 0);
  int assigned = 0;
  while (assigned < N) {
    for (int k = 0; k < K && assigned < N; ++k) {
      int best = -1;
      for (int n = 0; n < N; ++n) {
        if (taken[n]) continue;
        if (best < 0 || g.at(k, n) > g.at(k, best)) best = n;
      }
      taken[best] = 1;
      sets[k].push_back(best);
      ++assigned;
    }
  }
  return sets;
}

AllocationResult solve_min_power(const ChannelMatrix& g,
                                 const ScenarioConfig& cfg) {
  const auto sets = assign_fair(g);
  const double noise_power = cfg.subcarrier_bandwidth * cfg.noise_psd;

  AllocationResult out;
  out.allocation.user_of_subcarrier.assign(g.num_subcarriers, -1);
  out.allocation.power.assign(g.num_subcarriers, 0.0);
  for (int k = 0; k < g.num_users; ++k) {
    const auto share = static_cast<double>(sets[k].size());
    // Equal rate split: each assigned subcarrier carries Rmin / |S_k|.
    const double factor =
        std::exp2(cfg.min_rate / (cfg.subcarrier_bandwidth * share)) - 1.0;
    for (const int n : sets[k]) {
      const double p = factor * noise_power / g.at(k, n);
      if (!std::isfinite(p))
        throw NumericalError("channel inversion produced non-finite power "
                             "(Rmin too large for the assigned subcarriers)");
      out.allocation.user_of_subcarrier[n] = k;
      out.allocation.power[n] = p;
    }
  }
  out.report = build_report(out.allocation, g, cfg, Objective::MinPower,
                            CsiSource::Perfect);
  return out;
}

PowerGrid PowerGrid::uniform(double pmax, int num_levels) {
  if (!(pmax > 0.0)) throw ConfigError("Pmax must be > 0");
  if (num_levels < 1) throw ConfigError("L must be >= 1");
  PowerGrid grid;
  grid.levels.resize(num_levels);
  for (int l = 1; l <= num_levels; ++l)
    grid.levels[l - 1] =
        pmax * (static_cast<double>(l) / static_cast<double>(num_levels));
  return grid;
}

// Reference implementation: sequential best-so-far scan over the grid
// (strictly-greater updates keep ties at the smaller level).
MaxEeResult solve_max_ee_serial(const ChannelMatrix& g,
                                const ScenarioConfig& cfg) {
  const PowerGrid grid = PowerGrid::uniform(cfg.max_power,
                                            cfg.num_power_levels);
  MaxEeResult best;
  double best_ee = -1.0;
  for (int l = 1; l <= cfg.num_power_levels; ++l) {
    const double budget = grid.levels[l - 1];
    AllocationResult r = solve_max_rate(g, cfg, budget);
    const double ee = r.report.sum_rate / (budget + cfg.circuit_power);
    if (ee > best_ee) {
      best_ee = ee;
      best.best = std::move(r);
      best.chosen_budget = budget;
      best.chosen_level = l;
    }
  }
  best.chosen_ee = best_ee;
  best.best.report.objective = Objective::MaxEE;
  return best;
}

// Parallel kernel: the L max-rate solves are independent; the argmax is a
// deterministic ascending scan afterwards, so ties resolve to the smaller
// level regardless of which thread finishes first.
MaxEeResult solve_max_ee(const ChannelMatrix& g, const ScenarioConfig& cfg) {
  const PowerGrid grid = PowerGrid::uniform(cfg.max_power,
                                            cfg.num_power_levels);
  const int L = cfg.num_power_levels;
  std::vector<AllocationResult> results(L);
  std::vector<double> ee(L);
  std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(static)
  for (int l = 1; l <= L; ++l) {
    try {
      const double budget = grid.levels[l - 1];
      results[l - 1] = solve_max_rate(g, cfg, budget);
      ee[l - 1] = results[l - 1].report.sum_rate / (budget + cfg.circuit_power);
    } catch (...) {
#pragma omp critical(ofdma_max_ee_err)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  int best_level = 1;
  for (int l = 2; l <= L; ++l)
    if (ee[l - 1] > ee[best_level - 1]) best_level = l;

  MaxEeResult best;
  best.best = std::move(results[best_level - 1]);
  best.chosen_budget = grid.levels[best_level - 1];
  best.chosen_level = best_level;
  best.chosen_ee = ee[best_level - 1];
  best.best.report.objective = Objective::MaxEE;
  return best;
}

AllocationReport evaluate_allocation(const Allocation& alloc,
                                     const ChannelMatrix& g_true,
                                     const ScenarioConfig& cfg,
                                     Objective objective,
                                     CsiSource csi_source) {
  return build_report(alloc, g_true, cfg, objective, csi_source);
}

std::string allocation_to_json(const AllocationResult& r) {
  nlohmann::ordered_json j;
  j["objective"] = to_string(r.report.objective);
  j["csi_source"] = to_string(r.report.csi_source);
  nlohmann::ordered_json assignment = nlohmann::ordered_json::array();
  for (const int u : r.allocation.user_of_subcarrier) {
    if (u < 0)
      assignment.push_back(nullptr);
    else
      assignment.push_back(u);
  }
  j["assignment"] = std::move(assignment);
  j["power"] = r.allocation.power;
  j["per_user_rates"] = r.report.per_user_rates;
  j["sum_rate"] = r.report.sum_rate;
  j["total_power"] = r.report.total_power;
  j["energy_efficiency"] = r.report.energy_efficiency;
  j["budget_exceeded"] = r.report.budget_exceeded;
  return j.dump(2) + "\n";
}

}  // namespace ofdma
