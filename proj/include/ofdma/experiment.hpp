// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_EXPERIMENT_HPP
#define OFDMA_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ofdma/config.hpp"
#include "ofdma/scheduler.hpp"

namespace ofdma {

/// Sum-rate sweep: for each scenario seed, solve max-rate on each CSI
/// variant at each budget and score the decision against the true channel.
struct SweepSpec {
  std::vector<double> pmax_values;  // nonempty, strictly increasing
  double loss_rate = 0.3;
  int num_seeds = 1;
  std::vector<CsiSource> csi_variants = {
      CsiSource::Perfect, CsiSource::Nncf, CsiSource::MeanImputed};
  ScenarioConfig base_config;

  void validate() const;
  static SweepSpec load(const std::string& path);
  static SweepSpec parse(const std::string& json_text,
                         const std::string& source_name);
};

struct SweepRow {
  double pmax = 0.0;
  CsiSource variant = CsiSource::Perfect;
  std::uint64_t seed = 0;
  double sum_rate_on_truth = 0.0;
  std::optional<double> rmse_missing;  // empty for the perfect variant
};

struct SweepSummaryRow {
  double pmax = 0.0;
  CsiSource variant = CsiSource::Perfect;
  double median_sum_rate_on_truth = 0.0;
  std::optional<double> median_rmse_missing;
};

struct SweepOutput {
  std::vector<SweepRow> rows;          // sorted by (pmax, variant, seed)
  std::vector<SweepSummaryRow> summary;
};

/// Scenario seeds are base_config.seed + s for s in [0, num_seeds); the mask
/// stream is derive_seed(scenario_seed, kMaskStream).  Seeds run on OpenMP
/// threads; output order is deterministic.
SweepOutput run_sweep(const SweepSpec& spec);

std::string sweep_rows_csv(const SweepOutput& out);
std::string sweep_summary_csv(const SweepOutput& out);

/// Repair-quality comparison on the configured scenario.
struct RepairCompareRow {
  std::uint64_t seed = 0;
  double rmse_nncf = 0.0;
  double rmse_mean = 0.0;
  double reduction = 0.0;  // 1 - rmse_nncf / rmse_mean
};

/// Per-subcarrier gain trace of one user (the one with the most missing
/// entries in the first scenario), for plotting repairs against truth.
struct RepairTracePoint {
  int subcarrier = 0;
  double truth = 0.0;
  double nncf = 0.0;
  double mean = 0.0;
  bool observed = false;
};

struct RepairCompareOutput {
  std::vector<RepairCompareRow> rows;
  double median_reduction = 0.0;
  int nncf_wins = 0;
  bool no_missing_entries = false;  // loss_rate == 0: RMSE undefined
  int trace_user = 0;
  std::vector<RepairTracePoint> trace;
};

RepairCompareOutput run_repair_compare(const ScenarioConfig& cfg,
                                       int num_seeds);

std::string repair_compare_rows_csv(const RepairCompareOutput& out);
std::string repair_trace_csv(const RepairCompareOutput& out);
std::string repair_compare_summary_json(const RepairCompareOutput& out);

/// Median of an unsorted sample (mean of the central pair for even sizes).
double median(std::vector<double> values);

}  // namespace ofdma

#endif  // OFDMA_EXPERIMENT_HPP
