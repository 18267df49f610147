// SPDX-License-Identifier: Apache-2.0

#include "ofdma/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ofdma/channel.hpp"
#include "ofdma/errors.hpp"
#include "ofdma/matrix_io.hpp"
#include "ofdma/repair.hpp"
#include "ofdma/rng.hpp"

namespace ofdma {
namespace {

int variant_rank(CsiSource v) { return static_cast<int>(v); }

/// One scenario: truth plus the three CSI variants and the missing set.
struct ScenarioCells {
  ChannelMatrix truth;
  ChannelMatrix nncf;
  ChannelMatrix mean;
  std::vector<CellIndex> missing;
};

ScenarioCells build_scenario(const ScenarioConfig& cfg, double loss_rate) {
  ScenarioCells s;
  s.truth = generate_channel(cfg);
  const MaskedChannelMatrix masked =
      apply_mask(s.truth, loss_rate, derive_seed(cfg.seed, kMaskStream));
  s.missing = masked.missing_indices();
  s.nncf = nncf_repair(masked, NeighborWeights::from_config(cfg),
                       cfg.repair_max_iters)
               .repaired;
  s.mean = mean_impute(masked);
  return s;
}

const ChannelMatrix& variant_matrix(const ScenarioCells& s, CsiSource v) {
  switch (v) {
    case CsiSource::Perfect: return s.truth;
    case CsiSource::Nncf: return s.nncf;
    case CsiSource::MeanImputed: return s.mean;
  }
  throw ConfigError("unknown csi variant");
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid]
                                : 0.5 * (values[mid - 1] + values[mid]);
}

void SweepSpec::validate() const {
  if (pmax_values.empty()) throw ConfigError("sweep: pmax_values is empty");
  for (std::size_t i = 0; i + 1 < pmax_values.size(); ++i)
    if (!(pmax_values[i] < pmax_values[i + 1]))
      throw ConfigError("sweep: pmax_values must be strictly increasing");
  for (const double p : pmax_values)
    if (!(p > 0.0)) throw ConfigError("sweep: pmax values must be > 0");
  if (num_seeds < 1) throw ConfigError("sweep: num_seeds must be >= 1");
  if (csi_variants.empty()) throw ConfigError("sweep: no csi variants");
  if (!(loss_rate >= 0.0 && loss_rate <= 1.0))
    throw ConfigError("sweep: loss_rate must be in [0, 1]");
  base_config.validate();
}

SweepSpec SweepSpec::parse(const std::string& json_text,
                           const std::string& source_name) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source_name + ": " + e.what());
  }
  if (!j.is_object())
    throw ConfigError(source_name + ": expected a JSON object");

  SweepSpec spec;
  bool have_loss = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "pmax_values") {
      spec.pmax_values = value.get<std::vector<double>>();
    } else if (key == "loss_rate") {
      spec.loss_rate = value.get<double>();
      have_loss = true;
    } else if (key == "num_seeds") {
      spec.num_seeds = value.get<int>();
    } else if (key == "csi_variants") {
      spec.csi_variants.clear();
      for (const auto& v : value)
        spec.csi_variants.push_back(
            csi_source_from_string(v.get<std::string>()));
    } else if (key == "base_config") {
      spec.base_config = parse_config(value.dump(), source_name, {});
    } else {
      throw ConfigError(source_name + ": unknown sweep key '" + key + "'");
    }
  }
  if (!have_loss) spec.loss_rate = spec.base_config.loss_rate;
  spec.validate();
  return spec;
}

SweepSpec SweepSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep spec: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return SweepSpec::parse(ss.str(), path);
}

SweepOutput run_sweep(const SweepSpec& spec) {
  spec.validate();
  const int seeds = spec.num_seeds;
  const auto num_variants = spec.csi_variants.size();
  const auto num_pmax = spec.pmax_values.size();

  SweepOutput out;
  out.rows.resize(static_cast<std::size_t>(seeds) * num_variants * num_pmax);
  std::exception_ptr failure = nullptr;

  // Seeds are independent; each fills a precomputed slot range so the output
  // does not depend on the execution order.
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < seeds; ++s) {
    try {
      ScenarioConfig cfg = spec.base_config;
      cfg.seed = spec.base_config.seed + static_cast<std::uint64_t>(s);
      const ScenarioCells cells = build_scenario(cfg, spec.loss_rate);

      for (std::size_t vi = 0; vi < num_variants; ++vi) {
        const CsiSource variant = spec.csi_variants[vi];
        const ChannelMatrix& csi = variant_matrix(cells, variant);
        std::optional<double> rmse_missing;
        if (variant != CsiSource::Perfect && !cells.missing.empty())
          rmse_missing = rmse(cells.truth, csi, cells.missing);

        for (std::size_t pi = 0; pi < num_pmax; ++pi) {
          const double pmax = spec.pmax_values[pi];
          ScenarioConfig run_cfg = cfg;
          run_cfg.max_power = pmax;
          const AllocationResult solved = solve_max_rate(csi, run_cfg, pmax);
          const AllocationReport on_truth = evaluate_allocation(
              solved.allocation, cells.truth, run_cfg, Objective::MaxRate,
              variant);
          SweepRow row;
          row.pmax = pmax;
          row.variant = variant;
          row.seed = cfg.seed;
          row.sum_rate_on_truth = on_truth.sum_rate;
          row.rmse_missing = rmse_missing;
          out.rows[(static_cast<std::size_t>(s) * num_variants + vi) *
                       num_pmax +
                   pi] = row;
        }
      }
    } catch (...) {
#pragma omp critical(ofdma_sweep_err)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::sort(out.rows.begin(), out.rows.end(),
            [](const SweepRow& a, const SweepRow& b) {
              if (a.pmax != b.pmax) return a.pmax < b.pmax;
              if (a.variant != b.variant)
                return variant_rank(a.variant) < variant_rank(b.variant);
              return a.seed < b.seed;
            });

  // Per-(pmax, variant) medians, in row order.
  std::map<std::pair<double, int>, std::vector<double>> rates;
  std::map<std::pair<double, int>, std::vector<double>> rmses;
  for (const SweepRow& r : out.rows) {
    const auto key = std::make_pair(r.pmax, variant_rank(r.variant));
    rates[key].push_back(r.sum_rate_on_truth);
    if (r.rmse_missing) rmses[key].push_back(*r.rmse_missing);
  }
  for (auto& [key, values] : rates) {
    SweepSummaryRow row;
    row.pmax = key.first;
    row.variant = static_cast<CsiSource>(key.second);
    row.median_sum_rate_on_truth = median(values);
    if (const auto it = rmses.find(key); it != rmses.end())
      row.median_rmse_missing = median(it->second);
    out.summary.push_back(row);
  }
  return out;
}

std::string sweep_rows_csv(const SweepOutput& out) {
  std::string csv = "pmax,csi_variant,seed,sum_rate_on_truth,rmse_missing\n";
  for (const SweepRow& r : out.rows) {
    csv += format_sci(r.pmax);
    csv += ',';
    csv += to_string(r.variant);
    csv += ',';
    csv += std::to_string(r.seed);
    csv += ',';
    csv += format_sci(r.sum_rate_on_truth);
    csv += ',';
    if (r.rmse_missing) csv += format_sci(*r.rmse_missing);
    csv += '\n';
  }
  return csv;
}

std::string sweep_summary_csv(const SweepOutput& out) {
  std::string csv =
      "pmax,csi_variant,median_sum_rate_on_truth,median_rmse_missing\n";
  for (const SweepSummaryRow& r : out.summary) {
    csv += format_sci(r.pmax);
    csv += ',';
    csv += to_string(r.variant);
    csv += ',';
    csv += format_sci(r.median_sum_rate_on_truth);
    csv += ',';
    if (r.median_rmse_missing) csv += format_sci(*r.median_rmse_missing);
    csv += '\n';
  }
  return csv;
}

RepairCompareOutput run_repair_compare(const ScenarioConfig& cfg,
                                       int num_seeds) {
  cfg.validate();
  if (num_seeds < 1) throw ConfigError("compare-repair: seeds must be >= 1");

  RepairCompareOutput out;
  std::vector<RepairCompareRow> rows(num_seeds);
  std::vector<std::uint8_t> has_missing(num_seeds, 0);
  std::exception_ptr failure = nullptr;

#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < num_seeds; ++s) {
    try {
      ScenarioConfig run_cfg = cfg;
      run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(s);
      const ScenarioCells cells = build_scenario(run_cfg, run_cfg.loss_rate);
      rows[s].seed = run_cfg.seed;
      if (!cells.missing.empty()) {
        has_missing[s] = 1;
        rows[s].rmse_nncf = rmse(cells.truth, cells.nncf, cells.missing);
        rows[s].rmse_mean = rmse(cells.truth, cells.mean, cells.missing);
        rows[s].reduction = 1.0 - rows[s].rmse_nncf / rows[s].rmse_mean;
      }
    } catch (...) {
#pragma omp critical(ofdma_compare_err)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  out.no_missing_entries =
      std::find(has_missing.begin(), has_missing.end(), std::uint8_t{1}) ==
      has_missing.end();
  if (!out.no_missing_entries) {
    out.rows = std::move(rows);
    std::vector<double> reductions;
    for (const RepairCompareRow& r : out.rows) {
      reductions.push_back(r.reduction);
      if (r.rmse_nncf < r.rmse_mean) ++out.nncf_wins;
    }
    out.median_reduction = median(reductions);
  }

  // Trace of the first scenario's most damaged user (ties to the lowest
  // index), for a reconstruction-vs-truth figure.
  {
    ScenarioConfig run_cfg = cfg;
    const ChannelMatrix truth = generate_channel(run_cfg);
    const MaskedChannelMatrix masked = apply_mask(
        truth, run_cfg.loss_rate, derive_seed(run_cfg.seed, kMaskStream));
    const ChannelMatrix nncf_fix =
        nncf_repair(masked, NeighborWeights::from_config(run_cfg),
                    run_cfg.repair_max_iters)
            .repaired;
    const ChannelMatrix mean_fix = mean_impute(masked);

    int best_user = 0;
    int best_missing = -1;
    for (int k = 0; k < masked.num_users; ++k) {
      int miss = 0;
      for (int n = 0; n < masked.num_subcarriers; ++n)
        if (!masked.is_observed(k, n)) ++miss;
      if (miss > best_missing) {
        best_missing = miss;
        best_user = k;
      }
    }
    out.trace_user = best_user;
    out.trace.resize(masked.num_subcarriers);
    for (int n = 0; n < masked.num_subcarriers; ++n) {
      out.trace[n] = RepairTracePoint{
          n, truth.at(best_user, n), nncf_fix.at(best_user, n),
          mean_fix.at(best_user, n), masked.is_observed(best_user, n)};
    }
  }
  return out;
}

std::string repair_compare_rows_csv(const RepairCompareOutput& out) {
  std::string csv = "seed,rmse_nncf,rmse_mean,reduction\n";
  for (const RepairCompareRow& r : out.rows) {
    csv += std::to_string(r.seed);
    csv += ',';
    csv += format_sci(r.rmse_nncf);
    csv += ',';
    csv += format_sci(r.rmse_mean);
    csv += ',';
    csv += format_sci(r.reduction);
    csv += '\n';
  }
  return csv;
}

std::string repair_trace_csv(const RepairCompareOutput& out) {
  std::string csv = "subcarrier,truth,nncf,mean,observed\n";
  for (const RepairTracePoint& p : out.trace) {
    csv += std::to_string(p.subcarrier);
    csv += ',';
    csv += format_sci(p.truth);
    csv += ',';
    csv += format_sci(p.nncf);
    csv += ',';
    csv += format_sci(p.mean);
    csv += ',';
    csv += p.observed ? '1' : '0';
    csv += '\n';
  }
  return csv;
}

std::string repair_compare_summary_json(const RepairCompareOutput& out) {
  nlohmann::ordered_json j;
  if (out.no_missing_entries) {
    j["no_missing_entries"] = true;
  } else {
    j["seeds"] = out.rows.size();
    j["median_reduction"] = out.median_reduction;
    j["nncf_wins"] = out.nncf_wins;
  }
  j["trace_user"] = out.trace_user;
  return j.dump(2) + "\n";
}

}  // namespace ofdma
