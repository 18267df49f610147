// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: scenario generation, masking, repair, allocation,
// intent-driven workflow, experiment sweeps, oracle verification and an
// interactive operator loop.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ofdma/agent.hpp"
#include "ofdma/channel.hpp"
#include "ofdma/config.hpp"
#include "ofdma/errors.hpp"
#include "ofdma/experiment.hpp"
#include "ofdma/matrix_io.hpp"
#include "ofdma/oracle.hpp"
#include "ofdma/repair.hpp"
#include "ofdma/rng.hpp"
#include "ofdma/scheduler.hpp"

namespace {

using namespace ofdma;

// Exit codes: 0 success, 2 configuration error, 3 infeasible problem,
// 4 numerical non-convergence, 5 unrecognized intent, 1 verify failures.
enum ExitCode {
  kOk = 0,
  kVerifyFailed = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kNumerical = 4,
  kUnrecognizedIntent = 5,
};

/// Shared --config flag plus one override flag per ScenarioConfig field.
struct ConfigCli {
  std::string config_path;
  ConfigOverrides ov;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario config JSON");
    cmd->add_option("--K", ov.num_users, "Number of users");
    cmd->add_option("--N", ov.num_subcarriers, "Number of subcarriers");
    cmd->add_option("--B", ov.subcarrier_bandwidth,
                    "Subcarrier bandwidth [Hz]");
    cmd->add_option("--N0", ov.noise_psd, "Noise PSD [W/Hz]");
    cmd->add_option("--Pmax", ov.max_power, "Power budget [W]");
    cmd->add_option("--Rmin", ov.min_rate, "Per-user rate floor [bit/s]");
    cmd->add_option("--Pc", ov.circuit_power, "Circuit power [W]");
    cmd->add_option("--loss_rate", ov.loss_rate, "CSI loss fraction");
    cmd->add_option("--seed", ov.seed, "Scenario seed");
    cmd->add_option("--num_taps", ov.num_taps, "Delay-line taps");
    cmd->add_option("--delay_decay", ov.delay_decay, "Tap power decay");
    cmd->add_option("--dist_min", ov.dist_min, "Min user distance [m]");
    cmd->add_option("--dist_max", ov.dist_max, "Max user distance [m]");
    cmd->add_option("--freq_weight", ov.freq_weight,
                    "Repair weight, frequency neighbors");
    cmd->add_option("--space_weight", ov.space_weight,
                    "Repair weight, spatial neighbors");
    cmd->add_option("--L", ov.num_power_levels, "Power grid levels");
    cmd->add_option("--repair_max_iters", ov.repair_max_iters,
                    "Repair sweep cap");
  }

  ScenarioConfig resolve() const {
    if (!config_path.empty()) return load_config(config_path, ov);
    return make_config(ov);
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

/// foo.csv -> foo_trace.csv (appends when there is no extension).
std::string trace_path(const std::string& out_path) {
  const auto dot = out_path.rfind('.');
  const auto slash = out_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return out_path + "_trace";
  return out_path.substr(0, dot) + "_trace" + out_path.substr(dot);
}

IntentRuleTable load_rules(const std::string& rules_path) {
  if (rules_path.empty()) return IntentRuleTable::built_in();
  return IntentRuleTable::load(rules_path);
}

int cmd_generate(const ConfigCli& cc, const std::string& out_path) {
  const ScenarioConfig cfg = cc.resolve();
  save_matrix(generate_channel(cfg), out_path);
  return kOk;
}

int cmd_mask(const std::string& in_path, double loss_rate, std::uint64_t seed,
             const std::string& out_path) {
  const ChannelMatrix m = load_matrix(in_path);
  save_matrix(apply_mask(m, loss_rate, seed), out_path);
  return kOk;
}

int cmd_repair(const ConfigCli& cc, bool have_config,
               const std::string& in_path, const std::string& truth_path,
               const std::string& method, const std::string& out_path) {
  const MaskedChannelMatrix raw = load_masked_matrix(in_path);

  ScenarioConfig cfg = cc.resolve();
  if (!have_config && !cc.ov.repair_max_iters)
    cfg.repair_max_iters = raw.num_users + raw.num_subcarriers;

  ChannelMatrix repaired;
  int iterations_used = 0;
  int fallback_count = 0;
  if (method == "nncf") {
    RepairResult rr = nncf_repair(raw, NeighborWeights::from_config(cfg),
                                  cfg.repair_max_iters);
    repaired = std::move(rr.repaired);
    iterations_used = rr.iterations_used;
    fallback_count = rr.fallback_count;
  } else if (method == "mean") {
    repaired = mean_impute(raw);
    for (int k = 0; k < raw.num_users; ++k) {
      bool any = false;
      int missing = 0;
      for (int n = 0; n < raw.num_subcarriers; ++n) {
        if (raw.is_observed(k, n))
          any = true;
        else
          ++missing;
      }
      if (!any) fallback_count += missing;  // row filled by the global mean
    }
  } else {
    throw ConfigError("unknown repair method '" + method +
                      "' (expected nncf or mean)");
  }
  save_matrix(repaired, out_path);

  if (!truth_path.empty()) {
    const ChannelMatrix truth = load_matrix(truth_path);
    const auto missing = raw.missing_indices();
    nlohmann::ordered_json j;
    if (missing.empty())
      j["rmse_missing"] = nullptr;
    else
      j["rmse_missing"] = rmse(truth, repaired, missing);
    j["fallback_count"] = fallback_count;
    j["iterations_used"] = iterations_used;
    std::cout << j.dump() << "\n";
  }
  return kOk;
}

AllocationResult solve_objective(const ChannelMatrix& csi,
                                 const ScenarioConfig& cfg,
                                 Objective objective) {
  switch (objective) {
    case Objective::MaxRate: return solve_max_rate(csi, cfg, cfg.max_power);
    case Objective::MinPower: return solve_min_power(csi, cfg);
    case Objective::MaxEE: return solve_max_ee(csi, cfg).best;
  }
  throw ConfigError("unknown objective");
}

int cmd_allocate(const ConfigCli& cc, const std::string& csi_path,
                 const std::string& objective_str,
                 const std::string& truth_path, const std::string& source_str,
                 const std::string& out_path) {
  const ChannelMatrix csi = load_matrix(csi_path);
  ScenarioConfig cfg = cc.resolve();
  cfg.num_users = csi.num_users;  // solver dimensions come from the matrix
  cfg.num_subcarriers = csi.num_subcarriers;
  cfg.validate();

  const Objective objective = objective_from_string(objective_str);
  const CsiSource source = csi_source_from_string(source_str);
  AllocationResult result = solve_objective(csi, cfg, objective);
  result.report.csi_source = source;
  if (!truth_path.empty()) {
    const ChannelMatrix truth = load_matrix(truth_path);
    result.report =
        evaluate_allocation(result.allocation, truth, cfg, objective, source);
  }
  write_file(out_path, allocation_to_json(result));
  return kOk;
}

int cmd_ask(const ConfigCli& cc, const std::string& csi_path,
            const std::string& query, const std::string& rules_path,
            bool with_timings) {
  const MaskedChannelMatrix raw = load_masked_matrix(csi_path);
  const ScenarioConfig cfg = cc.resolve();
  const Intent intent = parse_intent(query, load_rules(rules_path));
  const WorkflowResult wf = run_workflow(raw, intent, cfg);
  std::cout << workflow_to_json(wf, with_timings);
  std::cerr << "phases [ms]: repair " << wf.timings.repair_ms << ", solve "
            << wf.timings.solve_ms << ", total " << wf.timings.total_ms
            << "\n";
  return kOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& out_path) {
  const SweepSpec spec = SweepSpec::load(spec_path);
  const SweepOutput out = run_sweep(spec);
  write_file(out_path, sweep_rows_csv(out));
  std::cout << sweep_summary_csv(out);
  return kOk;
}

int cmd_compare_repair(const ConfigCli& cc, int seeds,
                       const std::string& out_path) {
  const ScenarioConfig cfg = cc.resolve();
  const RepairCompareOutput out = run_repair_compare(cfg, seeds);
  write_file(out_path, repair_compare_rows_csv(out));
  write_file(trace_path(out_path), repair_trace_csv(out));
  std::cout << repair_compare_summary_json(out);
  return kOk;
}

int cmd_verify(int max_k, int max_n, int instances, std::uint64_t seed) {
  if (max_k < 1 || max_n < 1 || instances < 1)
    throw ConfigError("verify: --max-k, --max-n, --instances must be >= 1");

  Rng rng(seed);
  double max_rel_gap = 0.0;
  int failures = 0;
  for (int i = 0; i < instances; ++i) {
    ConfigOverrides ov;
    ov.num_users = 1 + static_cast<int>(rng.uniform_below(max_k));
    ov.num_subcarriers = 1 + static_cast<int>(rng.uniform_below(max_n));
    const ScenarioConfig cfg = make_config(ov);

    ChannelMatrix g(cfg.num_users, cfg.num_subcarriers);
    for (double& v : g.gains)
      v = std::exp(rng.uniform(std::log(1e-13), std::log(1e-9)));
    const double budget = rng.uniform(0.5, 40.0);

    const double solver =
        solve_max_rate(g, cfg, budget).report.sum_rate;
    const double oracle = brute_force_p1(g, cfg, budget).best_value;
    const double gap = std::abs(solver - oracle) / oracle;
    max_rel_gap = std::max(max_rel_gap, gap);
    if (!(gap <= 1e-9)) ++failures;
  }

  nlohmann::ordered_json j;
  j["instances"] = instances;
  j["max_rel_gap"] = max_rel_gap;
  j["failures"] = failures;
  std::cout << j.dump() << "\n";
  return failures == 0 ? kOk : kVerifyFailed;
}

void repl_report(const WorkflowResult& wf) {
  const AllocationReport& rep = wf.allocation.report;
  std::cout << "objective      " << to_string(rep.objective) << " (rule \""
            << wf.intent.matched_rule << "\")\n";
  if (wf.repair) {
    std::cout << "repair         " << wf.repair->filled_count
              << " entries filled in " << wf.repair->iterations_used
              << " sweeps";
    if (wf.repair->fallback_count > 0)
      std::cout << " (" << wf.repair->fallback_count << " by fallback)";
    std::cout << "\n";
  } else {
    std::cout << "repair         not needed (complete CSI)\n";
  }
  std::cout << "sum rate       " << rep.sum_rate / 1e6 << " Mbit/s\n";
  std::cout << "total power    " << rep.total_power << " W\n";
  std::cout << "efficiency     " << rep.energy_efficiency << " bit/J\n";
  if (rep.budget_exceeded)
    std::cout << "warning: required power exceeds Pmax\n";
}

int cmd_repl(const ConfigCli& cc, const std::string& csi_path,
             const std::string& rules_path) {
  ScenarioConfig cfg = cc.resolve();
  const IntentRuleTable rules = load_rules(rules_path);

  MaskedChannelMatrix csi;
  if (!csi_path.empty()) {
    csi = load_masked_matrix(csi_path);
    cfg.num_users = csi.num_users;
    cfg.num_subcarriers = csi.num_subcarriers;
    cfg.validate();
  } else {
    csi = apply_mask(generate_channel(cfg), cfg.loss_rate,
                     derive_seed(cfg.seed, kMaskStream));
    std::cout << "no --csi given; generated a " << cfg.num_users << "x"
              << cfg.num_subcarriers << " scenario (seed " << cfg.seed
              << ", loss " << cfg.loss_rate << ")\n";
  }
  std::cout << "type a request (e.g. \"higher speed for video streaming\"),\n"
            << "or: set rmin <bit/s> | set pmax <W> | reload-csi <path> | "
               "quit\n";

  std::string line;
  while (true) {
    std::cout << "> " << std::flush;
    if (!std::getline(std::cin, line)) break;
    std::istringstream words(line);
    std::string first;
    words >> first;
    if (first.empty()) continue;
    if (first == "quit" || first == "exit") break;

    try {
      if (first == "set") {
        std::string what;
        double value;
        if (!(words >> what >> value) || (what != "rmin" && what != "pmax")) {
          std::cout << "usage: set rmin <bit/s> | set pmax <W>\n";
          continue;
        }
        (what == "rmin" ? cfg.min_rate : cfg.max_power) = value;
        cfg.validate();
        std::cout << "ok, " << what << " = " << value << "\n";
      } else if (first == "reload-csi") {
        std::string path;
        if (!(words >> path)) {
          std::cout << "usage: reload-csi <path>\n";
          continue;
        }
        csi = load_masked_matrix(path);
        cfg.num_users = csi.num_users;
        cfg.num_subcarriers = csi.num_subcarriers;
        cfg.validate();
        std::cout << "ok, " << csi.num_users << "x" << csi.num_subcarriers
                  << " matrix, " << csi.missing_count()
                  << " missing entries\n";
      } else {
        repl_report(run_workflow(csi, parse_intent(line, rules), cfg));
      }
    } catch (const Error& e) {
      std::cout << "error: " << e.what() << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intent-driven OFDMA resource allocation simulator"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "Write a truth CSI matrix");
  ConfigCli gen_cfg;
  std::string gen_out;
  gen_cfg.attach(generate);
  generate->add_option("--out", gen_out, "Output CSV")->required();

  // mask
  auto* mask = app.add_subcommand("mask", "Mask entries of a CSI matrix");
  std::string mask_in, mask_out;
  double mask_loss = 0.0;
  std::uint64_t mask_seed = 0;
  mask->add_option("--in", mask_in, "Input CSV")->required();
  mask->add_option("--loss-rate", mask_loss, "Loss fraction")->required();
  mask->add_option("--seed", mask_seed, "Mask seed")->required();
  mask->add_option("--out", mask_out, "Output CSV")->required();

  // repair
  auto* repair = app.add_subcommand("repair", "Fill missing CSI entries");
  ConfigCli rep_cfg;
  std::string rep_in, rep_truth, rep_method = "nncf", rep_out;
  rep_cfg.attach(repair);
  repair->add_option("--in", rep_in, "Masked CSV")->required();
  repair->add_option("--truth", rep_truth, "Truth CSV (adds a JSON summary)");
  repair->add_option("--method", rep_method, "nncf or mean");
  repair->add_option("--out", rep_out, "Output CSV")->required();

  // allocate
  auto* allocate = app.add_subcommand("allocate", "Solve one objective");
  ConfigCli alloc_cfg;
  std::string alloc_csi, alloc_obj, alloc_truth, alloc_out;
  std::string alloc_source = "perfect";
  alloc_cfg.attach(allocate);
  allocate->add_option("--csi", alloc_csi, "Complete CSI CSV")->required();
  allocate->add_option("--objective", alloc_obj,
                       "max-rate, min-power or max-ee")->required();
  allocate->add_option("--eval-truth", alloc_truth,
                       "Score the allocation against this truth CSV");
  allocate->add_option("--csi-source", alloc_source,
                       "Provenance label for the report");
  allocate->add_option("--out", alloc_out, "Output JSON")->required();

  // ask
  auto* ask = app.add_subcommand("ask", "Natural-language request");
  ConfigCli ask_cfg;
  std::string ask_csi, ask_query, ask_rules;
  bool ask_timings = false;
  ask_cfg.attach(ask);
  ask->add_option("--csi", ask_csi, "CSI CSV (masked or complete)")
      ->required();
  ask->add_option("--query", ask_query, "Operator request text")->required();
  ask->add_option("--rules", ask_rules, "Intent rule table file");
  ask->add_flag("--timings", ask_timings, "Include timings_ms in the JSON");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sum-rate vs budget experiment");
  std::string sweep_spec, sweep_out;
  sweep->add_option("--spec", sweep_spec, "Sweep spec JSON")->required();
  sweep->add_option("--out", sweep_out, "Rows CSV")->required();

  // compare-repair
  auto* compare =
      app.add_subcommand("compare-repair", "NNCF vs mean imputation");
  ConfigCli cmp_cfg;
  int cmp_seeds = 100;
  std::string cmp_out;
  cmp_cfg.attach(compare);
  compare->add_option("--seeds", cmp_seeds, "Number of scenarios");
  compare->add_option("--out", cmp_out, "Rows CSV")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Solver vs brute-force oracle");
  int ver_k = 3, ver_n = 4, ver_instances = 100;
  std::uint64_t ver_seed = 1;
  verify->add_option("--max-k", ver_k, "Max users per instance");
  verify->add_option("--max-n", ver_n, "Max subcarriers per instance");
  verify->add_option("--instances", ver_instances, "Random instances");
  verify->add_option("--seed", ver_seed, "Instance stream seed");

  // repl
  auto* repl = app.add_subcommand("repl", "Interactive operator loop");
  ConfigCli repl_cfg;
  std::string repl_csi, repl_rules;
  repl_cfg.attach(repl);
  repl->add_option("--csi", repl_csi, "CSI CSV (generated when absent)");
  repl->add_option("--rules", repl_rules, "Intent rule table file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen_cfg, gen_out);
    if (mask->parsed()) return cmd_mask(mask_in, mask_loss, mask_seed, mask_out);
    if (repair->parsed())
      return cmd_repair(rep_cfg, repair->count("--config") > 0, rep_in,
                        rep_truth, rep_method, rep_out);
    if (allocate->parsed())
      return cmd_allocate(alloc_cfg, alloc_csi, alloc_obj, alloc_truth,
                          alloc_source, alloc_out);
    if (ask->parsed())
      return cmd_ask(ask_cfg, ask_csi, ask_query, ask_rules, ask_timings);
    if (sweep->parsed()) return cmd_sweep(sweep_spec, sweep_out);
    if (compare->parsed())
      return cmd_compare_repair(cmp_cfg, cmp_seeds, cmp_out);
    if (verify->parsed())
      return cmd_verify(ver_k, ver_n, ver_instances, ver_seed);
    if (repl->parsed()) return cmd_repl(repl_cfg, repl_csi, repl_rules);
  } catch (const IntentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUnrecognizedIntent;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}
