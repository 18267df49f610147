// SPDX-License-Identifier: Apache-2.0

#include "ofdma/agent.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ofdma/errors.hpp"

namespace ofdma {
namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double elapsed_ms(std::chrono::steady_clock::time_point from,
                  std::chrono::steady_clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

/// Reruns `fn`, prefixing any library error with the failing phase while
/// preserving the error type (the CLI maps types to exit codes).
template <typename F>
auto tag_phase(const char* phase, F&& fn) {
  try {
    return fn();
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(phase) + ": " + e.what(), e.residual());
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(std::string(phase) + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(phase) + ": " + e.what());
  }
}

}  // namespace

IntentRuleTable IntentRuleTable::built_in() {
  IntentRuleTable t;
  t.rules_ = {
      {"rate", Objective::MaxRate},
      {"speed", Objective::MaxRate},
      {"throughput", Objective::MaxRate},
      {"stream", Objective::MaxRate},
      {"fast", Objective::MaxRate},
      {"power", Objective::MinPower},
      {"battery", Objective::MinPower},
      {"save", Objective::MinPower},
      {"sensor", Objective::MinPower},
      {"energy-saving", Objective::MinPower},
      {"efficien", Objective::MaxEE},
      {"green", Objective::MaxEE},
      {"balance", Objective::MaxEE},
      {"per-joule", Objective::MaxEE},
  };
  return t;
}

IntentRuleTable IntentRuleTable::parse(const std::string& text,
                                       const std::string& source_name) {
  IntentRuleTable t;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto arrow = line.find("->");
    if (arrow == std::string::npos)
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": expected 'keyword -> objective'");
    const std::string keyword = lowercase(trim(line.substr(0, arrow)));
    const std::string objective = trim(line.substr(arrow + 2));
    if (keyword.empty())
      throw ConfigError(source_name + ":" + std::to_string(line_no) +
                        ": empty keyword");
    t.rules_.push_back({keyword, objective_from_string(objective)});
  }
  if (t.rules_.empty())
    throw ConfigError(source_name + ": rule table has no rules");
  return t;
}

IntentRuleTable IntentRuleTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule table: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Intent IntentRuleTable::match(const std::string& query) const {
  if (trim(query).empty()) throw IntentError("empty query");
  const std::string lowered = lowercase(query);
  for (const IntentRule& rule : rules_) {
    if (lowered.find(rule.keyword) != std::string::npos)
      return Intent{rule.objective, query, rule.keyword};
  }
  throw IntentError("no intent rule matches query: \"" + query +
                    "\"; available objectives: max-rate, min-power, max-ee");
}

Intent parse_intent(const std::string& query, const IntentRuleTable& table) {
  return table.match(query);
}

Intent parse_intent(const std::string& query) {
  return parse_intent(query, IntentRuleTable::built_in());
}

WorkflowResult run_workflow(const MaskedChannelMatrix& raw,
                            const Intent& intent, const ScenarioConfig& cfg) {
  cfg.validate();
  if (raw.num_users != cfg.num_users ||
      raw.num_subcarriers != cfg.num_subcarriers)
    throw ConfigError("matrix dimensions do not match the config");

  WorkflowResult out;
  out.intent = intent;
  const auto t0 = std::chrono::steady_clock::now();

  // Phase 1: channel reconstruction, triggered only when data is missing, so
  // the solvers always see a complete matrix.
  ChannelMatrix csi;
  if (raw.missing_count() > 0) {
    RepairResult repair = tag_phase("phase 1 (repair)", [&] {
      return nncf_repair(raw, NeighborWeights::from_config(cfg),
                         cfg.repair_max_iters);
    });
    out.repair = RepairSummary{static_cast<int>(repair.filled_indices.size()),
                               repair.iterations_used, repair.fallback_count};
    csi = std::move(repair.repaired);
  } else {
    csi.num_users = raw.num_users;
    csi.num_subcarriers = raw.num_subcarriers;
    csi.gains = raw.values;
    csi.seed = raw.seed;
  }
  const auto t1 = std::chrono::steady_clock::now();

  // Phase 2: intent-driven dispatch.
  out.allocation = tag_phase("phase 2 (solve)", [&]() -> AllocationResult {
    switch (intent.objective) {
      case Objective::MaxRate:
        return solve_max_rate(csi, cfg, cfg.max_power);
      case Objective::MinPower:
        return solve_min_power(csi, cfg);
      case Objective::MaxEE:
        return solve_max_ee(csi, cfg).best;
    }
    throw ConfigError("unknown objective");
  });
  const auto t2 = std::chrono::steady_clock::now();

  // Phase 3: assemble.
  out.timings.repair_ms = elapsed_ms(t0, t1);
  out.timings.solve_ms = elapsed_ms(t1, t2);
  out.timings.total_ms = elapsed_ms(t0, std::chrono::steady_clock::now());
  return out;
}

WorkflowResult run_workflow(const ChannelMatrix& complete_csi,
                            const Intent& intent, const ScenarioConfig& cfg) {
  return run_workflow(MaskedChannelMatrix::from_complete(complete_csi), intent,
                      cfg);
}

std::string workflow_to_json(const WorkflowResult& r, bool include_timings) {
  nlohmann::ordered_json j =
      nlohmann::ordered_json::parse(allocation_to_json(r.allocation));
  j["intent"] = to_string(r.intent.objective);
  j["matched_rule"] = r.intent.matched_rule;
  if (r.repair) {
    j["repair"] = {{"filled_count", r.repair->filled_count},
                   {"iterations_used", r.repair->iterations_used},
                   {"fallback_count", r.repair->fallback_count}};
  } else {
    j["repair"] = "perfect";
  }
  if (include_timings) {
    j["timings_ms"] = {{"repair", r.timings.repair_ms},
                       {"solve", r.timings.solve_ms},
                       {"total", r.timings.total_ms}};
  }
  return j.dump(2) + "\n";
}

}  // namespace ofdma
