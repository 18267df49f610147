// SPDX-License-Identifier: Apache-2.0

#ifndef OFDMA_AGENT_HPP
#define OFDMA_AGENT_HPP

#include <optional>
#include <string>
#include <vector>

#include "ofdma/config.hpp"
#include "ofdma/matrix.hpp"
#include "ofdma/repair.hpp"
#include "ofdma/scheduler.hpp"

namespace ofdma {

/// One keyword rule: case-insensitive substring -> objective.
struct IntentRule {
  std::string keyword;
  Objective objective;
};

struct Intent {
  Objective objective = Objective::MaxRate;
  std::string raw_query;
  std::string matched_rule;  // the keyword that fired
};

/// Ordered rule table; the first rule whose keyword occurs in the query wins.
/// Rule files are plain text, one `keyword -> objective` per line, with `#`
/// comments; objectives are max-rate, min-power, max-ee.
class IntentRuleTable {
 public:
  /// The shipped default rules (rate/speed/... before power/battery/...
  /// before efficien/green/...), also available as data/intent_rules.txt.
  static IntentRuleTable built_in();
  static IntentRuleTable load(const std::string& path);
  static IntentRuleTable parse(const std::string& text,
                               const std::string& source_name);

  /// Throws IntentError listing the available objectives when nothing fires.
  Intent match(const std::string& query) const;

  const std::vector<IntentRule>& rules() const { return rules_; }

 private:
  std::vector<IntentRule> rules_;
};

Intent parse_intent(const std::string& query);
Intent parse_intent(const std::string& query, const IntentRuleTable& table);

/// RepairResult metadata carried in workflow output (the full matrix and
/// index list stay internal).
struct RepairSummary {
  int filled_count = 0;
  int iterations_used = 0;
  int fallback_count = 0;
};

struct PhaseTimings {
  double repair_ms = 0.0;
  double solve_ms = 0.0;
  double total_ms = 0.0;
};

struct WorkflowResult {
  Intent intent;
  std::optional<RepairSummary> repair;  // nullopt: input was complete
  AllocationResult allocation;
  PhaseTimings timings;
};

/// The three-phase pipeline: (1) repair the matrix iff it has missing
/// entries, (2) dispatch on the intent objective to the matching solver
/// (MaxRate runs at budget Pmax), (3) assemble the result.  A complete input
/// skips phase 1 and yields exactly the direct solver output.
WorkflowResult run_workflow(const MaskedChannelMatrix& raw,
                            const Intent& intent, const ScenarioConfig& cfg);
WorkflowResult run_workflow(const ChannelMatrix& complete_csi,
                            const Intent& intent, const ScenarioConfig& cfg);

/// Allocation JSON plus {intent, matched_rule, repair}, and timings_ms when
/// include_timings is set (timings are wall-clock and break byte-for-byte
/// reproducibility, so they are opt-in).
std::string workflow_to_json(const WorkflowResult& r,
                             bool include_timings = false);

}  // namespace ofdma

#endif  // OFDMA_AGENT_HPP
