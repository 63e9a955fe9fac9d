#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kpi/accounting.hpp"
#include "offload/selection.hpp"
#include "scenario/scenario.hpp"

namespace bcsim {

struct RunOptions {
  std::optional<uint64_t> seed;       // overrides scenario.seed
  std::optional<OffloadPolicy> policy;  // overrides config.default_policy
  std::optional<double> tick;         // overrides config.tick
};

struct RunOutputs {
  RunMeta meta;
  std::string trace_text;
  std::string report_json;
  std::string report_csv;
  KpiAccumulator kpi;
};

/// Execute one scenario to completion. The scenario must validate cleanly
/// (ValidationFailure otherwise). Identical scenario + options give
/// byte-identical trace and report text.
RunOutputs run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// One run per policy with the same seed; only the offload decision differs
/// between runs, so non-offload KPIs are identical across rows.
struct PolicyComparison {
  std::vector<std::string> policies;
  std::vector<KpiAggregates> aggregates;
  std::vector<RunOutputs> runs;
  std::string table_text;  // one TSV row per policy
};

PolicyComparison compare_policies(const Scenario& scenario,
                                  const std::vector<OffloadPolicy>& policies,
                                  const RunOptions& options = {});

}  // namespace bcsim
