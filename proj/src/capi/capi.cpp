#include "bcsim/bcsim.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "scenario/runner.hpp"
#include "scenario/scenario.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) {
    std::memcpy(out, s.c_str(), s.size() + 1);
  }
  return out;
}

bcsim_status status_for(const bcsim::SimError& e) {
  switch (e.code()) {
    case bcsim::ErrorCode::IoFailure: return BCSIM_ERR_IO;
    case bcsim::ErrorCode::ParseFailure: return BCSIM_ERR_PARSE;
    case bcsim::ErrorCode::ValidationFailure: return BCSIM_ERR_VALIDATION;
    case bcsim::ErrorCode::InvalidArgument: return BCSIM_ERR_INVALID_ARGUMENT;
    default: return BCSIM_ERR_RUNTIME;
  }
}

bcsim::RunOptions to_run_options(const bcsim_run_options* options) {
  bcsim::RunOptions opts;
  if (!options) return opts;
  if (options->has_seed) opts.seed = options->seed;
  if (options->policy) {
    auto policy = bcsim::parse_policy(options->policy);
    if (!policy) {
      throw bcsim::SimError(bcsim::ErrorCode::InvalidArgument,
                            std::string("unknown policy: ") + options->policy);
    }
    opts.policy = *policy;
  }
  if (options->tick > 0.0) opts.tick = options->tick;
  return opts;
}

template <typename Fn>
bcsim_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return BCSIM_OK;
  } catch (const bcsim::SimError& e) {
    g_last_error = e.what();
    return status_for(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BCSIM_ERR_RUNTIME;
  }
}

}  // namespace

struct bcsim_scenario {
  bcsim::Scenario scenario;
  std::vector<bcsim::Violation> parse_violations;
};

namespace {

void require_clean(const bcsim_scenario* scenario) {
  if (!scenario->parse_violations.empty()) {
    std::string what = "scenario failed validation:";
    for (const auto& v : scenario->parse_violations) {
      what += "\n  " + v.to_string();
    }
    throw bcsim::SimError(bcsim::ErrorCode::ValidationFailure, what);
  }
}

}  // namespace

struct bcsim_result {
  bcsim::RunOutputs outputs;
};

extern "C" {

const char* bcsim_version(void) { return "0.1.0"; }

const char* bcsim_status_name(bcsim_status status) {
  switch (status) {
    case BCSIM_OK: return "ok";
    case BCSIM_ERR_IO: return "io_error";
    case BCSIM_ERR_PARSE: return "parse_error";
    case BCSIM_ERR_VALIDATION: return "validation_error";
    case BCSIM_ERR_RUNTIME: return "runtime_error";
    case BCSIM_ERR_INVALID_ARGUMENT: return "invalid_argument";
  }
  return "unknown";
}

const char* bcsim_last_error(void) { return g_last_error.c_str(); }

void bcsim_string_free(char* s) { std::free(s); }

bcsim_status bcsim_scenario_load_file(const char* path, bcsim_scenario** out) {
  if (!path || !out) {
    g_last_error = "path and out must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto parsed = bcsim::parse_scenario_file(path);
    *out = new bcsim_scenario{std::move(parsed.scenario), std::move(parsed.violations)};
  });
}

bcsim_status bcsim_scenario_load_string(const char* json_text, bcsim_scenario** out) {
  if (!json_text || !out) {
    g_last_error = "json_text and out must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    auto parsed = bcsim::parse_scenario(json_text);
    *out = new bcsim_scenario{std::move(parsed.scenario), std::move(parsed.violations)};
  });
}

void bcsim_scenario_free(bcsim_scenario* scenario) { delete scenario; }

bcsim_status bcsim_scenario_validate(const bcsim_scenario* scenario,
                                     size_t* out_count, char** out_text) {
  if (!scenario || !out_count) {
    g_last_error = "scenario and out_count must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    std::vector<bcsim::Violation> all = scenario->parse_violations;
    const auto semantic = bcsim::validate(scenario->scenario);
    all.insert(all.end(), semantic.begin(), semantic.end());
    *out_count = all.size();
    if (out_text) {
      std::string text;
      for (const auto& v : all) {
        text += v.to_string();
        text += '\n';
      }
      *out_text = dup_string(text);
    }
  });
}

bcsim_status bcsim_run(const bcsim_scenario* scenario,
                       const bcsim_run_options* options, bcsim_result** out) {
  if (!scenario || !out) {
    g_last_error = "scenario and out must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    require_clean(scenario);
    auto outputs = bcsim::run_scenario(scenario->scenario, to_run_options(options));
    *out = new bcsim_result{std::move(outputs)};
  });
}

void bcsim_result_free(bcsim_result* result) { delete result; }

bcsim_status bcsim_result_trace(const bcsim_result* result, char** out_text) {
  if (!result || !out_text) {
    g_last_error = "result and out_text must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  *out_text = dup_string(result->outputs.trace_text);
  return BCSIM_OK;
}

bcsim_status bcsim_result_report_json(const bcsim_result* result, char** out_text) {
  if (!result || !out_text) {
    g_last_error = "result and out_text must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  *out_text = dup_string(result->outputs.report_json);
  return BCSIM_OK;
}

bcsim_status bcsim_result_report_csv(const bcsim_result* result, char** out_text) {
  if (!result || !out_text) {
    g_last_error = "result and out_text must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  *out_text = dup_string(result->outputs.report_csv);
  return BCSIM_OK;
}

bcsim_status bcsim_compare(const bcsim_scenario* scenario,
                           const char* const* policies, size_t n_policies,
                           const bcsim_run_options* options, char** out_table) {
  if (!scenario || !policies || !out_table) {
    g_last_error = "scenario, policies and out_table must be non-NULL";
    return BCSIM_ERR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    require_clean(scenario);
    std::vector<bcsim::OffloadPolicy> parsed;
    for (size_t i = 0; i < n_policies; ++i) {
      auto policy = bcsim::parse_policy(policies[i] ? policies[i] : "");
      if (!policy) {
        throw bcsim::SimError(bcsim::ErrorCode::InvalidArgument,
                              std::string("unknown policy: ") +
                                  (policies[i] ? policies[i] : "(null)"));
      }
      parsed.push_back(*policy);
    }
    auto cmp = bcsim::compare_policies(scenario->scenario, parsed, to_run_options(options));
    *out_table = dup_string(cmp.table_text);
  });
}

}  // extern "C"
