// bcsim command-line front end. Talks to the simulator exclusively through
// the C API in bcsim/bcsim.h, the same surface an external embedder gets.
//
// Exit codes: 0 success, 2 scenario/input problem (parse, io, validation,
// bad option values), 3 runtime failure during simulation.

#include <bcsim/bcsim.h>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(bcsim_status status) {
  switch (status) {
    case BCSIM_OK:
      return kExitOk;
    case BCSIM_ERR_IO:
    case BCSIM_ERR_PARSE:
    case BCSIM_ERR_VALIDATION:
    case BCSIM_ERR_INVALID_ARGUMENT:
      return kExitInput;
    default:
      return kExitRuntime;
  }
}

struct ScenarioHandle {
  bcsim_scenario* ptr = nullptr;
  ~ScenarioHandle() { bcsim_scenario_free(ptr); }
};

struct ResultHandle {
  bcsim_result* ptr = nullptr;
  ~ResultHandle() { bcsim_result_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { bcsim_string_free(ptr); }
};

int fail(bcsim_status status, const std::string& context) {
  std::cerr << context << ": " << bcsim_status_name(status) << "\n"
            << bcsim_last_error() << "\n";
  return exit_code_for(status);
}

int load(const std::string& path, ScenarioHandle& scenario) {
  const bcsim_status status = bcsim_scenario_load_file(path.c_str(), &scenario.ptr);
  if (status != BCSIM_OK) return fail(status, "cannot load " + path);
  return kExitOk;
}

int validate_or_fail(const ScenarioHandle& scenario) {
  size_t count = 0;
  OwnedString text;
  const bcsim_status status =
      bcsim_scenario_validate(scenario.ptr, &count, &text.ptr);
  if (status != BCSIM_OK) return fail(status, "validation");
  if (count > 0) {
    std::cerr << count << " violation(s):\n" << text.ptr;
    return kExitInput;
  }
  return kExitOk;
}

bool write_file(const std::filesystem::path& path, const char* text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

struct RunFlags {
  std::string scenario_path;
  std::string out_dir;
  std::string policy;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double ticks = 0.0;

  bcsim_run_options options() const {
    bcsim_run_options opts{};
    opts.has_seed = seed_set ? 1 : 0;
    opts.seed = seed;
    opts.policy = policy.empty() ? nullptr : policy.c_str();
    opts.tick = ticks;
    return opts;
  }
};

void add_run_flags(CLI::App* cmd, RunFlags& flags, bool with_policy = true) {
  cmd->add_option("scenario", flags.scenario_path, "scenario JSON file")->required();
  cmd->add_option("--seed", flags.seed, "override the scenario seed")
      ->each([&flags](const std::string&) { flags.seed_set = true; });
  if (with_policy) {
    cmd->add_option("--policy", flags.policy,
                    "offload policy: min_latency or min_energy");
  }
  cmd->add_option("--ticks", flags.ticks,
                  "resource allocation tick interval in seconds");
}

int cmd_validate(const std::string& path) {
  ScenarioHandle scenario;
  if (int rc = load(path, scenario)) return rc;
  if (int rc = validate_or_fail(scenario)) return rc;
  std::cout << "ok\n";
  return kExitOk;
}

int cmd_run(const RunFlags& flags) {
  ScenarioHandle scenario;
  if (int rc = load(flags.scenario_path, scenario)) return rc;
  if (int rc = validate_or_fail(scenario)) return rc;

  const bcsim_run_options opts = flags.options();
  ResultHandle result;
  const bcsim_status status = bcsim_run(scenario.ptr, &opts, &result.ptr);
  if (status != BCSIM_OK) return fail(status, "run");

  OwnedString trace, json, csv;
  bcsim_result_trace(result.ptr, &trace.ptr);
  bcsim_result_report_json(result.ptr, &json.ptr);
  bcsim_result_report_csv(result.ptr, &csv.ptr);

  if (flags.out_dir.empty()) {
    std::cout << json.ptr;
    return kExitOk;
  }
  std::error_code ec;
  std::filesystem::create_directories(flags.out_dir, ec);
  const std::filesystem::path dir(flags.out_dir);
  if (ec || !write_file(dir / "events.trace", trace.ptr) ||
      !write_file(dir / "report.json", json.ptr) ||
      !write_file(dir / "report.csv", csv.ptr)) {
    std::cerr << "cannot write outputs under " << flags.out_dir << "\n";
    return kExitRuntime;
  }
  std::cout << "wrote " << (dir / "events.trace").string() << ", "
            << (dir / "report.json").string() << ", "
            << (dir / "report.csv").string() << "\n";
  return kExitOk;
}

int cmd_compare(const RunFlags& flags, const std::vector<std::string>& policies) {
  ScenarioHandle scenario;
  if (int rc = load(flags.scenario_path, scenario)) return rc;
  if (int rc = validate_or_fail(scenario)) return rc;

  std::vector<const char*> policy_ptrs;
  policy_ptrs.reserve(policies.size());
  for (const auto& p : policies) policy_ptrs.push_back(p.c_str());

  const bcsim_run_options opts = flags.options();
  OwnedString table;
  const bcsim_status status = bcsim_compare(scenario.ptr, policy_ptrs.data(),
                                            policy_ptrs.size(), &opts, &table.ptr);
  if (status != BCSIM_OK) return fail(status, "compare");

  std::cout << table.ptr;
  if (!flags.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(flags.out_dir, ec);
    const auto path = std::filesystem::path(flags.out_dir) / "compare.tsv";
    if (ec || !write_file(path, table.ptr)) {
      std::cerr << "cannot write " << path.string() << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

int cmd_trace_dump(const RunFlags& flags) {
  ScenarioHandle scenario;
  if (int rc = load(flags.scenario_path, scenario)) return rc;
  if (int rc = validate_or_fail(scenario)) return rc;

  const bcsim_run_options opts = flags.options();
  ResultHandle result;
  const bcsim_status status = bcsim_run(scenario.ptr, &opts, &result.ptr);
  if (status != BCSIM_OK) return fail(status, "run");

  OwnedString trace;
  bcsim_result_trace(result.ptr, &trace.ptr);
  std::cout << trace.ptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "bcsim " + std::string(bcsim_version()) +
      " - deterministic 6G sensing and compute-offloading simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate =
      app.add_subcommand("validate", "check a scenario against the schema");
  validate->add_option("scenario", validate_path, "scenario JSON file")->required();

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "execute a scenario");
  add_run_flags(run, run_flags);
  run->add_option("--out", run_flags.out_dir,
                  "directory for events.trace, report.json, report.csv");

  RunFlags cmp_flags;
  std::vector<std::string> cmp_policies;
  CLI::App* compare =
      app.add_subcommand("compare", "run the same scenario under several policies");
  add_run_flags(compare, cmp_flags, /*with_policy=*/false);
  compare->add_option("--policy", cmp_policies, "policy (repeatable, >= 2)")
      ->required()
      ->expected(-2);
  compare->add_option("--out", cmp_flags.out_dir, "directory for compare.tsv");

  RunFlags dump_flags;
  CLI::App* dump =
      app.add_subcommand("trace-dump", "run a scenario and print its event trace");
  add_run_flags(dump, dump_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  if (validate->parsed()) return cmd_validate(validate_path);
  if (run->parsed()) return cmd_run(run_flags);
  if (compare->parsed()) return cmd_compare(cmp_flags, cmp_policies);
  if (dump->parsed()) return cmd_trace_dump(dump_flags);
  return kExitInput;
}
