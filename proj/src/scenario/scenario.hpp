#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "offload/selection.hpp"
#include "sensing/processing.hpp"

namespace bcsim {

// Endpoint ids reserved for the management functions; scenario node ids may
// not collide with these.
inline constexpr const char* kSemfId = "semf";
inline constexpr const char* kSpfId = "spf";
inline constexpr const char* kControllerId = "controller";

struct ChannelSpec {
  double fixed_latency = 0.0;  // seconds
  double bandwidth = 0.0;      // bits/second
};

struct CellSpec {
  std::string id;
  double capacity = 1.0;
  double w_comm = 1.0;
  double w_sens = 1.0;
  double comm_demand = 0.0;
  double sensing_demand = 0.0;
};

struct SensingRequestSpec {
  SensingRequest request;
  double start = 0.0;
};

struct RouteSpec {
  int hops_each_way = 0;
  double per_hop_latency = 0.0;
};

struct WorkloadSpec {
  ComputeWorkload workload;
  NodeId offloader_id;
  double arrival = 0.0;
  int iterations = 1;  // stage-3 exchanges; > 1 only for multi-iteration classes
  int fanout = 1;      // compute nodes; > 1 only for multi-node classes
  std::optional<RouteSpec> route;
};

struct CapabilitySpec {
  ComputeCapability capability;
  double advertise_time = 0.0;
};

struct FaultSpec {
  double time = 0.0;
  NodeId node_id;
  std::string kind = "node_failure";
};

struct SimConfig {
  double tick = 0.1;                    // allocation recomputation interval
  double min_sensing_share = 0.2;      // below this, refresh rate halves
  std::string default_policy = "min_latency";
  int multi_node_fanout = 2;
  int multi_iteration_count = 2;
  double control_message_bits = 1024.0;
  double measurement_report_bits = 2048.0;
  double result_message_bits = 2048.0;
  double sensing_energy_per_bit = 0.0;  // J/bit on sensing data transfers
  LocalizerConfig localizer;
};

struct Scenario {
  uint64_t seed = 0;
  double duration = 0.0;
  SimConfig config;
  ChannelSpec control_channel{0.001, 1e9};
  ChannelSpec data_channel{0.002, 1e8};
  std::vector<CellSpec> cells;
  std::vector<MeasurementNode> nodes;
  std::vector<std::string> consumers;
  double sensing_noise_std = 0.0;
  std::vector<SensingRequestSpec> sensing_requests;
  std::map<std::string, Position> targets;  // request_id -> ground truth
  std::vector<CapabilitySpec> capabilities;
  std::vector<WorkloadSpec> workloads;
  std::vector<FaultSpec> faults;

  const MeasurementNode* find_node(const NodeId& id) const;
  const CellSpec* find_cell(const std::string& id) const;
};

struct Violation {
  std::string path;
  std::string rule;

  std::string to_string() const { return path + ": " + rule; }
};

/// Parse a scenario document. Structural problems (wrong JSON types,
/// missing required fields) are reported as violations against the schema;
/// text that is not JSON at all throws ParseFailure.
struct ParsedScenario {
  Scenario scenario;
  std::vector<Violation> violations;
};

ParsedScenario parse_scenario(const std::string& json_text);
ParsedScenario parse_scenario_file(const std::string& path);  // IoFailure if unreadable

/// Semantic checks: positivity and range rules, unique ids, and referential
/// integrity. Every violation names the offending path and the rule it
/// breaks. A scenario is runnable iff parse and validate both come back
/// empty.
std::vector<Violation> validate(const Scenario& scenario);

}  // namespace bcsim
