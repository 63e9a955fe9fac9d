#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace bcsim {

enum class OffloadPolicy { MinLatency, MinEnergy };

const char* to_string(OffloadPolicy p);
std::optional<OffloadPolicy> parse_policy(const std::string& name);

/// Capabilities collected from Node Discovery Phase 1. One entry per node;
/// re-advertisement replaces the previous entry.
class CapabilityRegistry {
 public:
  void advertise(const ComputeCapability& cap, double advertised_at);
  void mark_failed(const NodeId& id);
  bool is_failed(const NodeId& id) const { return failed_.count(id) > 0; }

  const ComputeCapability* find(const NodeId& id) const;
  double last_advertised(const NodeId& id) const;
  size_t size() const { return entries_.size(); }

  /// Live (advertised, not failed) capabilities in id order.
  std::vector<ComputeCapability> live() const;

 private:
  struct Entry {
    ComputeCapability cap;
    double last_advertised = 0.0;
  };
  std::map<NodeId, Entry> entries_;
  std::set<NodeId> failed_;
};

/// First-offloaded-bit to last-received-result-bit estimate: payload
/// uplink + compute at the load-degraded rate + result downlink. Throws
/// InfeasibleLoad when the node has no spare capacity.
double estimate_latency(const ComputeWorkload& w, const ComputeCapability& cap);

/// Compute energy plus transfer energy for payload and result.
double estimate_energy(const ComputeWorkload& w, const ComputeCapability& cap);

/// Policy decision over the registry: feasibility-filter (memory, precision,
/// deadline for latency-sensitive workloads), then the policy minimizer with
/// ties broken by lowest node id. Single-node traffic classes get one node;
/// multi-node classes get the fanout lowest-cost nodes. Nodes in `exclude`
/// (e.g. failed ones) are skipped. Throws NoFeasibleNode when the feasible
/// set is empty.
std::vector<NodeId> select_compute_nodes(const ComputeWorkload& w,
                                         const CapabilityRegistry& registry,
                                         OffloadPolicy policy, int fanout = 2,
                                         const std::vector<NodeId>& exclude = {});

}  // namespace bcsim
