#include "offload/selection.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace bcsim {

const char* to_string(OffloadPolicy p) {
  return p == OffloadPolicy::MinLatency ? "min_latency" : "min_energy";
}

std::optional<OffloadPolicy> parse_policy(const std::string& name) {
  if (name == "min_latency") return OffloadPolicy::MinLatency;
  if (name == "min_energy") return OffloadPolicy::MinEnergy;
  return std::nullopt;
}

void CapabilityRegistry::advertise(const ComputeCapability& cap, double advertised_at) {
  entries_[cap.node_id] = Entry{cap, advertised_at};
}

void CapabilityRegistry::mark_failed(const NodeId& id) {
  failed_.insert(id);
}

const ComputeCapability* CapabilityRegistry::find(const NodeId& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second.cap;
}

double CapabilityRegistry::last_advertised(const NodeId& id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? -1.0 : it->second.last_advertised;
}

std::vector<ComputeCapability> CapabilityRegistry::live() const {
  std::vector<ComputeCapability> caps;
  for (const auto& [id, entry] : entries_) {
    if (!failed_.count(id)) {
      caps.push_back(entry.cap);
    }
  }
  return caps;
}

double estimate_latency(const ComputeWorkload& w, const ComputeCapability& cap) {
  if (cap.current_load >= 1.0) {
    throw SimError(ErrorCode::InfeasibleLoad,
                   "node " + cap.node_id + " has no spare compute capacity");
  }
  const double upload = static_cast<double>(w.payload_bits) / cap.link_bw_up;
  const double compute = w.flops / (cap.flops_per_second * (1.0 - cap.current_load));
  const double download = static_cast<double>(w.result_bits) / cap.link_bw_down;
  return upload + compute + download;
}

double estimate_energy(const ComputeWorkload& w, const ComputeCapability& cap) {
  return w.flops * cap.energy_per_flop +
         static_cast<double>(w.payload_bits + w.result_bits) * cap.energy_per_bit;
}

std::vector<NodeId> select_compute_nodes(const ComputeWorkload& w,
                                         const CapabilityRegistry& registry,
                                         OffloadPolicy policy, int fanout,
                                         const std::vector<NodeId>& exclude) {
  if (registry.size() == 0) {
    throw SimError(ErrorCode::NoFeasibleNode, "capability registry is empty");
  }

  struct Candidate {
    NodeId id;
    double cost = 0.0;
  };
  std::vector<Candidate> feasible;
  for (const auto& cap : registry.live()) {
    if (std::find(exclude.begin(), exclude.end(), cap.node_id) != exclude.end()) {
      continue;
    }
    if (cap.memory_bytes < w.memory_bytes) continue;
    if (!cap.supported_precisions.count(w.precision)) continue;
    if (cap.current_load >= 1.0) continue;

    const double latency = estimate_latency(w, cap);
    if (w.qos_class == QosClass::LatencySensitive && latency > w.deadline) continue;

    const double cost =
        policy == OffloadPolicy::MinLatency ? latency : estimate_energy(w, cap);
    feasible.push_back(Candidate{cap.node_id, cost});
  }
  if (feasible.empty()) {
    throw SimError(ErrorCode::NoFeasibleNode,
                   "no feasible compute node for workload " + w.workload_id);
  }

  // Stable cost order, ties by id; live() already yields id order.
  std::stable_sort(feasible.begin(), feasible.end(),
                   [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });

  const size_t take = is_multi_node(w.traffic_class)
                          ? std::min<size_t>(feasible.size(), std::max(1, fanout))
                          : 1;
  std::vector<NodeId> chosen;
  for (size_t i = 0; i < take; ++i) {
    chosen.push_back(feasible[i].id);
  }
  return chosen;
}

}  // namespace bcsim
