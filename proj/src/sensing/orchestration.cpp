#include "sensing/orchestration.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/error.hpp"

namespace bcsim {

const char* to_string(SessionState s) {
  switch (s) {
    case SessionState::Requested: return "requested";
    case SessionState::Authorized: return "authorized";
    case SessionState::Configured: return "configured";
    case SessionState::Measuring: return "measuring";
    case SessionState::Completed: return "completed";
    case SessionState::Rejected: return "rejected";
  }
  return "unknown";
}

void SensingSession::advance(SessionState next) {
  const bool forward =
      (state == SessionState::Requested && next == SessionState::Authorized) ||
      (state == SessionState::Authorized && next == SessionState::Configured) ||
      (state == SessionState::Configured && next == SessionState::Measuring) ||
      (state == SessionState::Measuring && next == SessionState::Completed);
  const bool reject = next == SessionState::Rejected &&
                      state != SessionState::Completed &&
                      state != SessionState::Rejected;
  if (!forward && !reject) {
    throw SimError(ErrorCode::InvalidArgument,
                   std::string("illegal sensing session transition ") +
                       to_string(state) + " -> " + to_string(next));
  }
  state = next;
}

AuthzDecision authorize(const SensingRequest& request,
                        const std::vector<std::string>& consumer_registry) {
  const bool known = std::find(consumer_registry.begin(), consumer_registry.end(),
                               request.consumer_id) != consumer_registry.end();
  return known ? AuthzDecision::Granted : AuthzDecision::Denied;
}

namespace {

bool qualifies(const MeasurementNode& node, const SensingArea& area) {
  if (!covers(node, area)) return false;
  if (!node.authorized) return false;
  if (node.is_ue() && !node.consent) return false;
  return true;
}

}  // namespace

std::vector<std::pair<NodeId, NodeId>> select_pairs(
    const SensingArea& area, const std::vector<MeasurementNode>& nodes,
    SensingMode mode) {
  std::vector<NodeId> eligible;
  for (const auto& node : nodes) {
    if (qualifies(node, area)) {
      eligible.push_back(node.id);
    }
  }
  std::sort(eligible.begin(), eligible.end());

  std::vector<std::pair<NodeId, NodeId>> pairs;
  if (mode == SensingMode::Monostatic) {
    for (const auto& id : eligible) {
      pairs.emplace_back(id, id);
    }
    if (pairs.size() < 3) {
      throw SimError(ErrorCode::InsufficientCoverage,
                     "monostatic sensing needs >= 3 qualifying nodes, got " +
                         std::to_string(pairs.size()));
    }
  } else {
    for (const auto& tx : eligible) {
      for (const auto& rx : eligible) {
        if (tx != rx) {
          pairs.emplace_back(tx, rx);
        }
      }
    }
    if (pairs.size() < 3) {
      throw SimError(ErrorCode::InsufficientCoverage,
                     "bistatic sensing needs >= 3 qualifying pairs, got " +
                         std::to_string(pairs.size()));
    }
  }
  return pairs;
}

std::vector<NodeId> select_ues(const SensingArea& area,
                               const std::vector<MeasurementNode>& nodes) {
  std::vector<NodeId> ues;
  for (const auto& node : nodes) {
    if (node.is_ue() && qualifies(node, area)) {
      ues.push_back(node.id);
    }
  }
  std::sort(ues.begin(), ues.end());
  return ues;
}

ConfigurationPlan plan_configuration(const SensingRequest& request,
                                     const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                     const std::vector<MeasurementNode>& nodes,
                                     double config_time) {
  if (pairs.empty()) {
    throw SimError(ErrorCode::InvalidArgument, "configuration requires pairs");
  }
  ConfigurationPlan plan;

  std::set<NodeId> distinct;
  for (const auto& [tx, rx] : pairs) {
    distinct.insert(tx);
    distinct.insert(rx);
  }
  plan.nodes_to_configure.assign(distinct.begin(), distinct.end());

  plan.spf_config.mode = request.mode;
  plan.spf_config.area = request.area;
  for (const auto& node : nodes) {
    if (distinct.count(node.id)) {
      plan.spf_config.node_positions[node.id] = node.position;
    }
  }
  for (const auto& id : plan.nodes_to_configure) {
    if (!plan.spf_config.node_positions.count(id)) {
      throw SimError(ErrorCode::InvalidArgument,
                     "pair references node without a position: " + id);
    }
  }

  // Rounds at 1/refresh_rate intervals over the request duration; the first
  // round fires one period after configuration.
  const double period = 1.0 / request.refresh_rate;
  const int rounds = static_cast<int>(std::floor(
      request.refresh_rate * request.duration + 1e-9));
  for (int k = 1; k <= rounds; ++k) {
    plan.round_times.push_back(config_time + k * period);
  }
  return plan;
}

}  // namespace bcsim
