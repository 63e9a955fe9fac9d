#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/types.hpp"
#include "sensing/processing.hpp"

namespace bcsim {

enum class AuthzDecision { Granted, Denied };

enum class SessionState {
  Requested,
  Authorized,
  Configured,
  Measuring,
  Completed,
  Rejected,
};

const char* to_string(SessionState s);

/// One sensing request's lifecycle. Transitions are only legal along
/// Requested -> Authorized -> Configured -> Measuring -> Completed, or from
/// any non-terminal state to Rejected.
struct SensingSession {
  SensingRequest request;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  GeometryConfig spf_config;
  SessionState state = SessionState::Requested;

  void advance(SessionState next);
};

/// Consumer authorization gate. Denial is a value: denied sessions reach
/// Rejected and never emit results.
AuthzDecision authorize(const SensingRequest& request,
                        const std::vector<std::string>& consumer_registry);

/// Map the requested area onto measurement node pairs. Bistatic mode yields
/// all ordered (tx, rx) pairs of distinct qualifying nodes; monostatic mode
/// yields (n, n) singles. A node qualifies when it covers the whole area, is
/// authorized, and (for UEs) has user consent. Unambiguous 2-D localization
/// needs three independent ranges, so fewer than 3 pairs is
/// InsufficientCoverage. Output order is deterministic (by id) regardless of
/// input order.
std::vector<std::pair<NodeId, NodeId>> select_pairs(
    const SensingArea& area, const std::vector<MeasurementNode>& nodes,
    SensingMode mode);

/// UEs eligible for involvement: covering, consenting, authorized; sorted by
/// id. May be empty (pure base-station sensing stays possible).
std::vector<NodeId> select_ues(const SensingArea& area,
                               const std::vector<MeasurementNode>& nodes);

/// What a Configured session needs from the control plane: one config per
/// distinct node in the pair list, one SPF geometry config, and the
/// measurement round times (1/refresh_rate apart, for the request duration).
struct ConfigurationPlan {
  std::vector<NodeId> nodes_to_configure;  // distinct, sorted
  GeometryConfig spf_config;
  std::vector<double> round_times;
};

ConfigurationPlan plan_configuration(const SensingRequest& request,
                                     const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                     const std::vector<MeasurementNode>& nodes,
                                     double config_time);

}  // namespace bcsim
