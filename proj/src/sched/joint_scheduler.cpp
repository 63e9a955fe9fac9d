#include "sched/joint_scheduler.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace bcsim {

CellShares allocate(const CellResourceState& state) {
  const double total = state.comm_demand + state.sensing_demand;
  if (total <= state.capacity) {
    return CellShares{state.comm_demand, state.sensing_demand};
  }

  const double weighted_comm = state.w_comm * state.comm_demand;
  const double weighted_sens = state.w_sens * state.sensing_demand;
  const double weighted_total = weighted_comm + weighted_sens;

  double comm = state.capacity * weighted_comm / weighted_total;
  double sens = state.capacity * weighted_sens / weighted_total;

  // Cap each share at its demand and hand the surplus to the other side
  // once, still capped at that side's demand.
  double surplus = 0.0;
  if (comm > state.comm_demand) {
    surplus += comm - state.comm_demand;
    comm = state.comm_demand;
  }
  if (sens > state.sensing_demand) {
    surplus += sens - state.sensing_demand;
    sens = state.sensing_demand;
  }
  if (surplus > 0.0) {
    if (comm < state.comm_demand) {
      const double take = std::min(surplus, state.comm_demand - comm);
      comm += take;
      surplus -= take;
    }
    if (sens < state.sensing_demand) {
      const double take = std::min(surplus, state.sensing_demand - sens);
      sens += take;
    }
  }
  return CellShares{comm, sens};
}

double effective_noise_std(double noise_std, double share) {
  if (share <= 0.0) {
    throw SimError(ErrorCode::SensingStarved, "sensing share is zero");
  }
  return noise_std / std::sqrt(share);
}

double effective_bandwidth(double bandwidth, double share) {
  return bandwidth * std::clamp(share, 0.0, 1.0);
}

}  // namespace bcsim
