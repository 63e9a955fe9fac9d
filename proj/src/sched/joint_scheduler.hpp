#pragma once

#include <string>

namespace bcsim {

/// Per-cell snapshot of the shared radio resource. Capacity is normalized
/// (1.0 = the whole cell); a scenario may configure a smaller capacity to
/// model a cell where only part of the resource is available for both
/// services.
struct CellResourceState {
  std::string cell_id;
  double capacity = 1.0;
  double comm_demand = 0.0;     // >= 0
  double sensing_demand = 0.0;  // >= 0
  double w_comm = 1.0;          // > 0
  double w_sens = 1.0;          // > 0
};

struct CellShares {
  double comm = 0.0;
  double sensing = 0.0;
};

/// Weighted proportional split of the cell resource between communication
/// and sensing. Demands that fit within capacity are granted fully;
/// otherwise each side gets capacity * w*d / sum(w*d), capped at its own
/// demand with one surplus-redistribution pass.
CellShares allocate(const CellResourceState& state);

/// Sensing noise inflation for a granted share: std scales as 1/sqrt(share),
/// modeling the shorter integration time. Throws SensingStarved on share 0.
double effective_noise_std(double noise_std, double share);

/// Data-plane bandwidth scaling for a granted communication share.
double effective_bandwidth(double bandwidth, double share);

}  // namespace bcsim
