#pragma once

#include <map>
#include <vector>

#include "core/types.hpp"
#include "sim/rng.hpp"

namespace bcsim {

/// Node geometry handed to the SPF so measurements can be interpreted.
struct GeometryConfig {
  std::map<NodeId, Position> node_positions;
  SensingMode mode = SensingMode::Bistatic;
  SensingArea area;
};

struct TargetEstimate {
  Position position;
  double residual_rms = 0.0;  // meters, >= 0
  double confidence = 0.0;    // in [0,1]
  bool converged = true;      // false = refinement hit the iteration cap
};

struct LocalizerConfig {
  int grid_resolution = 33;      // coarse seed grid, per axis
  int max_iterations = 100;      // Gauss-Newton cap
  double step_tolerance = 1e-9;  // meters, convergence on step norm
  double damping = 0.5;          // step shrink factor on residual increase
  int max_halvings = 40;
};

/// Noise-free range for a target: Tx->target->Rx path length in bistatic
/// mode, round trip (2x one-way) in monostatic mode.
double forward_range(const Position& tx, const Position& rx,
                     const Position& target, SensingMode mode);

/// A single noisy range observation. noise_std is the effective deviation
/// after the joint scheduler's share has been applied (see
/// effective_noise_std). The sample is clamped at the physical floor: the
/// Tx-Rx baseline in bistatic mode, zero in monostatic mode.
SensingMeasurement generate_measurement(const Position& tx, const Position& rx,
                                        const NodeId& tx_id, const NodeId& rx_id,
                                        const Position& target, SensingMode mode,
                                        double noise_std, double quality,
                                        double timestamp, Rng& rng);

/// Weighted nonlinear least squares over the request area: coarse grid seed
/// followed by damped Gauss-Newton on sum_i w_i (rho_i(p) - range_i)^2 with
/// w_i = quality_i. Iterates are projected onto the area disk. Requires
/// measurements from >= 3 distinct (tx, rx) pairs (TooFewPairs otherwise).
/// When the iteration cap is hit, the best point seen so far is returned
/// with converged = false.
TargetEstimate localize(const std::vector<SensingMeasurement>& measurements,
                        const GeometryConfig& geometry,
                        const LocalizerConfig& config = {});

/// Bystander protection: keep exactly the estimates inside the requested
/// area, preserving order.
std::vector<TargetEstimate> privacy_filter(const std::vector<TargetEstimate>& estimates,
                                           const SensingArea& area);

/// Confidence-weighted centroid of per-round estimates. Result confidence is
/// the mean round confidence; timestamp is the caller's last round time.
SensingResult fuse_rounds(const std::string& request_id,
                          const std::vector<TargetEstimate>& round_estimates,
                          double last_round_time);

}  // namespace bcsim
