#include "sensing/processing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "core/error.hpp"

namespace bcsim {

double forward_range(const Position& tx, const Position& rx,
                     const Position& target, SensingMode mode) {
  if (mode == SensingMode::Monostatic) {
    return 2.0 * distance(tx, target);
  }
  return distance(tx, target) + distance(target, rx);
}

SensingMeasurement generate_measurement(const Position& tx, const Position& rx,
                                        const NodeId& tx_id, const NodeId& rx_id,
                                        const Position& target, SensingMode mode,
                                        double noise_std, double quality,
                                        double timestamp, Rng& rng) {
  double range = forward_range(tx, rx, target, mode);
  if (noise_std > 0.0) {
    range += rng.normal(0.0, noise_std);
  }
  const double floor = mode == SensingMode::Bistatic ? distance(tx, rx) : 0.0;
  range = std::max(range, floor);
  return SensingMeasurement{tx_id, rx_id, range, quality, timestamp};
}

namespace {

struct RangeObservation {
  Position tx;
  Position rx;
  double range = 0.0;
  double weight = 0.0;
};

std::vector<RangeObservation> resolve_geometry(
    const std::vector<SensingMeasurement>& measurements,
    const GeometryConfig& geometry) {
  std::vector<RangeObservation> obs;
  obs.reserve(measurements.size());
  for (const auto& m : measurements) {
    auto tx_it = geometry.node_positions.find(m.tx_id);
    auto rx_it = geometry.node_positions.find(m.rx_id);
    if (tx_it == geometry.node_positions.end() ||
        rx_it == geometry.node_positions.end()) {
      throw SimError(ErrorCode::InvalidArgument,
                     "measurement references node missing from geometry: " +
                         m.tx_id + "/" + m.rx_id);
    }
    obs.push_back(RangeObservation{tx_it->second, rx_it->second, m.range, m.quality});
  }
  return obs;
}

double cost_at(const std::vector<RangeObservation>& obs, SensingMode mode,
               const Position& p) {
  double cost = 0.0;
  for (const auto& o : obs) {
    const double r = forward_range(o.tx, o.rx, p, mode) - o.range;
    cost += o.weight * r * r;
  }
  return cost;
}

Position project_to_area(const SensingArea& area, Position p) {
  const double d = distance(p, area.center);
  if (d > area.radius && d > 0.0) {
    const double s = area.radius / d;
    p.x = area.center.x + (p.x - area.center.x) * s;
    p.y = area.center.y + (p.y - area.center.y) * s;
  }
  return p;
}

// Gradient of the forward range at p. Degenerate legs (p on top of a node)
// contribute zero.
Position range_gradient(const RangeObservation& o, SensingMode mode, const Position& p) {
  Position g{0.0, 0.0};
  const double d_tx = distance(p, o.tx);
  if (d_tx > 1e-12) {
    const double f = mode == SensingMode::Monostatic ? 2.0 : 1.0;
    g.x += f * (p.x - o.tx.x) / d_tx;
    g.y += f * (p.y - o.tx.y) / d_tx;
  }
  if (mode == SensingMode::Bistatic) {
    const double d_rx = distance(p, o.rx);
    if (d_rx > 1e-12) {
      g.x += (p.x - o.rx.x) / d_rx;
      g.y += (p.y - o.rx.y) / d_rx;
    }
  }
  return g;
}

}  // namespace

TargetEstimate localize(const std::vector<SensingMeasurement>& measurements,
                        const GeometryConfig& geometry,
                        const LocalizerConfig& config) {
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const auto& m : measurements) {
    pairs.emplace(m.tx_id, m.rx_id);
  }
  if (pairs.size() < 3) {
    throw SimError(ErrorCode::TooFewPairs,
                   "localization needs >= 3 distinct (tx, rx) pairs, got " +
                       std::to_string(pairs.size()));
  }

  auto obs = resolve_geometry(measurements, geometry);
  double total_weight = 0.0;
  for (const auto& o : obs) total_weight += o.weight;
  if (total_weight <= 0.0) {
    // All-zero qualities leave the objective undefined; fall back to a
    // uniform weighting.
    for (auto& o : obs) o.weight = 1.0;
    total_weight = static_cast<double>(obs.size());
  }

  const SensingArea& area = geometry.area;
  const SensingMode mode = geometry.mode;

  // Coarse grid seed over the area disk.
  Position best = area.center;
  double best_cost = cost_at(obs, mode, best);
  const int n = std::max(2, config.grid_resolution);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Position p{area.center.x - area.radius + 2.0 * area.radius * i / (n - 1),
                 area.center.y - area.radius + 2.0 * area.radius * j / (n - 1)};
      if (distance(p, area.center) > area.radius) continue;
      const double c = cost_at(obs, mode, p);
      if (c < best_cost) {
        best_cost = c;
        best = p;
      }
    }
  }

  // Damped Gauss-Newton refinement from the seed, projected onto the disk.
  Position p = best;
  double cost = best_cost;
  bool converged = false;
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    // Normal equations J^T W J delta = J^T W r for the 2-D step.
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
    for (const auto& o : obs) {
      const Position g = range_gradient(o, mode, p);
      const double r = forward_range(o.tx, o.rx, p, mode) - o.range;
      a11 += o.weight * g.x * g.x;
      a12 += o.weight * g.x * g.y;
      a22 += o.weight * g.y * g.y;
      b1 += o.weight * g.x * r;
      b2 += o.weight * g.y * r;
    }
    const double det = a11 * a22 - a12 * a12;
    if (std::abs(det) < 1e-18) break;  // degenerate geometry, keep best point
    double dx = (a22 * b1 - a12 * b2) / det;
    double dy = (a11 * b2 - a12 * b1) / det;

    double step = std::hypot(dx, dy);
    if (step < config.step_tolerance) {
      converged = true;
      break;
    }

    // Halve the step while it increases the residual.
    bool accepted = false;
    for (int h = 0; h < config.max_halvings; ++h) {
      Position trial = project_to_area(area, Position{p.x - dx, p.y - dy});
      const double trial_cost = cost_at(obs, mode, trial);
      if (trial_cost <= cost) {
        p = trial;
        cost = trial_cost;
        accepted = true;
        break;
      }
      dx *= config.damping;
      dy *= config.damping;
    }
    if (!accepted) {
      converged = true;  // no descent direction left at this scale
      break;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = p;
    }
  }
  if (cost < best_cost) {
    best_cost = cost;
    best = p;
  }

  TargetEstimate est;
  est.position = best;
  est.residual_rms = std::sqrt(best_cost / total_weight);
  est.confidence = std::exp(-est.residual_rms / area.radius);
  est.converged = converged;
  return est;
}

std::vector<TargetEstimate> privacy_filter(const std::vector<TargetEstimate>& estimates,
                                           const SensingArea& area) {
  std::vector<TargetEstimate> kept;
  kept.reserve(estimates.size());
  for (const auto& e : estimates) {
    if (area.contains(e.position)) {
      kept.push_back(e);
    }
  }
  return kept;
}

SensingResult fuse_rounds(const std::string& request_id,
                          const std::vector<TargetEstimate>& round_estimates,
                          double last_round_time) {
  SensingResult result;
  result.request_id = request_id;
  result.timestamp = last_round_time;
  if (round_estimates.empty()) {
    return result;
  }

  double weight_sum = 0.0;
  double conf_sum = 0.0;
  Position centroid{0.0, 0.0};
  for (const auto& e : round_estimates) {
    weight_sum += e.confidence;
    conf_sum += e.confidence;
    centroid.x += e.confidence * e.position.x;
    centroid.y += e.confidence * e.position.y;
  }
  if (weight_sum > 0.0) {
    centroid.x /= weight_sum;
    centroid.y /= weight_sum;
  } else {
    // All rounds reported zero confidence; fall back to the plain mean.
    centroid = Position{0.0, 0.0};
    for (const auto& e : round_estimates) {
      centroid.x += e.position.x;
      centroid.y += e.position.y;
    }
    centroid.x /= static_cast<double>(round_estimates.size());
    centroid.y /= static_cast<double>(round_estimates.size());
  }

  result.estimates.push_back(PositionEstimate{
      centroid, conf_sum / static_cast<double>(round_estimates.size())});
  return result;
}

}  // namespace bcsim
