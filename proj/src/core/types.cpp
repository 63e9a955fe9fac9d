#include "core/types.hpp"

#include "core/error.hpp"

namespace bcsim {

bool covers(const MeasurementNode& node, const SensingArea& area) {
  // Full containment: the coverage disk must hold the whole area, so any
  // target inside the area is within reach of the node.
  return distance(node.position, area.center) + area.radius <= node.coverage_radius;
}

bool is_multi_node(TrafficClass tc) {
  return tc == TrafficClass::OneTimeMultiNode || tc == TrafficClass::MultiIterationMultiNode;
}

bool is_multi_iteration(TrafficClass tc) {
  return tc == TrafficClass::MultiIterationOneNode || tc == TrafficClass::MultiIterationMultiNode;
}

KpiRecord& KpiRecord::operator+=(const KpiRecord& delta) {
  if (delta.energy_compute < 0 || delta.energy_comm < 0 || delta.latency < 0 ||
      delta.comm_bits < 0 || delta.comm_bit_seconds < 0 || delta.compute_flops < 0) {
    throw SimError(ErrorCode::NegativeDelta, "KPI deltas must be non-negative");
  }
  energy_compute += delta.energy_compute;
  energy_comm += delta.energy_comm;
  latency += delta.latency;
  comm_bits += delta.comm_bits;
  comm_bit_seconds += delta.comm_bit_seconds;
  compute_flops += delta.compute_flops;
  return *this;
}

const char* to_string(NodeKind kind) {
  return kind == NodeKind::BaseStation ? "base_station" : "user_equipment";
}

const char* to_string(SensingMode mode) {
  return mode == SensingMode::Bistatic ? "bistatic" : "monostatic";
}

const char* to_string(TrafficClass tc) {
  switch (tc) {
    case TrafficClass::OneTimeOneNode: return "one_time_one_node";
    case TrafficClass::OneTimeMultiNode: return "one_time_multi_node";
    case TrafficClass::MultiIterationOneNode: return "multi_iteration_one_node";
    case TrafficClass::MultiIterationMultiNode: return "multi_iteration_multi_node";
  }
  return "unknown";
}

const char* to_string(Precision p) {
  switch (p) {
    case Precision::Int8: return "int8";
    case Precision::Fp16: return "fp16";
    case Precision::Fp32: return "fp32";
    case Precision::Fp64: return "fp64";
  }
  return "unknown";
}

const char* to_string(QosClass q) {
  return q == QosClass::LatencySensitive ? "latency_sensitive" : "precision_sensitive";
}

}  // namespace bcsim
