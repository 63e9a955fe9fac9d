#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace bcsim {

using NodeId = std::string;

enum class NodeKind { BaseStation, UserEquipment };
enum class SensingMode { Bistatic, Monostatic };

/// A sensing-capable RAN entity or UE. Base stations always consent;
/// UE participation additionally requires the owner's consent flag.
struct MeasurementNode {
  NodeId id;
  NodeKind kind = NodeKind::BaseStation;
  Position position;
  double coverage_radius = 0.0;    // meters, > 0
  double quality_indicator = 1.0;  // participation quality, in [0,1]
  bool consent = true;
  bool authorized = true;
  double uplink_bw = 0.0;    // bits/s, > 0
  double downlink_bw = 0.0;  // bits/s, > 0
  std::string cell_id;

  bool is_ue() const { return kind == NodeKind::UserEquipment; }
};

/// Whether the node's coverage disk contains the whole requested area.
bool covers(const MeasurementNode& node, const SensingArea& area);

struct SensingRequest {
  std::string request_id;
  std::string consumer_id;
  SensingArea area;
  SensingMode mode = SensingMode::Bistatic;
  double refresh_rate = 0.0;  // Hz, > 0
  double duration = 0.0;      // seconds, > 0
  double min_quality = 0.0;   // in [0,1]
};

/// One range observation by a (tx, rx) pair. In bistatic mode the range is
/// the Tx->target->Rx path length; in monostatic mode tx_id == rx_id and the
/// range is the round trip to the target.
struct SensingMeasurement {
  NodeId tx_id;
  NodeId rx_id;
  double range = 0.0;    // meters
  double quality = 1.0;  // fusion weight, in [0,1]
  double timestamp = 0.0;
};

struct PositionEstimate {
  Position position;
  double confidence = 0.0;  // in [0,1]
};

struct SensingResult {
  std::string request_id;
  std::vector<PositionEstimate> estimates;
  double timestamp = 0.0;
};

enum class TrafficClass {
  OneTimeOneNode,
  OneTimeMultiNode,
  MultiIterationOneNode,
  MultiIterationMultiNode,
};

enum class Precision { Int8, Fp16, Fp32, Fp64 };
enum class QosClass { LatencySensitive, PrecisionSensitive };

bool is_multi_node(TrafficClass tc);
bool is_multi_iteration(TrafficClass tc);

struct ComputeWorkload {
  std::string workload_id;
  TrafficClass traffic_class = TrafficClass::OneTimeOneNode;
  double flops = 0.0;          // > 0
  double memory_bytes = 0.0;   // > 0
  uint64_t payload_bits = 0;   // > 0
  uint64_t result_bits = 0;    // > 0
  Precision precision = Precision::Fp32;
  QosClass qos_class = QosClass::PrecisionSensitive;
  double deadline = 0.0;       // seconds; meaningful iff latency sensitive
};

struct ComputeCapability {
  NodeId node_id;
  double flops_per_second = 0.0;  // > 0
  double memory_bytes = 0.0;      // > 0
  std::set<Precision> supported_precisions;
  double link_bw_up = 0.0;    // bits/s, > 0
  double link_bw_down = 0.0;  // bits/s, > 0
  double energy_per_flop = 0.0;  // J/flop, >= 0
  double energy_per_bit = 0.0;   // J/bit, >= 0
  double current_load = 0.0;     // in [0,1]
};

/// Additive per-operation accounting. Energy is kept split between the
/// compute and communication components so the decomposition stays exact.
struct KpiRecord {
  double energy_compute = 0.0;   // joules
  double energy_comm = 0.0;      // joules
  double latency = 0.0;          // seconds
  double comm_bits = 0.0;        // bits transferred
  double comm_bit_seconds = 0.0; // size_bits x transfer duration, summed
  double compute_flops = 0.0;    // floating-point operations executed

  double energy() const { return energy_compute + energy_comm; }

  KpiRecord& operator+=(const KpiRecord& delta);
};

const char* to_string(NodeKind kind);
const char* to_string(SensingMode mode);
const char* to_string(TrafficClass tc);
const char* to_string(Precision p);
const char* to_string(QosClass q);

}  // namespace bcsim
