#pragma once

#include <cstdint>
#include <string>

#include "core/types.hpp"

namespace bcsim {

enum class Plane { Control, Data };

// Wire message kinds; payload field layouts are documented in
// docs/protocol.md and sizes in bits drive channel pricing.
enum class MessageKind {
  SensingRequestMsg,   // consumer -> SeMF          (control)
  NodeConfig,          // SeMF -> measurement node  (control)
  SpfConfig,           // SeMF -> SPF               (control)
  MeasurementReport,   // rx node -> SPF            (data)
  SensingResultMsg,    // SPF -> consumer           (control)
  Advertise,           // compute node -> controller (control)
  OffloadRequest,      // offloader -> controller   (control)
  OffloadGrant,        // controller -> offloader   (control)
  TaskTransfer,        // offloader -> compute node (data)
  ResultTransfer,      // compute node -> offloader (data)
};

const char* to_string(MessageKind kind);
const char* to_string(Plane plane);

struct Message {
  NodeId src_id;
  NodeId dst_id;
  Plane plane = Plane::Control;
  double size_bits = 0.0;
  MessageKind kind = MessageKind::SensingRequestMsg;
  // Session / workload the transfer belongs to; empty for unattributed
  // traffic such as capability advertisements.
  std::string subject_id;
  // Protocol-specific discriminators; the full payload structures live with
  // the owning subsystem and are keyed by these fields.
  std::string ref_id;   // request_id or workload_id
  std::string aux_id;   // pair tx id on measurement reports
  int round = -1;       // measurement round, when applicable
  int attempt = 0;      // offload attempt, when applicable
  int branch = -1;      // multi-node branch, when applicable
};

}  // namespace bcsim
