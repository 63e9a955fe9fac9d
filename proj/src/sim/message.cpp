#include "sim/message.hpp"

namespace bcsim {

const char* to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::SensingRequestMsg: return "sensing_request";
    case MessageKind::NodeConfig: return "node_config";
    case MessageKind::SpfConfig: return "spf_config";
    case MessageKind::MeasurementReport: return "measurement_report";
    case MessageKind::SensingResultMsg: return "sensing_result";
    case MessageKind::Advertise: return "advertise";
    case MessageKind::OffloadRequest: return "offload_request";
    case MessageKind::OffloadGrant: return "offload_grant";
    case MessageKind::TaskTransfer: return "task_transfer";
    case MessageKind::ResultTransfer: return "result_transfer";
  }
  return "unknown";
}

const char* to_string(Plane plane) {
  return plane == Plane::Control ? "ctrl" : "data";
}

}  // namespace bcsim
