#include "scenario/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/error.hpp"

namespace bcsim {

using nlohmann::json;

const MeasurementNode* Scenario::find_node(const NodeId& id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const CellSpec* Scenario::find_cell(const std::string& id) const {
  for (const auto& c : cells) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

namespace {

// Typed field access that records a schema violation instead of throwing,
// so one pass reports every problem in the document.
struct Fields {
  const json& obj;
  std::string path;
  std::vector<Violation>& out;

  bool has(const char* key) const { return obj.contains(key); }

  double num(const char* key, std::optional<double> def = std::nullopt) const {
    if (!obj.contains(key)) {
      if (def) return *def;
      out.push_back({path + "." + key, "required field is missing"});
      return 0.0;
    }
    if (!obj[key].is_number()) {
      out.push_back({path + "." + key, "must be a number"});
      return def.value_or(0.0);
    }
    return obj[key].get<double>();
  }

  int integer(const char* key, std::optional<int> def = std::nullopt) const {
    if (!obj.contains(key)) {
      if (def) return *def;
      out.push_back({path + "." + key, "required field is missing"});
      return 0;
    }
    if (!obj[key].is_number_integer()) {
      out.push_back({path + "." + key, "must be an integer"});
      return def.value_or(0);
    }
    return obj[key].get<int>();
  }

  // Bit counts may be written in scientific notation (e.g. 8e6); they must
  // still be non-negative.
  uint64_t uinteger(const char* key, std::optional<uint64_t> def = std::nullopt) const {
    if (!obj.contains(key)) {
      if (def) return *def;
      out.push_back({path + "." + key, "required field is missing"});
      return 0;
    }
    const json& v = obj[key];
    if (!v.is_number()) {
      out.push_back({path + "." + key, "must be a non-negative number"});
      return def.value_or(0);
    }
    const double d = v.get<double>();
    if (d < 0) {
      out.push_back({path + "." + key, "must be >= 0"});
      return def.value_or(0);
    }
    return static_cast<uint64_t>(d);
  }

  std::string str(const char* key, std::optional<std::string> def = std::nullopt) const {
    if (!obj.contains(key)) {
      if (def) return *def;
      out.push_back({path + "." + key, "required field is missing"});
      return "";
    }
    if (!obj[key].is_string()) {
      out.push_back({path + "." + key, "must be a string"});
      return def.value_or("");
    }
    return obj[key].get<std::string>();
  }

  bool boolean(const char* key, std::optional<bool> def = std::nullopt) const {
    if (!obj.contains(key)) {
      if (def) return *def;
      out.push_back({path + "." + key, "required field is missing"});
      return false;
    }
    if (!obj[key].is_boolean()) {
      out.push_back({path + "." + key, "must be a boolean"});
      return def.value_or(false);
    }
    return obj[key].get<bool>();
  }
};

Position parse_position(const json& j, const std::string& path,
                        std::vector<Violation>& out) {
  if (!j.is_object()) {
    out.push_back({path, "must be an object with x and y"});
    return {};
  }
  Fields f{j, path, out};
  return Position{f.num("x"), f.num("y")};
}

SensingArea parse_area(const json& j, const std::string& path,
                       std::vector<Violation>& out) {
  SensingArea area;
  if (!j.is_object()) {
    out.push_back({path, "must be an object with center and radius"});
    return area;
  }
  Fields f{j, path, out};
  if (j.contains("center")) {
    area.center = parse_position(j["center"], path + ".center", out);
  } else {
    out.push_back({path + ".center", "required field is missing"});
  }
  area.radius = f.num("radius");
  return area;
}

std::optional<Precision> parse_precision(const std::string& s) {
  if (s == "int8") return Precision::Int8;
  if (s == "fp16") return Precision::Fp16;
  if (s == "fp32") return Precision::Fp32;
  if (s == "fp64") return Precision::Fp64;
  return std::nullopt;
}

std::optional<TrafficClass> parse_traffic_class(const std::string& s) {
  if (s == "one_time_one_node") return TrafficClass::OneTimeOneNode;
  if (s == "one_time_multi_node") return TrafficClass::OneTimeMultiNode;
  if (s == "multi_iteration_one_node") return TrafficClass::MultiIterationOneNode;
  if (s == "multi_iteration_multi_node") return TrafficClass::MultiIterationMultiNode;
  return std::nullopt;
}

const json* array_at(const json& parent, const char* key, const std::string& path,
                     std::vector<Violation>& out) {
  if (!parent.contains(key)) return nullptr;
  if (!parent[key].is_array()) {
    out.push_back({path + "." + key, "must be an array"});
    return nullptr;
  }
  return &parent[key];
}

ChannelSpec parse_channel(const json& j, const std::string& path,
                          std::vector<Violation>& out, ChannelSpec def) {
  if (!j.is_object()) {
    out.push_back({path, "must be an object"});
    return def;
  }
  Fields f{j, path, out};
  return ChannelSpec{f.num("fixed_latency", def.fixed_latency),
                     f.num("bandwidth", def.bandwidth)};
}

void parse_config(const json& j, SimConfig& cfg, const std::string& path,
                  std::vector<Violation>& out) {
  if (!j.is_object()) {
    out.push_back({path, "must be an object"});
    return;
  }
  Fields f{j, path, out};
  cfg.tick = f.num("tick", cfg.tick);
  cfg.min_sensing_share = f.num("min_sensing_share", cfg.min_sensing_share);
  cfg.default_policy = f.str("default_policy", cfg.default_policy);
  cfg.multi_node_fanout = f.integer("multi_node_fanout", cfg.multi_node_fanout);
  cfg.multi_iteration_count =
      f.integer("multi_iteration_count", cfg.multi_iteration_count);
  cfg.control_message_bits = f.num("control_message_bits", cfg.control_message_bits);
  cfg.measurement_report_bits =
      f.num("measurement_report_bits", cfg.measurement_report_bits);
  cfg.result_message_bits = f.num("result_message_bits", cfg.result_message_bits);
  cfg.sensing_energy_per_bit =
      f.num("sensing_energy_per_bit", cfg.sensing_energy_per_bit);
  if (j.contains("localizer")) {
    const json& loc = j["localizer"];
    if (!loc.is_object()) {
      out.push_back({path + ".localizer", "must be an object"});
    } else {
      Fields lf{loc, path + ".localizer", out};
      cfg.localizer.grid_resolution =
          lf.integer("grid_resolution", cfg.localizer.grid_resolution);
      cfg.localizer.max_iterations =
          lf.integer("max_iterations", cfg.localizer.max_iterations);
      cfg.localizer.step_tolerance =
          lf.num("step_tolerance", cfg.localizer.step_tolerance);
      cfg.localizer.damping = lf.num("damping", cfg.localizer.damping);
    }
  }
}

}  // namespace

ParsedScenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SimError(ErrorCode::ParseFailure, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw SimError(ErrorCode::ParseFailure, "scenario document must be a JSON object");
  }

  ParsedScenario parsed;
  Scenario& scn = parsed.scenario;
  auto& out = parsed.violations;
  Fields root{doc, "$", out};

  scn.seed = root.uinteger("seed", uint64_t{0});
  scn.duration = root.num("duration");
  if (doc.contains("config")) parse_config(doc["config"], scn.config, "$.config", out);
  if (doc.contains("channels")) {
    const json& ch = doc["channels"];
    if (!ch.is_object()) {
      out.push_back({"$.channels", "must be an object"});
    } else {
      if (ch.contains("control")) {
        scn.control_channel =
            parse_channel(ch["control"], "$.channels.control", out, scn.control_channel);
      }
      if (ch.contains("data")) {
        scn.data_channel =
            parse_channel(ch["data"], "$.channels.data", out, scn.data_channel);
      }
    }
  }

  if (const json* cells = array_at(doc, "cells", "$", out)) {
    for (size_t i = 0; i < cells->size(); ++i) {
      const std::string path = "$.cells[" + std::to_string(i) + "]";
      if (!(*cells)[i].is_object()) {
        out.push_back({path, "must be an object"});
        continue;
      }
      Fields f{(*cells)[i], path, out};
      CellSpec cell;
      cell.id = f.str("id");
      cell.capacity = f.num("capacity", 1.0);
      cell.w_comm = f.num("w_comm", 1.0);
      cell.w_sens = f.num("w_sens", 1.0);
      cell.comm_demand = f.num("comm_demand", 0.0);
      cell.sensing_demand = f.num("sensing_demand", 0.0);
      scn.cells.push_back(std::move(cell));
    }
  }

  if (const json* nodes = array_at(doc, "nodes", "$", out)) {
    for (size_t i = 0; i < nodes->size(); ++i) {
      const std::string path = "$.nodes[" + std::to_string(i) + "]";
      if (!(*nodes)[i].is_object()) {
        out.push_back({path, "must be an object"});
        continue;
      }
      const json& jn = (*nodes)[i];
      Fields f{jn, path, out};
      MeasurementNode node;
      node.id = f.str("id");
      const std::string kind = f.str("kind", std::string("base_station"));
      if (kind == "base_station") {
        node.kind = NodeKind::BaseStation;
      } else if (kind == "user_equipment") {
        node.kind = NodeKind::UserEquipment;
      } else {
        out.push_back({path + ".kind", "must be base_station or user_equipment"});
      }
      if (jn.contains("position")) {
        node.position = parse_position(jn["position"], path + ".position", out);
      } else {
        out.push_back({path + ".position", "required field is missing"});
      }
      node.coverage_radius = f.num("coverage_radius");
      node.quality_indicator = f.num("quality", 1.0);
      // Base stations always consent; UE consent defaults to false so a
      // scenario must opt a user in explicitly.
      node.consent = node.kind == NodeKind::BaseStation
                         ? f.boolean("consent", true)
                         : f.boolean("consent", false);
      node.authorized = f.boolean("authorized", true);
      node.uplink_bw = f.num("uplink_bw");
      node.downlink_bw = f.num("downlink_bw");
      node.cell_id = f.str("cell");
      scn.nodes.push_back(std::move(node));
    }
  }

  if (const json* consumers = array_at(doc, "consumers", "$", out)) {
    for (size_t i = 0; i < consumers->size(); ++i) {
      if (!(*consumers)[i].is_string()) {
        out.push_back({"$.consumers[" + std::to_string(i) + "]", "must be a string"});
        continue;
      }
      scn.consumers.push_back((*consumers)[i].get<std::string>());
    }
  }

  if (doc.contains("sensing")) {
    const json& js = doc["sensing"];
    if (!js.is_object()) {
      out.push_back({"$.sensing", "must be an object"});
    } else {
      Fields f{js, "$.sensing", out};
      scn.sensing_noise_std = f.num("noise_std", 0.0);
      if (const json* reqs = array_at(js, "requests", "$.sensing", out)) {
        for (size_t i = 0; i < reqs->size(); ++i) {
          const std::string path = "$.sensing.requests[" + std::to_string(i) + "]";
          if (!(*reqs)[i].is_object()) {
            out.push_back({path, "must be an object"});
            continue;
          }
          const json& jr = (*reqs)[i];
          Fields rf{jr, path, out};
          SensingRequestSpec spec;
          spec.request.request_id = rf.str("id");
          spec.request.consumer_id = rf.str("consumer");
          if (jr.contains("area")) {
            spec.request.area = parse_area(jr["area"], path + ".area", out);
          } else {
            out.push_back({path + ".area", "required field is missing"});
          }
          const std::string mode = rf.str("mode", std::string("bistatic"));
          if (mode == "bistatic") {
            spec.request.mode = SensingMode::Bistatic;
          } else if (mode == "monostatic") {
            spec.request.mode = SensingMode::Monostatic;
          } else {
            out.push_back({path + ".mode", "must be bistatic or monostatic"});
          }
          spec.request.refresh_rate = rf.num("refresh_rate");
          spec.request.duration = rf.num("duration");
          spec.request.min_quality = rf.num("min_quality", 0.0);
          spec.start = rf.num("start", 0.0);
          scn.sensing_requests.push_back(std::move(spec));
        }
      }
      if (const json* targets = array_at(js, "targets", "$.sensing", out)) {
        for (size_t i = 0; i < targets->size(); ++i) {
          const std::string path = "$.sensing.targets[" + std::to_string(i) + "]";
          if (!(*targets)[i].is_object()) {
            out.push_back({path, "must be an object"});
            continue;
          }
          const json& jt = (*targets)[i];
          Fields tf{jt, path, out};
          const std::string req = tf.str("request");
          Position pos;
          if (jt.contains("position")) {
            pos = parse_position(jt["position"], path + ".position", out);
          } else {
            out.push_back({path + ".position", "required field is missing"});
          }
          if (scn.targets.count(req)) {
            out.push_back({path + ".request", "duplicate target for request " + req});
          } else {
            scn.targets[req] = pos;
          }
        }
      }
    }
  }

  if (doc.contains("compute")) {
    const json& jc = doc["compute"];
    if (!jc.is_object()) {
      out.push_back({"$.compute", "must be an object"});
    } else {
      if (const json* caps = array_at(jc, "capabilities", "$.compute", out)) {
        for (size_t i = 0; i < caps->size(); ++i) {
          const std::string path = "$.compute.capabilities[" + std::to_string(i) + "]";
          if (!(*caps)[i].is_object()) {
            out.push_back({path, "must be an object"});
            continue;
          }
          const json& jcap = (*caps)[i];
          Fields cf{jcap, path, out};
          CapabilitySpec spec;
          spec.capability.node_id = cf.str("node");
          spec.capability.flops_per_second = cf.num("flops_per_second");
          spec.capability.memory_bytes = cf.num("memory_bytes");
          spec.capability.link_bw_up = cf.num("link_bw_up");
          spec.capability.link_bw_down = cf.num("link_bw_down");
          spec.capability.energy_per_flop = cf.num("energy_per_flop", 0.0);
          spec.capability.energy_per_bit = cf.num("energy_per_bit", 0.0);
          spec.capability.current_load = cf.num("current_load", 0.0);
          spec.advertise_time = cf.num("advertise_time", 0.0);
          if (const json* precisions =
                  array_at(jcap, "supported_precisions", path, out)) {
            for (size_t k = 0; k < precisions->size(); ++k) {
              const std::string ppath =
                  path + ".supported_precisions[" + std::to_string(k) + "]";
              if (!(*precisions)[k].is_string()) {
                out.push_back({ppath, "must be a string"});
                continue;
              }
              if (auto p = parse_precision((*precisions)[k].get<std::string>())) {
                spec.capability.supported_precisions.insert(*p);
              } else {
                out.push_back({ppath, "must be one of int8, fp16, fp32, fp64"});
              }
            }
          } else {
            out.push_back({path + ".supported_precisions", "required field is missing"});
          }
          scn.capabilities.push_back(std::move(spec));
        }
      }
      if (const json* wls = array_at(jc, "workloads", "$.compute", out)) {
        for (size_t i = 0; i < wls->size(); ++i) {
          const std::string path = "$.compute.workloads[" + std::to_string(i) + "]";
          if (!(*wls)[i].is_object()) {
            out.push_back({path, "must be an object"});
            continue;
          }
          const json& jw = (*wls)[i];
          Fields wf{jw, path, out};
          WorkloadSpec spec;
          spec.workload.workload_id = wf.str("id");
          spec.offloader_id = wf.str("offloader");
          spec.arrival = wf.num("arrival", 0.0);
          const std::string tc = wf.str("traffic_class", std::string("one_time_one_node"));
          if (auto parsed_tc = parse_traffic_class(tc)) {
            spec.workload.traffic_class = *parsed_tc;
          } else {
            out.push_back({path + ".traffic_class", "unknown traffic class " + tc});
          }
          spec.workload.flops = wf.num("flops");
          spec.workload.memory_bytes = wf.num("memory_bytes");
          spec.workload.payload_bits = wf.uinteger("payload_bits");
          spec.workload.result_bits = wf.uinteger("result_bits");
          const std::string prec = wf.str("precision", std::string("fp32"));
          if (auto p = parse_precision(prec)) {
            spec.workload.precision = *p;
          } else {
            out.push_back({path + ".precision", "must be one of int8, fp16, fp32, fp64"});
          }
          const std::string qos = wf.str("qos_class", std::string("precision_sensitive"));
          if (qos == "latency_sensitive") {
            spec.workload.qos_class = QosClass::LatencySensitive;
          } else if (qos == "precision_sensitive") {
            spec.workload.qos_class = QosClass::PrecisionSensitive;
          } else {
            out.push_back(
                {path + ".qos_class", "must be latency_sensitive or precision_sensitive"});
          }
          spec.workload.deadline = wf.num("deadline", 0.0);
          spec.iterations = wf.integer(
              "iterations", is_multi_iteration(spec.workload.traffic_class)
                                ? scn.config.multi_iteration_count
                                : 1);
          spec.fanout = wf.integer(
              "fanout", is_multi_node(spec.workload.traffic_class)
                            ? scn.config.multi_node_fanout
                            : 1);
          if (jw.contains("route")) {
            if (!jw["route"].is_object()) {
              out.push_back({path + ".route", "must be an object"});
            } else {
              Fields rf{jw["route"], path + ".route", out};
              spec.route = RouteSpec{rf.integer("hops_each_way"),
                                     rf.num("per_hop_latency")};
            }
          }
          scn.workloads.push_back(std::move(spec));
        }
      }
    }
  }

  if (const json* faults = array_at(doc, "faults", "$", out)) {
    for (size_t i = 0; i < faults->size(); ++i) {
      const std::string path = "$.faults[" + std::to_string(i) + "]";
      if (!(*faults)[i].is_object()) {
        out.push_back({path, "must be an object"});
        continue;
      }
      Fields f{(*faults)[i], path, out};
      FaultSpec fault;
      fault.time = f.num("time");
      fault.node_id = f.str("node");
      fault.kind = f.str("kind", std::string("node_failure"));
      scn.faults.push_back(std::move(fault));
    }
  }

  return parsed;
}

ParsedScenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw SimError(ErrorCode::IoFailure, "cannot read scenario file: " + path);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

namespace {

bool is_reserved_id(const std::string& id) {
  return id == kSemfId || id == kSpfId || id == kControllerId;
}

void check_positive(double v, const std::string& path, const char* what,
                    std::vector<Violation>& out) {
  if (!(v > 0.0)) {
    out.push_back({path, std::string(what) + " must be > 0"});
  }
}

void check_unit_interval(double v, const std::string& path, const char* what,
                         std::vector<Violation>& out) {
  if (v < 0.0 || v > 1.0) {
    out.push_back({path, std::string(what) + " must be within [0,1]"});
  }
}

}  // namespace

std::vector<Violation> validate(const Scenario& scn) {
  std::vector<Violation> out;

  check_positive(scn.duration, "$.duration", "duration", out);
  check_positive(scn.config.tick, "$.config.tick", "tick", out);
  check_unit_interval(scn.config.min_sensing_share, "$.config.min_sensing_share",
                      "min_sensing_share", out);
  if (!parse_policy(scn.config.default_policy)) {
    out.push_back({"$.config.default_policy",
                   "must be min_latency or min_energy"});
  }
  if (scn.config.multi_node_fanout < 1) {
    out.push_back({"$.config.multi_node_fanout", "must be >= 1"});
  }
  if (scn.config.multi_iteration_count < 1) {
    out.push_back({"$.config.multi_iteration_count", "must be >= 1"});
  }
  check_positive(scn.config.control_message_bits, "$.config.control_message_bits",
                 "control_message_bits", out);
  check_positive(scn.config.measurement_report_bits,
                 "$.config.measurement_report_bits", "measurement_report_bits", out);
  check_positive(scn.config.result_message_bits, "$.config.result_message_bits",
                 "result_message_bits", out);
  if (scn.config.sensing_energy_per_bit < 0) {
    out.push_back({"$.config.sensing_energy_per_bit", "must be >= 0"});
  }
  if (scn.config.localizer.grid_resolution < 2) {
    out.push_back({"$.config.localizer.grid_resolution", "must be >= 2"});
  }
  if (scn.config.localizer.max_iterations < 1) {
    out.push_back({"$.config.localizer.max_iterations", "must be >= 1"});
  }
  check_positive(scn.config.localizer.step_tolerance,
                 "$.config.localizer.step_tolerance", "step_tolerance", out);
  if (scn.config.localizer.damping <= 0.0 || scn.config.localizer.damping >= 1.0) {
    out.push_back({"$.config.localizer.damping", "must be within (0,1)"});
  }

  check_positive(scn.control_channel.bandwidth, "$.channels.control.bandwidth",
                 "bandwidth", out);
  check_positive(scn.data_channel.bandwidth, "$.channels.data.bandwidth",
                 "bandwidth", out);
  if (scn.control_channel.fixed_latency < 0) {
    out.push_back({"$.channels.control.fixed_latency", "must be >= 0"});
  }
  if (scn.data_channel.fixed_latency < 0) {
    out.push_back({"$.channels.data.fixed_latency", "must be >= 0"});
  }

  std::set<std::string> cell_ids;
  for (size_t i = 0; i < scn.cells.size(); ++i) {
    const auto& c = scn.cells[i];
    const std::string path = "$.cells[" + std::to_string(i) + "]";
    if (c.id.empty()) out.push_back({path + ".id", "must be non-empty"});
    if (!cell_ids.insert(c.id).second) {
      out.push_back({path + ".id", "duplicate cell id " + c.id});
    }
    if (c.capacity <= 0.0 || c.capacity > 1.0) {
      out.push_back({path + ".capacity", "must be within (0,1]"});
    }
    check_positive(c.w_comm, path + ".w_comm", "w_comm", out);
    check_positive(c.w_sens, path + ".w_sens", "w_sens", out);
    if (c.comm_demand < 0) out.push_back({path + ".comm_demand", "must be >= 0"});
    if (c.sensing_demand < 0) out.push_back({path + ".sensing_demand", "must be >= 0"});
  }

  std::set<std::string> node_ids;
  for (size_t i = 0; i < scn.nodes.size(); ++i) {
    const auto& n = scn.nodes[i];
    const std::string path = "$.nodes[" + std::to_string(i) + "]";
    if (n.id.empty()) out.push_back({path + ".id", "must be non-empty"});
    if (is_reserved_id(n.id)) {
      out.push_back({path + ".id", "id " + n.id + " is reserved"});
    }
    if (!node_ids.insert(n.id).second) {
      out.push_back({path + ".id", "duplicate node id " + n.id});
    }
    check_positive(n.coverage_radius, path + ".coverage_radius", "coverage_radius", out);
    check_unit_interval(n.quality_indicator, path + ".quality", "quality", out);
    if (n.kind == NodeKind::BaseStation && !n.consent) {
      out.push_back({path + ".consent", "base stations always consent"});
    }
    check_positive(n.uplink_bw, path + ".uplink_bw", "uplink_bw", out);
    check_positive(n.downlink_bw, path + ".downlink_bw", "downlink_bw", out);
    if (n.cell_id.empty()) {
      out.push_back({path + ".cell", "must reference a cell"});
    } else if (!scn.find_cell(n.cell_id)) {
      out.push_back({path + ".cell", "unknown cell id " + n.cell_id});
    }
  }

  std::set<std::string> early_capability_ids;
  for (const auto& c : scn.capabilities) {
    early_capability_ids.insert(c.capability.node_id);
  }
  std::set<std::string> consumer_ids;
  for (size_t i = 0; i < scn.consumers.size(); ++i) {
    const std::string path = "$.consumers[" + std::to_string(i) + "]";
    const auto& c = scn.consumers[i];
    if (c.empty()) out.push_back({path, "must be non-empty"});
    if (is_reserved_id(c) || node_ids.count(c) || early_capability_ids.count(c)) {
      out.push_back({path, "consumer id " + c + " collides with another endpoint"});
    }
    if (!consumer_ids.insert(c).second) {
      out.push_back({path, "duplicate consumer id " + c});
    }
  }

  if (scn.sensing_noise_std < 0) {
    out.push_back({"$.sensing.noise_std", "must be >= 0"});
  }
  std::set<std::string> request_ids;
  for (size_t i = 0; i < scn.sensing_requests.size(); ++i) {
    const auto& r = scn.sensing_requests[i];
    const std::string path = "$.sensing.requests[" + std::to_string(i) + "]";
    if (r.request.request_id.empty()) {
      out.push_back({path + ".id", "must be non-empty"});
    }
    if (!request_ids.insert(r.request.request_id).second) {
      out.push_back({path + ".id", "duplicate request id " + r.request.request_id});
    }
    check_positive(r.request.area.radius, path + ".area.radius", "radius", out);
    check_positive(r.request.refresh_rate, path + ".refresh_rate", "refresh_rate", out);
    check_positive(r.request.duration, path + ".duration", "duration", out);
    check_unit_interval(r.request.min_quality, path + ".min_quality", "min_quality", out);
    if (r.start < 0) out.push_back({path + ".start", "must be >= 0"});
    if (!scn.targets.count(r.request.request_id)) {
      out.push_back({path + ".id",
                     "request " + r.request.request_id + " has no ground-truth target"});
    }
  }
  for (const auto& [req_id, pos] : scn.targets) {
    if (!request_ids.count(req_id)) {
      out.push_back({"$.sensing.targets", "target references unknown request " + req_id});
    }
  }

  std::set<std::string> capability_ids;
  for (size_t i = 0; i < scn.capabilities.size(); ++i) {
    const auto& c = scn.capabilities[i];
    const std::string path = "$.compute.capabilities[" + std::to_string(i) + "]";
    if (c.capability.node_id.empty()) {
      out.push_back({path + ".node", "must be non-empty"});
    }
    if (is_reserved_id(c.capability.node_id)) {
      out.push_back({path + ".node", "id " + c.capability.node_id + " is reserved"});
    }
    if (!capability_ids.insert(c.capability.node_id).second) {
      out.push_back({path + ".node", "duplicate capability for " + c.capability.node_id});
    }
    check_positive(c.capability.flops_per_second, path + ".flops_per_second",
                   "flops_per_second", out);
    check_positive(c.capability.memory_bytes, path + ".memory_bytes", "memory_bytes",
                   out);
    check_positive(c.capability.link_bw_up, path + ".link_bw_up", "link_bw_up", out);
    check_positive(c.capability.link_bw_down, path + ".link_bw_down", "link_bw_down",
                   out);
    if (c.capability.energy_per_flop < 0) {
      out.push_back({path + ".energy_per_flop", "must be >= 0"});
    }
    if (c.capability.energy_per_bit < 0) {
      out.push_back({path + ".energy_per_bit", "must be >= 0"});
    }
    check_unit_interval(c.capability.current_load, path + ".current_load",
                        "current_load", out);
    if (c.capability.supported_precisions.empty()) {
      out.push_back({path + ".supported_precisions", "must be non-empty"});
    }
    if (c.advertise_time < 0) {
      out.push_back({path + ".advertise_time", "must be >= 0"});
    }
  }

  std::set<std::string> workload_ids;
  for (size_t i = 0; i < scn.workloads.size(); ++i) {
    const auto& w = scn.workloads[i];
    const std::string path = "$.compute.workloads[" + std::to_string(i) + "]";
    if (w.workload.workload_id.empty()) {
      out.push_back({path + ".id", "must be non-empty"});
    }
    if (!workload_ids.insert(w.workload.workload_id).second) {
      out.push_back({path + ".id", "duplicate workload id " + w.workload.workload_id});
    }
    if (!node_ids.count(w.offloader_id) && !capability_ids.count(w.offloader_id)) {
      out.push_back({path + ".offloader", "unknown node id " + w.offloader_id});
    }
    if (w.arrival < 0) out.push_back({path + ".arrival", "must be >= 0"});
    check_positive(w.workload.flops, path + ".flops", "flops", out);
    check_positive(w.workload.memory_bytes, path + ".memory_bytes", "memory_bytes", out);
    if (w.workload.payload_bits == 0) {
      out.push_back({path + ".payload_bits", "must be > 0"});
    }
    if (w.workload.result_bits == 0) {
      out.push_back({path + ".result_bits", "must be > 0"});
    }
    if (w.workload.qos_class == QosClass::LatencySensitive) {
      check_positive(w.workload.deadline, path + ".deadline", "deadline", out);
    } else if (w.workload.deadline != 0.0) {
      out.push_back(
          {path + ".deadline", "only latency-sensitive workloads take a deadline"});
    }
    if (w.iterations < 1) {
      out.push_back({path + ".iterations", "must be >= 1"});
    }
    if (!is_multi_iteration(w.workload.traffic_class) && w.iterations > 1) {
      out.push_back({path + ".iterations",
                     "one-time traffic classes run exactly one iteration"});
    }
    if (is_multi_iteration(w.workload.traffic_class) && w.iterations < 2) {
      out.push_back({path + ".iterations",
                     "multi-iteration traffic classes need >= 2 iterations"});
    }
    if (w.fanout < 1) {
      out.push_back({path + ".fanout", "must be >= 1"});
    }
    if (!is_multi_node(w.workload.traffic_class) && w.fanout > 1) {
      out.push_back({path + ".fanout", "one-node traffic classes use exactly one node"});
    }
    if (is_multi_node(w.workload.traffic_class) && w.fanout < 2) {
      out.push_back({path + ".fanout", "multi-node traffic classes need fanout >= 2"});
    }
    if (w.route) {
      if (w.route->hops_each_way < 1) {
        out.push_back({path + ".route.hops_each_way", "must be >= 1"});
      }
      if (w.route->per_hop_latency < 0) {
        out.push_back({path + ".route.per_hop_latency", "must be >= 0"});
      }
    }
  }

  for (size_t i = 0; i < scn.faults.size(); ++i) {
    const auto& f = scn.faults[i];
    const std::string path = "$.faults[" + std::to_string(i) + "]";
    if (f.time < 0) out.push_back({path + ".time", "must be >= 0"});
    if (f.kind != "node_failure") {
      out.push_back({path + ".kind", "unknown fault kind " + f.kind});
    }
    if (!capability_ids.count(f.node_id)) {
      out.push_back({path + ".node", "unknown compute node id " + f.node_id});
    }
  }

  return out;
}

}  // namespace bcsim
