#include "scenario/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "core/error.hpp"
#include "offload/session.hpp"
#include "sched/joint_scheduler.hpp"
#include "sensing/orchestration.hpp"
#include "sensing/processing.hpp"
#include "sim/kernel.hpp"
#include "sim/rng.hpp"

namespace bcsim {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

/// Per-request sensing bookkeeping shared between the SeMF (control) and
/// SPF (processing) sides of the run.
struct SensingRec {
  SensingRequestSpec spec;
  SensingSession session;
  Rng noise_rng{0};
  double request_sent_at = 0.0;
  int rounds_requested = 0;
  int rounds_concluded = 0;  // executed or skipped
  int rounds_delivered = 0;  // localized
  int starved_rounds_seen = 0;
  bool spf_configured = false;
  bool measuring_noted = false;
  bool finalized = false;
  std::map<int, std::vector<SensingMeasurement>> round_reports;
  std::vector<TargetEstimate> kept_estimates;
  double last_round_time = 0.0;
  std::string reject_reason;
};

struct BranchCompute {
  double started_at = 0.0;
  double duration = 0.0;
  double flops = 0.0;
  bool active = false;
};

struct OffloadRec {
  WorkloadSpec spec;
  OffloadSession session;
  std::vector<NodeId> chosen;
  std::vector<NodeId> excluded;
  int attempt = 1;
  uint64_t generation = 0;  // bumped on failure; stale events check it
  int iteration = 1;
  int branches_pending = 0;
  std::map<NodeId, BranchCompute> computing;
  // Single-branch sessions accumulate exact leg durations; multi-branch
  // sessions measure wall time between first payload bit and last result.
  double latency_acc = 0.0;
  double attempt_started_at = 0.0;
  bool wall_clock_started = false;
  std::string fail_reason;
};

class SimulationRun {
 public:
  SimulationRun(const Scenario& scn, uint64_t seed, OffloadPolicy policy, double tick)
      : scn_(scn),
        seed_(seed),
        policy_(policy),
        tick_(tick),
        kernel_(trace_),
        master_rng_(seed) {}

  RunOutputs execute() {
    setup();
    kernel_.run_until(scn_.duration);
    return collect();
  }

 private:
  // --- wiring -------------------------------------------------------------

  void setup() {
    cp_channel_ = Channel{Plane::Control, scn_.control_channel.fixed_latency,
                          scn_.control_channel.bandwidth};
    for (const auto& node : scn_.nodes) {
      dp_uplink_[node.id] = Channel{Plane::Data, scn_.data_channel.fixed_latency,
                                    node.uplink_bw};
    }

    for (const auto& cell : scn_.cells) {
      cells_.push_back(CellResourceState{cell.id, cell.capacity, cell.comm_demand,
                                         cell.sensing_demand, cell.w_comm, cell.w_sens});
    }

    register_endpoint(kSemfId);
    register_endpoint(kSpfId);
    register_endpoint(kControllerId);
    for (const auto& node : scn_.nodes) register_endpoint(node.id);
    for (const auto& consumer : scn_.consumers) register_endpoint(consumer);
    for (const auto& cap : scn_.capabilities) register_endpoint(cap.capability.node_id);

    // Allocation ticks from t=0 for the whole run.
    schedule_tick(0.0);

    for (const auto& cap : scn_.capabilities) {
      kernel_.schedule(cap.advertise_time, "", [this, cap] {
        Message msg;
        msg.src_id = cap.capability.node_id;
        msg.dst_id = kControllerId;
        msg.plane = Plane::Control;
        msg.kind = MessageKind::Advertise;
        msg.size_bits = scn_.config.control_message_bits;
        send_control(msg, "");
      });
    }

    for (const auto& spec : scn_.sensing_requests) {
      auto& rec = sensing_[spec.request.request_id];
      rec.spec = spec;
      rec.session.request = spec.request;
      rec.noise_rng =
          master_rng_.substream("sensing.noise." + spec.request.request_id);
      kernel_.schedule(spec.start, "", [this, id = spec.request.request_id] {
        auto& r = sensing_.at(id);
        r.request_sent_at = kernel_.now();
        Message msg;
        msg.src_id = r.spec.request.consumer_id;
        msg.dst_id = kSemfId;
        msg.plane = Plane::Control;
        msg.kind = MessageKind::SensingRequestMsg;
        msg.size_bits = scn_.config.control_message_bits;
        msg.subject_id = id;
        msg.ref_id = id;
        send_control(msg, id);
      });
    }

    for (const auto& w : scn_.workloads) {
      auto& rec = offloads_[w.workload.workload_id];
      rec.spec = w;
      kernel_.schedule(w.arrival, "", [this, id = w.workload.workload_id] {
        start_offload(id);
      });
    }

    for (const auto& fault : scn_.faults) {
      kernel_.schedule(fault.time, "fault", [this, fault] { on_fault(fault); },
                       fault.node_id, fault.kind);
    }
  }

  void register_endpoint(const NodeId& id) {
    if (kernel_.has_endpoint(id)) return;  // node doubling as compute node
    kernel_.register_endpoint(id, [this, id](const Message& msg) {
      on_message(id, msg);
    });
  }

  // --- transport helpers ---------------------------------------------------

  void record_comm(const std::string& subject, double bits, double duration,
                   double energy_per_bit) {
    if (subject.empty()) return;
    KpiRecord delta;
    delta.energy_comm = bits * energy_per_bit;
    delta.comm_bits = bits;
    delta.comm_bit_seconds = bits * duration;
    kpi_.record(subject, delta);
  }

  Kernel::SendInfo send_control(const Message& msg, const std::string& subject) {
    auto info = kernel_.send(msg, cp_channel_);
    record_comm(subject, msg.size_bits, info.transfer_duration, 0.0);
    return info;
  }

  /// Data-plane transfer from a measurement node, priced under the cell's
  /// granted communication share. Zero share stalls the message until an
  /// allocation tick grants bandwidth again.
  void send_sensing_data(const Message& msg, const std::string& cell_id) {
    const double share = comm_share(cell_id);
    if (share <= 0.0) {
      stalled_[cell_id].push_back(msg);
      kernel_.trace_note("dp_stalled", msg.src_id, msg.dst_id, "cell=" + cell_id);
      return;
    }
    auto info = kernel_.send(msg, dp_uplink_.at(msg.src_id), share);
    record_comm(msg.subject_id, msg.size_bits, info.transfer_duration,
                scn_.config.sensing_energy_per_bit);
  }

  double comm_share(const std::string& cell_id) const {
    auto it = shares_.find(cell_id);
    return it == shares_.end() ? 0.0 : it->second.comm;
  }

  double sensing_share(const std::string& cell_id) const {
    auto it = shares_.find(cell_id);
    return it == shares_.end() ? 0.0 : it->second.sensing;
  }

  // --- joint scheduler tick -------------------------------------------------

  void schedule_tick(double t) {
    kernel_.schedule(t, "", [this, t] {
      for (const auto& cell : cells_) {
        const CellShares granted = allocate(cell);
        shares_[cell.cell_id] = granted;
        kernel_.trace_note("alloc", cell.cell_id, "-",
                           "comm_demand=" + fmt(cell.comm_demand) +
                               " sens_demand=" + fmt(cell.sensing_demand) +
                               " comm_share=" + fmt(granted.comm) +
                               " sens_share=" + fmt(granted.sensing));
        if (granted.comm > 0.0) {
          auto it = stalled_.find(cell.cell_id);
          if (it != stalled_.end()) {
            for (const auto& msg : it->second) {
              auto info = kernel_.send(msg, dp_uplink_.at(msg.src_id), granted.comm);
              record_comm(msg.subject_id, msg.size_bits, info.transfer_duration,
                          scn_.config.sensing_energy_per_bit);
            }
            stalled_.erase(it);
          }
        }
      }
      const double next = t + tick_;
      if (next <= scn_.duration) schedule_tick(next);
    });
  }

  // --- message dispatch ------------------------------------------------------

  void on_message(const NodeId& endpoint, const Message& msg) {
    switch (msg.kind) {
      case MessageKind::SensingRequestMsg: on_sensing_request(msg); break;
      case MessageKind::NodeConfig: break;  // measurement nodes ack implicitly
      case MessageKind::SpfConfig: on_spf_config(msg); break;
      case MessageKind::MeasurementReport: on_measurement_report(msg); break;
      case MessageKind::SensingResultMsg: on_sensing_result(msg); break;
      case MessageKind::Advertise: on_advertise(msg); break;
      case MessageKind::OffloadRequest: on_offload_request(msg); break;
      case MessageKind::OffloadGrant: on_offload_grant(msg); break;
      case MessageKind::TaskTransfer: on_task_transfer(endpoint, msg); break;
      case MessageKind::ResultTransfer: on_result_transfer(msg); break;
    }
  }

  // --- sensing control side (SeMF) -------------------------------------------

  void note_session_state(const std::string& subject, const std::string& state,
                          const std::string& reason = "") {
    kernel_.trace_note("session_state", subject, "-",
                       reason.empty() ? state : state + " reason=" + reason);
  }

  void on_sensing_request(const Message& msg) {
    auto& rec = sensing_.at(msg.ref_id);
    const SensingRequest& request = rec.spec.request;

    if (authorize(request, scn_.consumers) == AuthzDecision::Denied) {
      rec.session.advance(SessionState::Rejected);
      rec.reject_reason = "denied";
      note_session_state(request.request_id, "rejected", "denied");
      return;
    }
    rec.session.advance(SessionState::Authorized);
    note_session_state(request.request_id, "authorized");

    std::vector<std::pair<NodeId, NodeId>> pairs;
    try {
      pairs = select_pairs(request.area, scn_.nodes, request.mode);
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::InsufficientCoverage) throw;
      rec.session.advance(SessionState::Rejected);
      rec.reject_reason = "insufficient_coverage";
      note_session_state(request.request_id, "rejected", "insufficient_coverage");
      return;
    }

    const ConfigurationPlan plan =
        plan_configuration(request, pairs, scn_.nodes, kernel_.now());
    rec.session.pairs = pairs;
    rec.session.spf_config = plan.spf_config;
    rec.rounds_requested = static_cast<int>(plan.round_times.size());

    for (const auto& node_id : plan.nodes_to_configure) {
      Message cfg;
      cfg.src_id = kSemfId;
      cfg.dst_id = node_id;
      cfg.plane = Plane::Control;
      cfg.kind = MessageKind::NodeConfig;
      cfg.size_bits = scn_.config.control_message_bits;
      cfg.subject_id = request.request_id;
      cfg.ref_id = request.request_id;
      send_control(cfg, request.request_id);
    }
    Message spf_cfg;
    spf_cfg.src_id = kSemfId;
    spf_cfg.dst_id = kSpfId;
    spf_cfg.plane = Plane::Control;
    spf_cfg.kind = MessageKind::SpfConfig;
    spf_cfg.size_bits = scn_.config.control_message_bits;
    spf_cfg.subject_id = request.request_id;
    spf_cfg.ref_id = request.request_id;
    send_control(spf_cfg, request.request_id);

    rec.session.advance(SessionState::Configured);
    note_session_state(request.request_id, "configured",
                       "pairs=" + std::to_string(pairs.size()));

    for (size_t k = 0; k < plan.round_times.size(); ++k) {
      kernel_.schedule(plan.round_times[k], "",
                       [this, id = request.request_id, round = static_cast<int>(k) + 1] {
                         run_round(id, round);
                       });
    }
    if (plan.round_times.empty()) {
      finalize_sensing(request.request_id);
    }
  }

  void run_round(const std::string& request_id, int round) {
    auto& rec = sensing_.at(request_id);
    if (rec.session.state == SessionState::Rejected) return;
    if (!rec.measuring_noted) {
      rec.session.advance(SessionState::Measuring);
      note_session_state(request_id, "measuring");
      rec.measuring_noted = true;
    }

    // The round runs at the weakest granted sensing share across the cells
    // of the receiving nodes; below the configured minimum every second
    // starved round is skipped (refresh halving), and a zero share skips
    // outright.
    double min_share = 1.0;
    std::set<std::string> rx_cells;
    for (const auto& [tx, rx] : rec.session.pairs) {
      rx_cells.insert(scn_.find_node(rx)->cell_id);
    }
    for (const auto& cell : rx_cells) {
      min_share = std::min(min_share, sensing_share(cell));
    }

    if (min_share <= 0.0) {
      ++rec.starved_rounds_seen;
      kernel_.trace_note("round_skipped", request_id, "-",
                         "round=" + std::to_string(round) + " reason=starved");
      conclude_round(request_id);
      return;
    }
    if (min_share < scn_.config.min_sensing_share) {
      ++rec.starved_rounds_seen;
      if (rec.starved_rounds_seen % 2 == 0) {
        kernel_.trace_note("round_skipped", request_id, "-",
                           "round=" + std::to_string(round) + " reason=halved");
        conclude_round(request_id);
        return;
      }
    }

    kernel_.trace_note("round", request_id, "-", "round=" + std::to_string(round));
    const Position target = scn_.targets.at(request_id);
    for (const auto& [tx_id, rx_id] : rec.session.pairs) {
      const MeasurementNode* rx_node = scn_.find_node(rx_id);
      const double share = sensing_share(rx_node->cell_id);
      const double eff_std = effective_noise_std(scn_.sensing_noise_std, share);
      const Position tx_pos = rec.session.spf_config.node_positions.at(tx_id);
      const Position rx_pos = rec.session.spf_config.node_positions.at(rx_id);
      const double quality = std::min(scn_.find_node(tx_id)->quality_indicator,
                                      rx_node->quality_indicator);
      const SensingMeasurement m = generate_measurement(
          tx_pos, rx_pos, tx_id, rx_id, target, rec.spec.request.mode, eff_std,
          quality, kernel_.now(), rec.noise_rng);

      Message report;
      report.src_id = rx_id;
      report.dst_id = kSpfId;
      report.plane = Plane::Data;
      report.kind = MessageKind::MeasurementReport;
      report.size_bits = scn_.config.measurement_report_bits;
      report.subject_id = request_id;
      report.ref_id = request_id;
      report.aux_id = tx_id;
      report.round = round;
      pending_measurements_[{request_id, round, tx_id, rx_id}] = m;
      send_sensing_data(report, rx_node->cell_id);
    }
    rec.last_round_time = kernel_.now();
  }

  // --- sensing processing side (SPF) ------------------------------------------

  void on_spf_config(const Message& msg) {
    auto& rec = sensing_.at(msg.ref_id);
    rec.spf_configured = true;
    for (const auto& round : pending_rounds_[msg.ref_id]) {
      process_round_if_complete(msg.ref_id, round);
    }
    pending_rounds_.erase(msg.ref_id);
  }

  void on_measurement_report(const Message& msg) {
    auto& rec = sensing_.at(msg.ref_id);
    auto it = pending_measurements_.find(
        MeasKey{msg.ref_id, msg.round, msg.aux_id, msg.src_id});
    if (it != pending_measurements_.end()) {
      rec.round_reports[msg.round].push_back(it->second);
      pending_measurements_.erase(it);
    }
    if (!rec.spf_configured) {
      // Reports may not be interpreted before the geometry configuration
      // arrives on the control plane.
      pending_rounds_[msg.ref_id].insert(msg.round);
      return;
    }
    process_round_if_complete(msg.ref_id, msg.round);
  }

  void process_round_if_complete(const std::string& request_id, int round) {
    auto& rec = sensing_.at(request_id);
    auto it = rec.round_reports.find(round);
    if (it == rec.round_reports.end()) return;
    if (it->second.size() < rec.session.pairs.size()) return;

    TargetEstimate estimate =
        localize(it->second, rec.session.spf_config, scn_.config.localizer);
    ++rec.rounds_delivered;
    const auto kept = privacy_filter({estimate}, rec.spec.request.area);
    if (!kept.empty()) {
      rec.kept_estimates.push_back(kept.front());
    }
    rec.round_reports.erase(it);
    conclude_round(request_id);
  }

  void conclude_round(const std::string& request_id) {
    auto& rec = sensing_.at(request_id);
    ++rec.rounds_concluded;
    if (rec.rounds_concluded >= rec.rounds_requested) {
      finalize_sensing(request_id);
    }
  }

  void finalize_sensing(const std::string& request_id) {
    auto& rec = sensing_.at(request_id);
    if (rec.finalized || rec.session.state == SessionState::Rejected) return;
    rec.finalized = true;

    const SensingResult result = fuse_rounds(
        request_id, rec.kept_estimates,
        rec.last_round_time > 0 ? rec.last_round_time : kernel_.now());
    results_[request_id] = result;

    Message msg;
    msg.src_id = kSpfId;
    msg.dst_id = rec.spec.request.consumer_id;
    msg.plane = Plane::Control;
    msg.kind = MessageKind::SensingResultMsg;
    msg.size_bits = scn_.config.result_message_bits;
    msg.subject_id = request_id;
    msg.ref_id = request_id;
    send_control(msg, request_id);
  }

  void on_sensing_result(const Message& msg) {
    auto& rec = sensing_.at(msg.ref_id);
    if (!rec.measuring_noted) {
      rec.session.advance(SessionState::Measuring);
      rec.measuring_noted = true;
    }
    rec.session.advance(SessionState::Completed);
    note_session_state(msg.ref_id, "completed",
                       "rounds=" + std::to_string(rec.rounds_delivered) + "/" +
                           std::to_string(rec.rounds_requested));
    KpiRecord delta;
    delta.latency = kernel_.now() - rec.request_sent_at;
    kpi_.record(msg.ref_id, delta);
  }

  // --- offload controller ------------------------------------------------------

  void on_advertise(const Message& msg) {
    for (const auto& cap : scn_.capabilities) {
      if (cap.capability.node_id == msg.src_id) {
        registry_.advertise(cap.capability, kernel_.now());
        return;
      }
    }
  }

  void start_offload(const std::string& workload_id) {
    auto& rec = offloads_.at(workload_id);
    note_session_state(workload_id, "discovery_phase1");
    Message msg;
    msg.src_id = rec.spec.offloader_id;
    msg.dst_id = kControllerId;
    msg.plane = Plane::Control;
    msg.kind = MessageKind::OffloadRequest;
    msg.size_bits = scn_.config.control_message_bits;
    msg.subject_id = workload_id;
    msg.ref_id = workload_id;
    send_control(msg, workload_id);
    rec.session.advance(OffloadState::DiscoveryPhase2);
    note_session_state(workload_id, "discovery_phase2");
  }

  void on_offload_request(const Message& msg) {
    auto& rec = offloads_.at(msg.ref_id);
    const std::string& id = rec.spec.workload.workload_id;
    if (!try_select(rec)) {
      rec.session.advance(OffloadState::Failed);
      rec.fail_reason = "no_feasible_node";
      note_session_state(id, "failed", "no_feasible_node");
      return;
    }
    send_grant(rec);
  }

  bool try_select(OffloadRec& rec) {
    try {
      rec.chosen = select_compute_nodes(rec.spec.workload, registry_, policy_,
                                        rec.spec.fanout, rec.excluded);
      return true;
    } catch (const SimError& e) {
      if (e.code() != ErrorCode::NoFeasibleNode) throw;
      return false;
    }
  }

  void send_grant(OffloadRec& rec) {
    const std::string& id = rec.spec.workload.workload_id;
    Message grant;
    grant.src_id = kControllerId;
    grant.dst_id = rec.spec.offloader_id;
    grant.plane = Plane::Control;
    grant.kind = MessageKind::OffloadGrant;
    grant.size_bits = scn_.config.control_message_bits;
    grant.subject_id = id;
    grant.ref_id = id;
    grant.attempt = rec.attempt;
    auto info = send_control(grant, id);
    // The reassignment gap is part of the session's measured latency; the
    // first grant is not (latency starts at the first offloaded bit).
    if (rec.attempt > 1 && rec.chosen.size() == 1) {
      rec.latency_acc += info.elapsed;
    }
    std::string detail = "nodes=";
    for (size_t i = 0; i < rec.chosen.size(); ++i) {
      if (i) detail += "+";
      detail += rec.chosen[i];
    }
    kernel_.trace_note("offload_grant_issued", kControllerId, rec.spec.offloader_id,
                       detail);
  }

  void on_offload_grant(const Message& msg) {
    auto& rec = offloads_.at(msg.ref_id);
    if (msg.attempt != rec.attempt) return;  // stale grant after reassignment
    rec.session.advance(OffloadState::Offloading);
    note_session_state(msg.ref_id, "offloading",
                       "attempt=" + std::to_string(rec.attempt));
    start_iteration(rec);
  }

  Channel& compute_up_channel(const NodeId& node) {
    auto it = compute_up_.find(node);
    if (it == compute_up_.end()) {
      const ComputeCapability* cap = registry_.find(node);
      it = compute_up_.emplace(node, Channel{Plane::Data, 0.0, cap->link_bw_up}).first;
    }
    return it->second;
  }

  Channel& compute_down_channel(const NodeId& node) {
    auto it = compute_down_.find(node);
    if (it == compute_down_.end()) {
      const ComputeCapability* cap = registry_.find(node);
      it = compute_down_.emplace(node, Channel{Plane::Data, 0.0, cap->link_bw_down}).first;
    }
    return it->second;
  }

  double route_latency(const OffloadRec& rec) const {
    if (!rec.spec.route) return 0.0;
    return rec.spec.route->hops_each_way * rec.spec.route->per_hop_latency;
  }

  static uint64_t branch_bits(uint64_t total, size_t k, size_t branch) {
    const uint64_t base = total / k;
    return base + (branch < total % k ? 1 : 0);
  }

  void start_iteration(OffloadRec& rec) {
    const std::string& id = rec.spec.workload.workload_id;
    const size_t k = rec.chosen.size();
    rec.branches_pending = static_cast<int>(k);
    if (k > 1 && !rec.wall_clock_started) {
      rec.attempt_started_at = kernel_.now();
      rec.wall_clock_started = true;
    }
    for (size_t b = 0; b < k; ++b) {
      const NodeId& node = rec.chosen[b];
      Message task;
      task.src_id = rec.spec.offloader_id;
      task.dst_id = node;
      task.plane = Plane::Data;
      task.kind = MessageKind::TaskTransfer;
      task.size_bits =
          static_cast<double>(branch_bits(rec.spec.workload.payload_bits, k, b));
      task.subject_id = id;
      task.ref_id = id;
      task.attempt = rec.attempt;
      task.branch = static_cast<int>(b);
      auto info = kernel_.send(task, compute_up_channel(node), 1.0, route_latency(rec));
      const ComputeCapability* cap = registry_.find(node);
      record_comm(id, task.size_bits, info.transfer_duration, cap->energy_per_bit);
      if (k == 1) rec.latency_acc += info.elapsed;
    }
  }

  void on_task_transfer(const NodeId& node, const Message& msg) {
    auto& rec = offloads_.at(msg.ref_id);
    if (msg.attempt != rec.attempt) return;  // payload of a failed attempt

    if (rec.session.state == OffloadState::Offloading) {
      rec.session.advance(OffloadState::Computing);
      note_session_state(msg.ref_id, "computing");
    }
    if (registry_.is_failed(node)) {
      // The node died while the payload was in flight: the branch enters
      // compute and fails on the spot with no work done.
      fail_session(rec, node, 0.0);
      return;
    }

    const ComputeCapability* cap = registry_.find(node);
    const size_t k = rec.chosen.size();
    const double flops = rec.spec.workload.flops / static_cast<double>(k);
    const double duration =
        rec.spec.workload.flops /
        (cap->flops_per_second * (1.0 - cap->current_load)) /
        static_cast<double>(k);

    BranchCompute bc;
    bc.started_at = kernel_.now();
    bc.duration = duration;
    bc.flops = flops;
    bc.active = true;
    rec.computing[node] = bc;

    const uint64_t gen = rec.generation;
    kernel_.schedule(kernel_.now() + duration, "", [this, id = msg.ref_id, node, gen,
                                                    branch = msg.branch] {
      on_compute_done(id, node, gen, branch);
    });
  }

  void on_compute_done(const std::string& id, const NodeId& node, uint64_t gen,
                       int branch) {
    auto& rec = offloads_.at(id);
    if (gen != rec.generation) return;  // cancelled by a failure
    auto it = rec.computing.find(node);
    if (it == rec.computing.end() || !it->second.active) return;

    kernel_.trace_note("compute_done", node, "-", id);
    KpiRecord delta;
    delta.compute_flops = it->second.flops;
    const ComputeCapability* cap = registry_.find(node);
    delta.energy_compute = it->second.flops * cap->energy_per_flop;
    kpi_.record(id, delta);
    if (rec.chosen.size() == 1) rec.latency_acc += it->second.duration;
    it->second.active = false;

    if (rec.session.state == OffloadState::Computing) {
      rec.session.advance(OffloadState::Returning);
      note_session_state(id, "returning");
    }

    const size_t k = rec.chosen.size();
    Message result;
    result.src_id = node;
    result.dst_id = rec.spec.offloader_id;
    result.plane = Plane::Data;
    result.kind = MessageKind::ResultTransfer;
    result.size_bits = static_cast<double>(
        branch_bits(rec.spec.workload.result_bits, k, static_cast<size_t>(branch)));
    result.subject_id = id;
    result.ref_id = id;
    result.attempt = rec.attempt;
    result.branch = branch;
    auto info =
        kernel_.send(result, compute_down_channel(node), 1.0, route_latency(rec));
    record_comm(id, result.size_bits, info.transfer_duration, cap->energy_per_bit);
    if (k == 1) rec.latency_acc += info.elapsed;
  }

  void on_result_transfer(const Message& msg) {
    auto& rec = offloads_.at(msg.ref_id);
    if (msg.attempt != rec.attempt) return;

    if (--rec.branches_pending > 0) return;

    if (rec.iteration < rec.spec.iterations) {
      ++rec.iteration;
      rec.session.advance(OffloadState::Offloading);
      note_session_state(msg.ref_id, "offloading",
                         "iteration=" + std::to_string(rec.iteration));
      start_iteration(rec);
      return;
    }

    rec.session.advance(OffloadState::Done);
    note_session_state(msg.ref_id, "done");
    flush_latency(rec);
  }

  void flush_latency(OffloadRec& rec) {
    KpiRecord delta;
    if (rec.chosen.size() == 1) {
      delta.latency = rec.latency_acc;
      rec.latency_acc = 0.0;
    } else {
      delta.latency = kernel_.now() - rec.attempt_started_at;
      rec.attempt_started_at = kernel_.now();
    }
    kpi_.record(rec.spec.workload.workload_id, delta);
  }

  // --- fault injection -----------------------------------------------------------

  void on_fault(const FaultSpec& fault) {
    registry_.mark_failed(fault.node_id);
    for (auto& [id, rec] : offloads_) {
      const bool involved = std::find(rec.chosen.begin(), rec.chosen.end(),
                                      fault.node_id) != rec.chosen.end();
      if (!involved) continue;
      if (rec.session.state != OffloadState::Computing &&
          rec.session.state != OffloadState::Returning) {
        continue;  // in-flight payloads fail at delivery instead
      }
      auto it = rec.computing.find(fault.node_id);
      if (it == rec.computing.end() || !it->second.active) continue;
      const double fraction =
          it->second.duration > 0
              ? (kernel_.now() - it->second.started_at) / it->second.duration
              : 0.0;
      fail_session(rec, fault.node_id, std::clamp(fraction, 0.0, 1.0));
    }
  }

  /// Abort the current attempt, account the wasted work, and re-run node
  /// selection without the failed node. Restarts from the payload transfer.
  void fail_session(OffloadRec& rec, const NodeId& failed_node, double fraction) {
    const std::string& id = rec.spec.workload.workload_id;

    // Partially executed compute on every still-active branch is wasted but
    // real: account it to the failing attempt.
    for (auto& [node, bc] : rec.computing) {
      if (!bc.active) continue;
      const ComputeCapability* cap = registry_.find(node);
      const double frac =
          node == failed_node
              ? fraction
              : std::clamp((kernel_.now() - bc.started_at) / bc.duration, 0.0, 1.0);
      KpiRecord delta;
      delta.compute_flops = bc.flops * frac;
      delta.energy_compute = bc.flops * frac * cap->energy_per_flop;
      kpi_.record(id, delta);
      if (rec.chosen.size() == 1) {
        rec.latency_acc += kernel_.now() - bc.started_at;
      }
      bc.active = false;
    }
    rec.computing.clear();
    ++rec.generation;

    rec.session.advance(OffloadState::Failed);
    note_session_state(id, "failed", "node=" + failed_node);
    flush_latency(rec);

    rec.excluded.push_back(failed_node);
    if (!try_select(rec)) {
      // No alternative exists; the session stays terminally failed.
      rec.fail_reason = "no_feasible_node";
      note_session_state(id, "failed", "no_feasible_node");
      return;
    }
    rec.session.advance(OffloadState::Reassigned);
    note_session_state(id, "reassigned");
    ++rec.attempt;
    rec.iteration = 1;
    kpi_.begin_attempt(id);
    send_grant(rec);
  }

  // --- report assembly --------------------------------------------------------

  RunOutputs collect() {
    for (auto& [id, rec] : sensing_) {
      auto& row = kpi_.session(id);
      row.type = "sensing";
      row.state = to_string(rec.session.state);
      row.rounds_requested = rec.rounds_requested;
      row.rounds_delivered = rec.rounds_delivered;
      auto rit = results_.find(id);
      if (rit != results_.end() && !rit->second.estimates.empty()) {
        row.estimate = rit->second.estimates.front();
        auto tit = scn_.targets.find(id);
        if (tit != scn_.targets.end()) {
          row.ground_truth_error =
              distance(rit->second.estimates.front().position, tit->second);
        }
      }
    }
    for (auto& [id, rec] : offloads_) {
      auto& row = kpi_.session(id);
      row.type = "offload";
      row.state = to_string(rec.session.state);
      row.chosen_nodes = rec.chosen;
    }

    RunOutputs out;
    out.meta = RunMeta{seed_, to_string(policy_), scn_.duration};
    out.trace_text = trace_.to_text();
    out.report_json = report_to_json(kpi_, out.meta);
    out.report_csv = report_to_csv(kpi_);
    out.kpi = kpi_;
    return out;
  }

  struct MeasKey {
    std::string request;
    int round;
    std::string tx;
    std::string rx;
    bool operator<(const MeasKey& o) const {
      if (request != o.request) return request < o.request;
      if (round != o.round) return round < o.round;
      if (tx != o.tx) return tx < o.tx;
      return rx < o.rx;
    }
  };

  const Scenario& scn_;
  uint64_t seed_;
  OffloadPolicy policy_;
  double tick_;

  TraceLog trace_;
  Kernel kernel_;
  Rng master_rng_;

  Channel cp_channel_;
  std::map<NodeId, Channel> dp_uplink_;
  std::map<NodeId, Channel> compute_up_;
  std::map<NodeId, Channel> compute_down_;

  std::vector<CellResourceState> cells_;
  std::map<std::string, CellShares> shares_;
  std::map<std::string, std::vector<Message>> stalled_;

  std::map<std::string, SensingRec> sensing_;
  std::map<std::string, std::set<int>> pending_rounds_;
  std::map<MeasKey, SensingMeasurement> pending_measurements_;
  std::map<std::string, SensingResult> results_;

  CapabilityRegistry registry_;
  std::map<std::string, OffloadRec> offloads_;

  KpiAccumulator kpi_;
};

}  // namespace

RunOutputs run_scenario(const Scenario& scenario, const RunOptions& options) {
  const auto violations = validate(scenario);
  if (!violations.empty()) {
    std::string what = "scenario failed validation:";
    for (const auto& v : violations) {
      what += "\n  " + v.to_string();
    }
    throw SimError(ErrorCode::ValidationFailure, what);
  }

  const uint64_t seed = options.seed.value_or(scenario.seed);
  const OffloadPolicy policy = options.policy.value_or(
      parse_policy(scenario.config.default_policy).value_or(OffloadPolicy::MinLatency));
  const double tick = options.tick.value_or(scenario.config.tick);
  if (tick <= 0.0) {
    throw SimError(ErrorCode::InvalidArgument, "tick must be > 0");
  }

  SimulationRun run(scenario, seed, policy, tick);
  return run.execute();
}

PolicyComparison compare_policies(const Scenario& scenario,
                                  const std::vector<OffloadPolicy>& policies,
                                  const RunOptions& options) {
  if (policies.size() < 2) {
    throw SimError(ErrorCode::InvalidArgument, "compare needs at least two policies");
  }
  PolicyComparison cmp;
  cmp.table_text =
      "policy\tsessions\tmean_latency\tmedian_latency\tp95_latency\t"
      "total_energy\ttotal_energy_compute\ttotal_energy_comm\n";
  for (const auto policy : policies) {
    RunOptions per_run = options;
    per_run.policy = policy;
    RunOutputs out = run_scenario(scenario, per_run);
    const KpiAggregates agg = out.kpi.aggregates();
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s\t%zu\t%.9g\t%.9g\t%.9g\t%.9g\t%.9g\t%.9g\n",
                  to_string(policy), agg.sessions, agg.mean_latency,
                  agg.median_latency, agg.p95_latency, agg.total_energy,
                  agg.total_energy_compute, agg.total_energy_comm);
    cmp.table_text += buf;
    cmp.policies.push_back(to_string(policy));
    cmp.aggregates.push_back(agg);
    cmp.runs.push_back(std::move(out));
  }
  return cmp;
}

}  // namespace bcsim
