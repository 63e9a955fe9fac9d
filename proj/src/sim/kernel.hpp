#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "core/error.hpp"
#include "sim/message.hpp"
#include "sim/trace.hpp"

namespace bcsim {

/// One directed transfer channel. delivery = queue wait + size/bandwidth +
/// fixed_latency; concurrent messages serialize FIFO behind busy_until
/// (store-and-forward, whole-message granularity).
struct Channel {
  Plane plane = Plane::Control;
  double fixed_latency = 0.0;  // seconds, >= 0
  double bandwidth = 0.0;      // bits/second, > 0
  double busy_until = 0.0;
};

/// Deterministic single-threaded discrete-event kernel. Events dequeue in
/// (time, seq) order; seq is assigned at schedule time, so two runs of the
/// same scenario and seed produce identical event orders and traces.
class Kernel {
 public:
  using MessageHandler = std::function<void(const Message&)>;
  using Action = std::function<void()>;

  explicit Kernel(TraceLog& trace) : trace_(trace) {}

  double now() const { return now_; }

  void register_endpoint(const NodeId& id, MessageHandler handler);
  bool has_endpoint(const NodeId& id) const { return handlers_.count(id) > 0; }

  /// Schedule an internal (non-message) event. Traced when processed unless
  /// kind is empty.
  uint64_t schedule(double time, std::string kind, Action action,
                    std::string src = "-", std::string detail = "-");

  struct SendInfo {
    double delivery_time = 0.0;      // absolute kernel time of delivery
    double transfer_duration = 0.0;  // size_bits / effective bandwidth
    double elapsed = 0.0;            // wait + transfer + fixed latency
  };

  /// Price the transfer on the channel, schedule delivery, and advance the
  /// channel's FIFO state. bandwidth_scale applies the cell's granted
  /// communication share to data-plane transfers; extra_latency adds fixed
  /// per-message delay such as routing hops.
  SendInfo send(const Message& msg, Channel& channel, double bandwidth_scale = 1.0,
                double extra_latency = 0.0);

  /// Process all events with time <= t_end; afterwards now() == t_end.
  /// Returns the number of events processed.
  size_t run_until(double t_end);

  /// Append a non-event record (state transitions, allocations) to the trace
  /// at the current time, with a fresh sequence number.
  void trace_note(const std::string& kind, const std::string& src,
                  const std::string& dst, const std::string& detail);

 private:
  struct InternalEvent {
    std::string kind;
    std::string src;
    std::string detail;
    Action action;
  };

  struct Event {
    double time = 0.0;
    uint64_t seq = 0;
    std::variant<Message, InternalEvent> payload;
  };

  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  void process(Event& ev);

  TraceLog& trace_;
  double now_ = 0.0;
  uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::map<NodeId, MessageHandler> handlers_;
};

}  // namespace bcsim
