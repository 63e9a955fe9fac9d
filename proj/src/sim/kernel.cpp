#include "sim/kernel.hpp"

#include <algorithm>

namespace bcsim {

void Kernel::register_endpoint(const NodeId& id, MessageHandler handler) {
  if (handlers_.count(id)) {
    throw SimError(ErrorCode::InvalidArgument, "endpoint already registered: " + id);
  }
  handlers_[id] = std::move(handler);
}

uint64_t Kernel::schedule(double time, std::string kind, Action action,
                          std::string src, std::string detail) {
  if (time < now_) {
    throw SimError(ErrorCode::SchedulingInPast,
                   "event time " + std::to_string(time) + " precedes clock " +
                       std::to_string(now_));
  }
  const uint64_t seq = next_seq_++;
  queue_.push(Event{time, seq,
                    InternalEvent{std::move(kind), std::move(src), std::move(detail),
                                  std::move(action)}});
  return seq;
}

Kernel::SendInfo Kernel::send(const Message& msg, Channel& channel,
                              double bandwidth_scale, double extra_latency) {
  if (!has_endpoint(msg.dst_id)) {
    throw SimError(ErrorCode::UnknownDestination,
                   "message to unregistered endpoint: " + msg.dst_id);
  }
  const double bw = channel.bandwidth * bandwidth_scale;
  if (bw <= 0.0) {
    throw SimError(ErrorCode::InvalidArgument,
                   "channel bandwidth must be positive for send");
  }
  const double wait = std::max(0.0, channel.busy_until - now_);
  const double duration = msg.size_bits > 0 ? msg.size_bits / bw : 0.0;
  const double elapsed = wait + duration + channel.fixed_latency + extra_latency;
  const double delivery = now_ + elapsed;
  channel.busy_until = now_ + wait + duration;

  const uint64_t seq = next_seq_++;
  queue_.push(Event{delivery, seq, msg});
  return SendInfo{delivery, duration, elapsed};
}

size_t Kernel::run_until(double t_end) {
  if (t_end < now_) {
    throw SimError(ErrorCode::InvalidArgument, "run_until target precedes clock");
  }
  size_t processed = 0;
  while (!queue_.empty() && queue_.top().time <= t_end) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.time;
    process(ev);
    ++processed;
  }
  now_ = t_end;
  return processed;
}

void Kernel::process(Event& ev) {
  if (auto* msg = std::get_if<Message>(&ev.payload)) {
    trace_.append(TraceRecord{ev.time, ev.seq, to_string(msg->kind), msg->src_id,
                              msg->dst_id, to_string(msg->plane), msg->size_bits,
                              msg->subject_id.empty() ? "-" : msg->subject_id});
    handlers_.at(msg->dst_id)(*msg);
  } else {
    auto& internal = std::get<InternalEvent>(ev.payload);
    if (!internal.kind.empty()) {
      trace_.append(TraceRecord{ev.time, ev.seq, internal.kind, internal.src, "-",
                                "-", 0.0, internal.detail});
    }
    internal.action();
  }
}

void Kernel::trace_note(const std::string& kind, const std::string& src,
                        const std::string& dst, const std::string& detail) {
  trace_.append(TraceRecord{now_, next_seq_++, kind, src, dst, "-", 0.0, detail});
}

}  // namespace bcsim
