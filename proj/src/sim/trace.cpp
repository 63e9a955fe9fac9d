#include "sim/trace.hpp"

#include <cinttypes>
#include <cstdio>

namespace bcsim {

void TraceLog::append(TraceRecord rec) {
  records_.push_back(std::move(rec));
}

std::string TraceLog::format_time(double t) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9f", t);
  return buf;
}

std::string TraceLog::to_text() const {
  std::string out = "# bcsim-trace v1\n";
  char buf[64];
  for (const auto& r : records_) {
    out += format_time(r.time);
    std::snprintf(buf, sizeof(buf), "\t%" PRIu64 "\t", r.seq);
    out += buf;
    out += r.kind;
    out += '\t';
    out += r.src;
    out += '\t';
    out += r.dst;
    out += '\t';
    out += r.plane;
    std::snprintf(buf, sizeof(buf), "\t%.0f\t", r.bits);
    out += buf;
    out += r.detail;
    out += '\n';
  }
  return out;
}

}  // namespace bcsim
