#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bcsim {

// One line per processed event, tab-separated:
//   time  seq  kind  src  dst  plane  bits  detail
// Timestamps are fixed-point (9 decimals) so traces are byte-stable across
// runs of the same binary; that stability is what the determinism tests
// compare.
struct TraceRecord {
  double time = 0.0;
  uint64_t seq = 0;
  std::string kind;
  std::string src = "-";
  std::string dst = "-";
  std::string plane = "-";
  double bits = 0.0;
  std::string detail = "-";
};

class TraceLog {
 public:
  void append(TraceRecord rec);

  const std::vector<TraceRecord>& records() const { return records_; }

  /// Render the whole trace, header line included.
  std::string to_text() const;

  static std::string format_time(double t);

 private:
  std::vector<TraceRecord> records_;
};

}  // namespace bcsim
