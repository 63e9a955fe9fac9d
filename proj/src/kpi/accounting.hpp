#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace bcsim {

/// Per-session accounting. Offload sessions keep one record per attempt so
/// the energy decomposition across reassignments stays auditable; the
/// session totals are always the sum of their attempts.
struct SessionKpi {
  std::string subject_id;
  std::string type;   // "sensing" | "offload"
  std::string state;  // terminal session state
  KpiRecord totals;
  std::vector<KpiRecord> attempts;

  // sensing-only fields
  int rounds_requested = 0;
  int rounds_delivered = 0;
  std::optional<double> ground_truth_error;  // meters
  std::optional<PositionEstimate> estimate;

  // offload-only fields
  std::vector<NodeId> chosen_nodes;
};

/// Delivered result rounds over requested rounds, in [0,1].
double refresh_attainment(int rounds_delivered, int rounds_requested);

/// Nearest-rank percentile on a copy of the values (deterministic, no
/// interpolation). p in (0,100].
double percentile_nearest_rank(std::vector<double> values, double p);

struct KpiAggregates {
  size_t sessions = 0;
  double mean_latency = 0.0;
  double median_latency = 0.0;
  double p95_latency = 0.0;
  double total_energy = 0.0;
  double total_energy_compute = 0.0;
  double total_energy_comm = 0.0;
  double total_comm_bits = 0.0;
  double total_comm_bit_seconds = 0.0;
  double total_compute_flops = 0.0;
  double sensing_rmse = 0.0;  // vs ground truth, over sensing sessions with targets
  double mean_refresh_attainment = 0.0;
};

class KpiAccumulator {
 public:
  /// Accumulate a non-negative delta onto a session's current attempt.
  void record(const std::string& subject_id, const KpiRecord& delta);

  SessionKpi& session(const std::string& subject_id);
  const std::map<std::string, SessionKpi>& sessions() const { return sessions_; }

  /// Open a new attempt record for an offload session.
  void begin_attempt(const std::string& subject_id);

  /// Merge another run's sessions in (associative and commutative; subjects
  /// must not collide).
  void merge(const KpiAccumulator& other);

  KpiAggregates aggregates() const;

 private:
  std::map<std::string, SessionKpi> sessions_;
};

struct RunMeta {
  uint64_t seed = 0;
  std::string policy;
  double duration = 0.0;
};

/// Byte-stable exports: a versioned JSON document and a flat CSV, one row
/// per session. Identical runs serialize to identical bytes.
std::string report_to_json(const KpiAccumulator& acc, const RunMeta& meta);
std::string report_to_csv(const KpiAccumulator& acc);

}  // namespace bcsim
