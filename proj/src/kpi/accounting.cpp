#include "kpi/accounting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "core/error.hpp"

namespace bcsim {

double refresh_attainment(int rounds_delivered, int rounds_requested) {
  if (rounds_requested <= 0) return 0.0;
  return static_cast<double>(rounds_delivered) / static_cast<double>(rounds_requested);
}

double percentile_nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t rank = static_cast<size_t>(
      std::ceil(p / 100.0 * static_cast<double>(values.size())));
  return values[std::max<size_t>(rank, 1) - 1];
}

void KpiAccumulator::record(const std::string& subject_id, const KpiRecord& delta) {
  auto& s = session(subject_id);
  s.totals += delta;  // throws NegativeDelta on negative fields
  if (s.attempts.empty()) {
    s.attempts.emplace_back();
  }
  s.attempts.back() += delta;
}

SessionKpi& KpiAccumulator::session(const std::string& subject_id) {
  auto it = sessions_.find(subject_id);
  if (it == sessions_.end()) {
    it = sessions_.emplace(subject_id, SessionKpi{}).first;
    it->second.subject_id = subject_id;
  }
  return it->second;
}

void KpiAccumulator::begin_attempt(const std::string& subject_id) {
  session(subject_id).attempts.emplace_back();
}

void KpiAccumulator::merge(const KpiAccumulator& other) {
  for (const auto& [id, kpi] : other.sessions_) {
    if (sessions_.count(id)) {
      throw SimError(ErrorCode::InvalidArgument,
                     "merge collision on session id: " + id);
    }
    sessions_.emplace(id, kpi);
  }
}

KpiAggregates KpiAccumulator::aggregates() const {
  KpiAggregates agg;
  agg.sessions = sessions_.size();

  std::vector<double> latencies;
  double err_sq_sum = 0.0;
  size_t err_count = 0;
  double attainment_sum = 0.0;
  size_t sensing_count = 0;

  for (const auto& [id, s] : sessions_) {
    latencies.push_back(s.totals.latency);
    agg.total_energy_compute += s.totals.energy_compute;
    agg.total_energy_comm += s.totals.energy_comm;
    agg.total_comm_bits += s.totals.comm_bits;
    agg.total_comm_bit_seconds += s.totals.comm_bit_seconds;
    agg.total_compute_flops += s.totals.compute_flops;
    if (s.type == "sensing") {
      ++sensing_count;
      attainment_sum += refresh_attainment(s.rounds_delivered, s.rounds_requested);
      if (s.ground_truth_error) {
        err_sq_sum += *s.ground_truth_error * *s.ground_truth_error;
        ++err_count;
      }
    }
  }
  agg.total_energy = agg.total_energy_compute + agg.total_energy_comm;
  if (!latencies.empty()) {
    double sum = 0.0;
    for (double v : latencies) sum += v;
    agg.mean_latency = sum / static_cast<double>(latencies.size());
    agg.median_latency = percentile_nearest_rank(latencies, 50.0);
    agg.p95_latency = percentile_nearest_rank(latencies, 95.0);
  }
  if (err_count > 0) {
    agg.sensing_rmse = std::sqrt(err_sq_sum / static_cast<double>(err_count));
  }
  if (sensing_count > 0) {
    agg.mean_refresh_attainment = attainment_sum / static_cast<double>(sensing_count);
  }
  return agg;
}

namespace {

nlohmann::ordered_json record_to_json(const KpiRecord& r) {
  return nlohmann::ordered_json{
      {"energy", r.energy()},
      {"energy_compute", r.energy_compute},
      {"energy_comm", r.energy_comm},
      {"latency", r.latency},
      {"comm_bits", r.comm_bits},
      {"comm_bit_seconds", r.comm_bit_seconds},
      {"compute_flops", r.compute_flops},
  };
}

}  // namespace

std::string report_to_json(const KpiAccumulator& acc, const RunMeta& meta) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["run"] = {{"seed", meta.seed}, {"policy", meta.policy}, {"duration", meta.duration}};

  auto& sessions = doc["sessions"] = nlohmann::ordered_json::array();
  for (const auto& [id, s] : acc.sessions()) {
    nlohmann::ordered_json row;
    row["id"] = s.subject_id;
    row["type"] = s.type;
    row["state"] = s.state;
    row["kpi"] = record_to_json(s.totals);
    if (s.type == "sensing") {
      row["rounds_requested"] = s.rounds_requested;
      row["rounds_delivered"] = s.rounds_delivered;
      row["refresh_attainment"] =
          refresh_attainment(s.rounds_delivered, s.rounds_requested);
      if (s.estimate) {
        row["estimate"] = {{"x", s.estimate->position.x},
                           {"y", s.estimate->position.y},
                           {"confidence", s.estimate->confidence}};
      }
      if (s.ground_truth_error) {
        row["ground_truth_error"] = *s.ground_truth_error;
      }
    } else {
      row["chosen_nodes"] = s.chosen_nodes;
      auto& attempts = row["attempts"] = nlohmann::ordered_json::array();
      for (const auto& a : s.attempts) {
        attempts.push_back(record_to_json(a));
      }
    }
    sessions.push_back(std::move(row));
  }

  const KpiAggregates agg = acc.aggregates();
  doc["aggregates"] = {
      {"sessions", agg.sessions},
      {"mean_latency", agg.mean_latency},
      {"median_latency", agg.median_latency},
      {"p95_latency", agg.p95_latency},
      {"total_energy", agg.total_energy},
      {"total_energy_compute", agg.total_energy_compute},
      {"total_energy_comm", agg.total_energy_comm},
      {"total_comm_bits", agg.total_comm_bits},
      {"total_comm_bit_seconds", agg.total_comm_bit_seconds},
      {"total_compute_flops", agg.total_compute_flops},
      {"sensing_rmse", agg.sensing_rmse},
      {"mean_refresh_attainment", agg.mean_refresh_attainment},
  };
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const KpiAccumulator& acc) {
  std::string out =
      "id,type,state,energy,energy_compute,energy_comm,latency,comm_bits,"
      "comm_bit_seconds,compute_flops,rounds_requested,rounds_delivered,"
      "refresh_attainment,ground_truth_error,attempts\n";
  char buf[512];
  for (const auto& [id, s] : acc.sessions()) {
    const double attainment = refresh_attainment(s.rounds_delivered, s.rounds_requested);
    std::snprintf(buf, sizeof(buf),
                  "%s,%s,%s,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%d,%d,%.9g,%.9g,%zu\n",
                  s.subject_id.c_str(), s.type.c_str(), s.state.c_str(),
                  s.totals.energy(), s.totals.energy_compute, s.totals.energy_comm,
                  s.totals.latency, s.totals.comm_bits, s.totals.comm_bit_seconds,
                  s.totals.compute_flops, s.rounds_requested, s.rounds_delivered,
                  attainment, s.ground_truth_error.value_or(0.0), s.attempts.size());
    out += buf;
  }
  return out;
}

}  // namespace bcsim
