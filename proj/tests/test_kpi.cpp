#include <doctest.h>

#include <sstream>

#include "core/error.hpp"
#include "kpi/accounting.hpp"

using namespace bcsim;

namespace {

KpiRecord joules(double compute, double comm) {
  KpiRecord r;
  r.energy_compute = compute;
  r.energy_comm = comm;
  return r;
}

}  // namespace

TEST_SUITE("kpi") {

TEST_CASE("record accumulates additively and rejects negative deltas") {
  KpiAccumulator acc;
  acc.record("s1", joules(1.0, 0.0));
  acc.record("s1", joules(1.0, 0.5));
  CHECK(acc.sessions().at("s1").totals.energy() == doctest::Approx(2.5));

  acc.record("s1", KpiRecord{});  // zero delta: no change
  CHECK(acc.sessions().at("s1").totals.energy() == doctest::Approx(2.5));

  CHECK_THROWS_AS(acc.record("s1", joules(-1.0, 0.0)), SimError);
}

TEST_CASE("refresh attainment is delivered over requested rounds") {
  CHECK(refresh_attainment(6, 6) == doctest::Approx(1.0));
  CHECK(refresh_attainment(3, 6) == doctest::Approx(0.5));
  CHECK(refresh_attainment(0, 6) == 0.0);
}

TEST_CASE("nearest-rank percentile") {
  std::vector<double> v{5, 1, 4, 2, 3};
  CHECK(percentile_nearest_rank(v, 50.0) == doctest::Approx(3.0));
  CHECK(percentile_nearest_rank(v, 95.0) == doctest::Approx(5.0));
  CHECK(percentile_nearest_rank(v, 100.0) == doctest::Approx(5.0));
  CHECK(percentile_nearest_rank({7.0}, 95.0) == doctest::Approx(7.0));
}

TEST_CASE("attempts split the session totals") {
  KpiAccumulator acc;
  acc.record("w", joules(1.0, 0.25));
  acc.begin_attempt("w");
  acc.record("w", joules(2.0, 0.75));

  const auto& s = acc.sessions().at("w");
  REQUIRE(s.attempts.size() == 2);
  CHECK(s.attempts[0].energy() == doctest::Approx(1.25));
  CHECK(s.attempts[1].energy() == doctest::Approx(2.75));
  CHECK(s.totals.energy() ==
        doctest::Approx(s.attempts[0].energy() + s.attempts[1].energy()));
}

TEST_CASE("merge is collision-checked and order-insensitive") {
  KpiAccumulator a, b;
  a.record("s1", joules(1, 0));
  b.record("s2", joules(2, 0));

  KpiAccumulator ab = a;
  ab.merge(b);
  KpiAccumulator ba = b;
  ba.merge(a);
  CHECK(ab.aggregates().total_energy == doctest::Approx(ba.aggregates().total_energy));
  CHECK(ab.sessions().size() == 2);

  KpiAccumulator conflict;
  conflict.record("s1", joules(1, 0));
  CHECK_THROWS_AS(ab.merge(conflict), SimError);
}

TEST_CASE("aggregates match a recomputation from the exported rows") {
  KpiAccumulator acc;
  for (int i = 0; i < 7; ++i) {
    const std::string id = "w-" + std::to_string(i);
    KpiRecord r;
    r.latency = 0.1 * (i + 1);
    r.energy_compute = 0.5 * i;
    r.energy_comm = 0.25;
    acc.record(id, r);
    acc.session(id).type = "offload";
    acc.session(id).state = "done";
  }

  // Recompute the mean from the CSV rows, independent of the aggregator.
  const std::string csv = report_to_csv(acc);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  double sum_latency = 0.0, sum_energy = 0.0;
  size_t rows = 0;
  while (std::getline(in, line)) {
    // id,type,state,energy,energy_compute,energy_comm,latency,...
    size_t pos = 0;
    std::vector<std::string> cols;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        cols.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    cols.push_back(cur);
    (void)pos;
    sum_energy += std::stod(cols[3]);
    sum_latency += std::stod(cols[6]);
    ++rows;
  }
  const auto agg = acc.aggregates();
  CHECK(rows == agg.sessions);
  CHECK(agg.mean_latency == doctest::Approx(sum_latency / rows));
  CHECK(agg.total_energy == doctest::Approx(sum_energy));
  CHECK(agg.total_energy ==
        doctest::Approx(agg.total_energy_compute + agg.total_energy_comm));
}

TEST_CASE("json export is byte-stable for identical accumulators") {
  auto build = [] {
    KpiAccumulator acc;
    acc.record("a", joules(1.0, 2.0));
    acc.record("b", joules(0.5, 0.125));
    acc.session("a").type = "offload";
    acc.session("a").state = "done";
    acc.session("b").type = "offload";
    acc.session("b").state = "failed";
    return report_to_json(acc, RunMeta{9, "min_latency", 10.0});
  };
  CHECK(build() == build());
  CHECK(build().find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("empty accumulator still exports a valid document") {
  KpiAccumulator acc;
  const auto json = report_to_json(acc, RunMeta{1, "min_latency", 1.0});
  CHECK(json.find("\"sessions\": []") != std::string::npos);
  const auto csv = report_to_csv(acc);
  CHECK(csv.find("id,type,state") == 0);
}

}  // TEST_SUITE
