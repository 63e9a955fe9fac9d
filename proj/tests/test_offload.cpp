#include <doctest.h>

#include "core/error.hpp"
#include "offload/selection.hpp"
#include "offload/session.hpp"
#include "sim/rng.hpp"
#include "support/oracles.hpp"

using namespace bcsim;

namespace {

ComputeWorkload reference_workload() {
  ComputeWorkload w;
  w.workload_id = "w";
  w.flops = 2e9;
  w.memory_bytes = 1e9;
  w.payload_bits = 8'000'000;
  w.result_bits = 800'000;
  w.precision = Precision::Fp32;
  w.qos_class = QosClass::PrecisionSensitive;
  return w;
}

ComputeCapability reference_capability(const std::string& id = "n1") {
  ComputeCapability cap;
  cap.node_id = id;
  cap.flops_per_second = 1e10;
  cap.memory_bytes = 8e9;
  cap.supported_precisions = {Precision::Fp16, Precision::Fp32};
  cap.link_bw_up = 1e8;
  cap.link_bw_down = 1e8;
  cap.energy_per_flop = 1e-9;
  cap.energy_per_bit = 1e-8;
  cap.current_load = 0.0;
  return cap;
}

ComputeCapability random_capability(Rng& rng, int index) {
  ComputeCapability cap;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "node-%03d", index);
  cap.node_id = buf;
  cap.flops_per_second = rng.uniform(1e9, 5e10);
  cap.memory_bytes = rng.uniform(1e8, 1e10);
  if (rng.next_double() < 0.8) cap.supported_precisions.insert(Precision::Fp32);
  if (rng.next_double() < 0.5) cap.supported_precisions.insert(Precision::Fp16);
  if (rng.next_double() < 0.3) cap.supported_precisions.insert(Precision::Int8);
  if (cap.supported_precisions.empty()) {
    cap.supported_precisions.insert(Precision::Fp64);
  }
  cap.link_bw_up = rng.uniform(1e7, 1e9);
  cap.link_bw_down = rng.uniform(1e7, 1e9);
  cap.energy_per_flop = rng.uniform(0.0, 5e-9);
  cap.energy_per_bit = rng.uniform(0.0, 1e-7);
  cap.current_load = rng.next_double() < 0.1 ? 1.0 : rng.uniform(0.0, 0.95);
  return cap;
}

}  // namespace

TEST_SUITE("offload") {

TEST_CASE("registry keeps the latest advertisement per node") {
  CapabilityRegistry reg;
  auto cap = reference_capability();
  reg.advertise(cap, 0.0);
  CHECK(reg.size() == 1);

  cap.current_load = 0.5;
  reg.advertise(cap, 1.0);
  CHECK(reg.size() == 1);
  CHECK(reg.find("n1")->current_load == doctest::Approx(0.5));
  CHECK(reg.last_advertised("n1") == doctest::Approx(1.0));

  reg.advertise(cap, 1.0);  // identical re-advertisement
  CHECK(reg.size() == 1);
  CHECK(reg.find("n1")->current_load == doctest::Approx(0.5));

  auto other = reference_capability("n2");
  reg.advertise(other, 2.0);
  CHECK(reg.size() == 2);
}

TEST_CASE("latency estimate is upload + compute + download") {
  const auto w = reference_workload();
  auto cap = reference_capability();
  CHECK(estimate_latency(w, cap) == doctest::Approx(0.288).epsilon(1e-12));

  cap.current_load = 0.5;
  CHECK(estimate_latency(w, cap) == doctest::Approx(0.488).epsilon(1e-12));

  cap.current_load = 1.0;
  CHECK_THROWS_AS(estimate_latency(w, cap), SimError);
  try {
    estimate_latency(w, cap);
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::InfeasibleLoad);
  }
}

TEST_CASE("energy estimate covers compute and both transfers") {
  const auto w = reference_workload();
  auto cap = reference_capability();
  CHECK(estimate_energy(w, cap) == doctest::Approx(2.088).epsilon(1e-12));

  cap.energy_per_bit = 0.0;
  CHECK(estimate_energy(w, cap) == doctest::Approx(2.0));

  auto no_compute = reference_workload();
  no_compute.flops = 1.0;  // negligible
  cap.energy_per_bit = 1e-8;
  CHECK(estimate_energy(no_compute, cap) ==
        doctest::Approx(8.8e6 * 1e-8).epsilon(1e-9));
}

TEST_CASE("selection picks the policy minimizer over feasible nodes") {
  CapabilityRegistry reg;
  reg.advertise(reference_capability("fast"), 0.0);  // 0.288 s
  auto slow = reference_capability("slow");
  slow.current_load = 0.5;  // 0.488 s
  reg.advertise(slow, 0.0);

  const auto w = reference_workload();
  CHECK(select_compute_nodes(w, reg, OffloadPolicy::MinLatency) ==
        std::vector<NodeId>{"fast"});

  // Deadline tighter than the best latency: nothing is feasible.
  auto strict = w;
  strict.qos_class = QosClass::LatencySensitive;
  strict.deadline = 0.1;
  CHECK_THROWS_AS(select_compute_nodes(strict, reg, OffloadPolicy::MinLatency),
                  SimError);

  // A node missing the required precision is excluded before costing.
  auto fp16_only = w;
  fp16_only.precision = Precision::Fp16;
  auto no16 = reference_capability("no16");
  no16.supported_precisions = {Precision::Fp32};
  no16.flops_per_second = 1e12;  // would win on latency if eligible
  CapabilityRegistry reg2;
  reg2.advertise(no16, 0.0);
  reg2.advertise(reference_capability("fast"), 0.0);
  CHECK(select_compute_nodes(fp16_only, reg2, OffloadPolicy::MinLatency) ==
        std::vector<NodeId>{"fast"});
}

TEST_CASE("selection matches brute force on random registries") {
  Rng rng(2025);
  for (int trial = 0; trial < 300; ++trial) {
    CapabilityRegistry reg;
    std::vector<ComputeCapability> caps;
    const int n = 1 + static_cast<int>(rng.next_below(50));
    for (int i = 0; i < n; ++i) {
      auto cap = random_capability(rng, i);
      caps.push_back(cap);
      reg.advertise(cap, 0.0);
    }
    ComputeWorkload w = reference_workload();
    w.flops = rng.uniform(1e8, 1e11);
    w.memory_bytes = rng.uniform(1e7, 5e9);
    w.payload_bits = 1 + rng.next_below(100'000'000);
    w.result_bits = 1 + rng.next_below(10'000'000);
    w.precision = rng.next_double() < 0.5 ? Precision::Fp32 : Precision::Fp16;
    if (rng.next_double() < 0.3) {
      w.qos_class = QosClass::LatencySensitive;
      w.deadline = rng.uniform(0.05, 5.0);
    }
    const bool multi = rng.next_double() < 0.3;
    w.traffic_class = multi ? TrafficClass::OneTimeMultiNode
                            : TrafficClass::OneTimeOneNode;
    const int fanout = multi ? 2 + static_cast<int>(rng.next_below(3)) : 1;

    const auto expected =
        oracle::brute_force_select(w, caps, true, multi ? fanout : 1);
    if (expected.empty()) {
      CHECK_THROWS_AS(
          select_compute_nodes(w, reg, OffloadPolicy::MinLatency, fanout), SimError);
    } else {
      CHECK(select_compute_nodes(w, reg, OffloadPolicy::MinLatency, fanout) ==
            expected);
    }

    const auto expected_energy =
        oracle::brute_force_select(w, caps, false, multi ? fanout : 1);
    if (expected_energy.empty()) {
      CHECK_THROWS_AS(
          select_compute_nodes(w, reg, OffloadPolicy::MinEnergy, fanout), SimError);
    } else {
      CHECK(select_compute_nodes(w, reg, OffloadPolicy::MinEnergy, fanout) ==
            expected_energy);
    }
  }
}

TEST_CASE("cost ties break on the lowest node id") {
  CapabilityRegistry reg;
  reg.advertise(reference_capability("twin-b"), 0.0);
  reg.advertise(reference_capability("twin-a"), 0.0);
  reg.advertise(reference_capability("twin-c"), 0.0);
  const auto w = reference_workload();
  CHECK(select_compute_nodes(w, reg, OffloadPolicy::MinLatency) ==
        std::vector<NodeId>{"twin-a"});
  auto multi = w;
  multi.traffic_class = TrafficClass::OneTimeMultiNode;
  CHECK(select_compute_nodes(multi, reg, OffloadPolicy::MinEnergy, 2) ==
        std::vector<NodeId>{"twin-a", "twin-b"});
}

TEST_CASE("failed nodes drop out of the live registry") {
  CapabilityRegistry reg;
  reg.advertise(reference_capability("fast"), 0.0);
  reg.advertise(reference_capability("backup"), 0.0);
  reg.mark_failed("fast");
  const auto w = reference_workload();
  CHECK(select_compute_nodes(w, reg, OffloadPolicy::MinLatency) ==
        std::vector<NodeId>{"backup"});
}

TEST_CASE("offload state machine walks the staged procedure") {
  OffloadSession s;
  s.advance(OffloadState::DiscoveryPhase2);
  s.advance(OffloadState::Offloading);
  s.advance(OffloadState::Computing);
  s.advance(OffloadState::Returning);
  s.advance(OffloadState::Done);
  CHECK_THROWS_AS(s.advance(OffloadState::Offloading), SimError);

  OffloadSession resilient;
  resilient.advance(OffloadState::DiscoveryPhase2);
  resilient.advance(OffloadState::Offloading);
  resilient.advance(OffloadState::Computing);
  resilient.advance(OffloadState::Failed);
  resilient.advance(OffloadState::Reassigned);
  resilient.advance(OffloadState::Offloading);
  resilient.advance(OffloadState::Computing);
  resilient.advance(OffloadState::Returning);
  resilient.advance(OffloadState::Done);

  OffloadSession bad;
  CHECK_THROWS_AS(bad.advance(OffloadState::Computing), SimError);
}

}  // TEST_SUITE
