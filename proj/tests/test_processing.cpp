#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "sched/joint_scheduler.hpp"
#include "sensing/processing.hpp"
#include "sim/rng.hpp"
#include "support/oracles.hpp"

using namespace bcsim;

namespace {

GeometryConfig triangle_geometry(const SensingArea& area) {
  GeometryConfig g;
  g.mode = SensingMode::Bistatic;
  g.area = area;
  g.node_positions["n1"] = {0.0, 0.0};
  g.node_positions["n2"] = {400.0, 0.0};
  g.node_positions["n3"] = {0.0, 400.0};
  return g;
}

std::vector<SensingMeasurement> noiseless_set(const GeometryConfig& g,
                                              const Position& target,
                                              double quality = 1.0) {
  const std::vector<std::pair<NodeId, NodeId>> pairs = {
      {"n1", "n2"}, {"n2", "n3"}, {"n3", "n1"}};
  std::vector<SensingMeasurement> ms;
  for (const auto& [tx, rx] : pairs) {
    ms.push_back(SensingMeasurement{
        tx, rx,
        forward_range(g.node_positions.at(tx), g.node_positions.at(rx), target,
                      g.mode),
        quality, 0.0});
  }
  return ms;
}

}  // namespace

TEST_SUITE("sensing") {

TEST_CASE("forward range in both operating modes") {
  // Symmetric bistatic target: both legs are sqrt(50).
  CHECK(forward_range({0, 0}, {10, 0}, {5, 5}, SensingMode::Bistatic) ==
        doctest::Approx(2.0 * std::sqrt(50.0)));
  // Degenerate: the target sits on the receiver, range equals the baseline.
  CHECK(forward_range({0, 0}, {10, 0}, {10, 0}, SensingMode::Bistatic) ==
        doctest::Approx(10.0));
  CHECK(forward_range({0, 0}, {0, 0}, {3, 4}, SensingMode::Monostatic) ==
        doctest::Approx(10.0));
}

TEST_CASE("bistatic range never undercuts the baseline") {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    Position tx{rng.uniform(-300, 300), rng.uniform(-300, 300)};
    Position rx{rng.uniform(-300, 300), rng.uniform(-300, 300)};
    Position target{rng.uniform(-300, 300), rng.uniform(-300, 300)};
    CHECK(forward_range(tx, rx, target, SensingMode::Bistatic) >=
          distance(tx, rx) - 1e-9);
  }
}

TEST_CASE("measurement generation: noiseless, scaled noise, clamping") {
  Rng rng(11);
  const Position tx{0, 0}, rx{100, 0}, target{50, 40};

  auto noiseless = generate_measurement(tx, rx, "a", "b", target,
                                        SensingMode::Bistatic, 0.0, 0.8, 1.5, rng);
  CHECK(noiseless.range ==
        doctest::Approx(forward_range(tx, rx, target, SensingMode::Bistatic)));
  CHECK(noiseless.quality == doctest::Approx(0.8));
  CHECK(noiseless.timestamp == doctest::Approx(1.5));

  // A large negative noise draw cannot push the range below the baseline.
  for (int i = 0; i < 2000; ++i) {
    auto m = generate_measurement(tx, rx, "a", "b", target, SensingMode::Bistatic,
                                  500.0, 1.0, 0.0, rng);
    CHECK(m.range >= distance(tx, rx));
  }
  for (int i = 0; i < 2000; ++i) {
    auto m = generate_measurement(tx, tx, "a", "a", target, SensingMode::Monostatic,
                                  500.0, 1.0, 0.0, rng);
    CHECK(m.range >= 0.0);
  }
}

TEST_CASE("effective noise std follows the granted share") {
  CHECK(effective_noise_std(0.5, 0.25) == doctest::Approx(1.0));
}

TEST_CASE("localize recovers a noiseless target to sub-micron accuracy") {
  const SensingArea area{{150, 150}, 100.0};
  const GeometryConfig g = triangle_geometry(area);
  const Position target{170.0, 140.0};
  const auto ms = noiseless_set(g, target);

  const TargetEstimate est = localize(ms, g);
  CHECK(est.converged);
  CHECK(distance(est.position, target) < 1e-6);
  CHECK(est.residual_rms < 1e-6);
  CHECK(est.confidence == doctest::Approx(std::exp(-est.residual_rms / area.radius)));

  // Grid + bisection oracle lands on the same point.
  const Position oracle_pos = oracle::grid_bisection_localize(ms, g);
  CHECK(distance(est.position, oracle_pos) < 1e-6);
}

TEST_CASE("monostatic localization recovers a noiseless target") {
  const SensingArea area{{150, 150}, 100.0};
  GeometryConfig g = triangle_geometry(area);
  g.mode = SensingMode::Monostatic;
  const Position target{110.0, 190.0};
  std::vector<SensingMeasurement> ms;
  for (const auto& id : {"n1", "n2", "n3"}) {
    ms.push_back(SensingMeasurement{
        id, id,
        forward_range(g.node_positions.at(id), g.node_positions.at(id), target,
                      g.mode),
        1.0, 0.0});
  }
  const auto est = localize(ms, g);
  CHECK(est.converged);
  CHECK(distance(est.position, target) < 1e-6);
}

TEST_CASE("localize needs three distinct pairs") {
  const SensingArea area{{150, 150}, 100.0};
  const GeometryConfig g = triangle_geometry(area);
  const Position target{170.0, 140.0};
  std::vector<SensingMeasurement> ms;
  for (int i = 0; i < 5; ++i) {
    ms.push_back(SensingMeasurement{
        "n1", "n2",
        forward_range(g.node_positions.at("n1"), g.node_positions.at("n2"), target,
                      g.mode),
        1.0, 0.0});
  }
  CHECK_THROWS_AS(localize(ms, g), SimError);
  try {
    localize(ms, g);
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::TooFewPairs);
  }
}

TEST_CASE("duplicating a measurement equals doubling its weight") {
  const SensingArea area{{150, 150}, 100.0};
  const GeometryConfig g = triangle_geometry(area);
  const Position target{120.0, 180.0};
  auto base = noiseless_set(g, target);
  base[0].range += 2.0;  // bias one observation so the weights matter

  auto duplicated = base;
  duplicated.push_back(base[0]);

  auto reweighted = base;
  reweighted[0].quality = 2.0 * base[0].quality;

  const auto a = localize(duplicated, g);
  const auto b = localize(reweighted, g);
  CHECK(distance(a.position, b.position) < 1e-7);
}

TEST_CASE("uniform weight scaling does not move the estimate") {
  const SensingArea area{{150, 150}, 100.0};
  const GeometryConfig g = triangle_geometry(area);
  const Position target{120.0, 180.0};
  auto ms = noiseless_set(g, target, 0.25);
  ms[1].range += 1.0;

  const auto base = localize(ms, g);
  for (auto& m : ms) m.quality *= 7.5;
  const auto scaled = localize(ms, g);
  CHECK(distance(base.position, scaled.position) < 1e-7);
  CHECK(scaled.residual_rms == doctest::Approx(base.residual_rms));
}

TEST_CASE("more pairs mitigate noise (median over seeds)") {
  const SensingArea area{{0, 0}, 100.0};
  GeometryConfig g;
  g.mode = SensingMode::Bistatic;
  g.area = area;
  const std::vector<Position> ring = {
      {250, 0}, {125, 217}, {-125, 217}, {-250, 0}, {-125, -217}, {125, -217}};
  for (size_t i = 0; i < ring.size(); ++i) {
    g.node_positions["n" + std::to_string(i)] = ring[i];
  }

  auto run_errors = [&](int pairs, uint64_t seed) {
    Rng rng(seed);
    const Position target{rng.uniform(-50, 50), rng.uniform(-50, 50)};
    std::vector<SensingMeasurement> ms;
    for (int p = 0; p < pairs; ++p) {
      const NodeId tx = "n" + std::to_string(p % 6);
      const NodeId rx = "n" + std::to_string((p + 1) % 6);
      ms.push_back(generate_measurement(g.node_positions.at(tx),
                                        g.node_positions.at(rx), tx, rx, target,
                                        g.mode, 1.0, 1.0, 0.0, rng));
    }
    return distance(localize(ms, g).position, target);
  };

  std::vector<double> err3, err6;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    err3.push_back(run_errors(3, seed));
    err6.push_back(run_errors(6, seed));
  }
  CHECK(oracle::median(err6) <= oracle::median(err3));
}

TEST_CASE("privacy filter keeps exactly the in-area estimates") {
  const SensingArea area{{0, 0}, 50.0};
  std::vector<TargetEstimate> est(3);
  est[0].position = {0, 0};
  est[1].position = {50.0 + 1e-9, 0};  // just outside
  est[2].position = {30, 30};          // inside (distance ~42.4)
  const auto kept = privacy_filter(est, area);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].position.x == 0);
  CHECK(kept[1].position.x == 30);

  CHECK(privacy_filter({}, area).empty());

  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    TargetEstimate e;
    e.position = {rng.uniform(-100, 100), rng.uniform(-100, 100)};
    for (const auto& k : privacy_filter({e}, area)) {
      CHECK(distance(k.position, area.center) <= area.radius);
    }
  }
}

TEST_CASE("round fusion is a confidence-weighted centroid") {
  TargetEstimate a;
  a.position = {0, 0};
  a.confidence = 0.5;
  TargetEstimate b;
  b.position = {2, 0};
  b.confidence = 0.5;
  auto fused = fuse_rounds("req", {a, b}, 9.0);
  REQUIRE(fused.estimates.size() == 1);
  CHECK(fused.estimates[0].position.x == doctest::Approx(1.0));
  CHECK(fused.timestamp == doctest::Approx(9.0));

  auto single = fuse_rounds("req", {a}, 1.0);
  CHECK(single.estimates[0].position.x == doctest::Approx(a.position.x));
  CHECK(single.estimates[0].confidence == doctest::Approx(a.confidence));

  // Zero-confidence rounds drop out of the centroid entirely.
  TargetEstimate zero;
  zero.position = {9, 9};
  zero.confidence = 0.0;
  TargetEstimate one;
  one.position = {0, 0};
  one.confidence = 1.0;
  auto excl = fuse_rounds("req", {one, zero}, 2.0);
  CHECK(excl.estimates[0].position.x == doctest::Approx(0.0));
  CHECK(excl.estimates[0].position.y == doctest::Approx(0.0));

  CHECK(fuse_rounds("req", {}, 0.0).estimates.empty());
}

}  // TEST_SUITE
