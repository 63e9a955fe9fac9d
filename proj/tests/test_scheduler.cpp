#include <doctest.h>

#include "core/error.hpp"
#include "sched/joint_scheduler.hpp"
#include "sim/rng.hpp"

using namespace bcsim;

TEST_SUITE("sched") {

TEST_CASE("under-capacity demands are granted fully") {
  CellResourceState cell{"c", 1.0, 0.3, 0.3, 1.0, 1.0};
  const auto shares = allocate(cell);
  CHECK(shares.comm == doctest::Approx(0.3));
  CHECK(shares.sensing == doctest::Approx(0.3));
}

TEST_CASE("over-capacity demands scale proportionally") {
  CellResourceState cell{"c", 1.0, 0.9, 0.3, 1.0, 1.0};
  const auto shares = allocate(cell);
  CHECK(shares.comm == doctest::Approx(0.75));
  CHECK(shares.sensing == doctest::Approx(0.25));
}

TEST_CASE("weighted split caps at demand and redistributes the surplus once") {
  // Hand-computed: raw shares (0.6, 0.4); sensing capped at its 0.3 demand
  // frees 0.1, which communication absorbs up to its own demand.
  CellResourceState cell{"c", 1.0, 0.9, 0.3, 1.0, 2.0};
  const auto shares = allocate(cell);
  CHECK(shares.comm == doctest::Approx(0.7));
  CHECK(shares.sensing == doctest::Approx(0.3));
}

TEST_CASE("surplus redistribution works in the mirrored direction too") {
  // Communication capped at its 0.3 demand; sensing absorbs the surplus.
  CellResourceState cell{"c", 1.0, 0.3, 0.9, 2.0, 1.0};
  const auto shares = allocate(cell);
  CHECK(shares.comm == doctest::Approx(0.3));
  CHECK(shares.sensing == doctest::Approx(0.7));
}

TEST_CASE("conservation and monotonicity over random demands") {
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    CellResourceState cell{"c", rng.uniform(0.1, 1.0), rng.uniform(0.0, 2.0),
                           rng.uniform(0.0, 2.0), rng.uniform(0.1, 5.0),
                           rng.uniform(0.1, 5.0)};
    const auto shares = allocate(cell);
    CHECK(shares.comm >= 0.0);
    CHECK(shares.sensing >= 0.0);
    CHECK(shares.comm + shares.sensing <= cell.capacity + 1e-12);
    CHECK(shares.comm <= cell.comm_demand + 1e-12);
    CHECK(shares.sensing <= cell.sensing_demand + 1e-12);

    // Raising sensing demand never lowers the sensing share.
    CellResourceState more = cell;
    more.sensing_demand += rng.uniform(0.0, 1.0);
    CHECK(allocate(more).sensing >= shares.sensing - 1e-12);
  }
}

TEST_CASE("uniform weight scaling leaves shares unchanged") {
  Rng rng(23);
  for (int i = 0; i < 500; ++i) {
    CellResourceState cell{"c", 1.0, rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0),
                           rng.uniform(0.1, 4.0), rng.uniform(0.1, 4.0)};
    const auto base = allocate(cell);
    const double k = rng.uniform(0.5, 10.0);
    CellResourceState scaled = cell;
    scaled.w_comm *= k;
    scaled.w_sens *= k;
    const auto again = allocate(scaled);
    CHECK(again.comm == doctest::Approx(base.comm));
    CHECK(again.sensing == doctest::Approx(base.sensing));
  }
}

TEST_CASE("sensing noise scales as inverse square root of the share") {
  CHECK(effective_noise_std(0.5, 1.0) == doctest::Approx(0.5));
  CHECK(effective_noise_std(0.5, 0.25) == doctest::Approx(1.0));
  CHECK_THROWS_AS(effective_noise_std(0.5, 0.0), SimError);
  try {
    effective_noise_std(0.5, 0.0);
  } catch (const SimError& e) {
    CHECK(e.code() == ErrorCode::SensingStarved);
  }
}

TEST_CASE("communication share scales the data-plane bandwidth") {
  CHECK(effective_bandwidth(1e8, 1.0) == doctest::Approx(1e8));
  CHECK(effective_bandwidth(1e8, 0.5) == doctest::Approx(5e7));
  CHECK(effective_bandwidth(1e8, 0.0) == 0.0);
}

}  // TEST_SUITE
