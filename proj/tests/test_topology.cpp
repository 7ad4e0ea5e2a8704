#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ringlab/errors.hpp"
#include "ringlab/topology.hpp"

using namespace ringlab;
using net::Topology;

TEST_SUITE_BEGIN("topology");

TEST_CASE("chain wiring and laplacian") {
  auto t = Topology::directed_chain(4);
  CHECK(t.n() == 4);
  const Matrix& q = t.adjacency();
  // node 0 is the free leader; node j listens to j-1
  for (int l = 0; l < 4; ++l) CHECK(q(0, l) == 0.0);
  CHECK(q(1, 0) == 1.0);
  CHECK(q(2, 1) == 1.0);
  CHECK(q(3, 2) == 1.0);

  Matrix lap = net::laplacian(t);
  CHECK(lap(0, 0) == 0.0);
  CHECK(lap(1, 1) == 1.0);
  CHECK(lap(1, 0) == -1.0);
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += lap(i, j);
    CHECK(row == doctest::Approx(0.0));
  }
}

TEST_CASE("ring wiring wraps around") {
  auto t = Topology::directed_ring(5);
  const Matrix& q = t.adjacency();
  CHECK(q(0, 4) == 1.0);
  for (int j = 1; j < 5; ++j) CHECK(q(j, j - 1) == 1.0);
  int edges = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) edges += q(i, j) != 0.0 ? 1 : 0;
  CHECK(edges == 5);
}

TEST_CASE("two rings share a symmetric bridge") {
  auto t = Topology::two_rings(3);
  CHECK(t.n() == 6);
  CHECK(t.ring_size() == 3);
  const Matrix& q = t.adjacency();
  CHECK(q(0, 3) == 1.0);
  CHECK(q(3, 0) == 1.0);
  CHECK(q(0, 2) == 1.0);  // ring 1 wrap 2 -> 0
  CHECK(q(3, 5) == 1.0);  // ring 2 wrap 5 -> 3
  CHECK_THROWS_AS(Topology::two_rings(1), DomainError);
}

TEST_CASE("sync thresholds") {
  using std::numbers::pi;
  CHECK(net::sync_threshold(Topology::directed_chain(2)) == doctest::Approx(1.0));
  CHECK(net::sync_threshold(Topology::directed_chain(50)) == doctest::Approx(1.0));
  CHECK(net::sync_threshold(Topology::directed_ring(3)) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(net::sync_threshold(Topology::directed_ring(4)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(net::sync_threshold(Topology::directed_ring(20)) ==
        doctest::Approx(1.0 / (1.0 - std::cos(pi / 10.0))).epsilon(1e-12));
  CHECK_THROWS_AS(net::sync_threshold(Topology::two_rings(3)),
                  UnsupportedTopologyError);
}

TEST_CASE("neighbour pairs per topology") {
  auto chain = net::neighbour_pairs(Topology::directed_chain(4));
  REQUIRE(chain.size() == 3);
  CHECK(chain[0] == std::pair<int, int>(0, 1));
  CHECK(chain[2] == std::pair<int, int>(2, 3));

  auto ring = net::neighbour_pairs(Topology::directed_ring(4));
  REQUIRE(ring.size() == 4);
  CHECK(ring[3] == std::pair<int, int>(3, 0));

  auto pair = net::neighbour_pairs(Topology::two_rings(3));
  CHECK(pair.size() == 7);  // 3 + 3 + bridge
}

TEST_CASE("degenerate sizes are rejected") {
  CHECK_THROWS_AS(Topology::directed_chain(1), DomainError);
  CHECK_THROWS_AS(Topology::directed_ring(1), DomainError);
}

TEST_CASE("custom adjacency roundtrip") {
  Matrix q(3, 3);
  q(1, 0) = 2.0;
  q(2, 1) = 0.5;
  auto t = Topology::custom(q);
  CHECK(t.kind() == net::TopologyKind::Custom);
  auto pairs = net::neighbour_pairs(t);
  CHECK(pairs.size() == 2);
  Matrix lap = net::laplacian(t);
  CHECK(lap(1, 1) == 2.0);
  CHECK(lap(1, 0) == -2.0);
}

TEST_SUITE_END();
