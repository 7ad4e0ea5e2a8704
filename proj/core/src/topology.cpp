#include "ringlab/topology.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ringlab/errors.hpp"

namespace ringlab::net {

Topology Topology::directed_chain(int n) {
  if (n < 2) throw DomainError("directed_chain: need n >= 2");
  Matrix q(n, n);
  for (int j = 1; j < n; ++j) q(j, j - 1) = 1.0;
  return Topology(TopologyKind::DirectedChain, std::move(q));
}

Topology Topology::directed_ring(int n) {
  if (n < 2) throw DomainError("directed_ring: need n >= 2");
  Matrix q(n, n);
  for (int j = 0; j < n; ++j) q(j, (j + n - 1) % n) = 1.0;
  return Topology(TopologyKind::DirectedRing, std::move(q));
}

Topology Topology::two_rings(int k) {
  if (k < 2) throw DomainError("two_rings: need k >= 2");
  const int n = 2 * k;
  Matrix q(n, n);
  for (int j = 0; j < k; ++j) q(j, (j + k - 1) % k) = 1.0;
  for (int j = 0; j < k; ++j) q(k + j, k + (j + k - 1) % k) = 1.0;
  q(0, k) = 1.0;
  q(k, 0) = 1.0;
  return Topology(TopologyKind::TwoRings, std::move(q));
}

Topology Topology::custom(Matrix adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw DomainError("custom topology: adjacency must be square");
  if (adjacency.rows() < 2) throw DomainError("custom topology: need n >= 2");
  for (int i = 0; i < adjacency.rows(); ++i) {
    if (adjacency(i, i) != 0.0)
      throw DomainError("custom topology: self loops are not allowed");
    for (int j = 0; j < adjacency.cols(); ++j)
      if (adjacency(i, j) < 0.0)
        throw DomainError("custom topology: negative weight at (" +
                          std::to_string(i) + "," + std::to_string(j) + ")");
  }
  return Topology(TopologyKind::Custom, std::move(adjacency));
}

int Topology::ring_size() const {
  if (kind_ != TopologyKind::TwoRings)
    throw UnsupportedTopologyError("ring_size: only defined for TwoRings");
  return n() / 2;
}

const char* to_string(TopologyKind k) {
  switch (k) {
    case TopologyKind::DirectedChain: return "chain";
    case TopologyKind::DirectedRing: return "ring";
    case TopologyKind::TwoRings: return "two-rings";
    case TopologyKind::Custom: return "custom";
  }
  return "?";
}

Matrix laplacian(const Topology& t) {
  const int n = t.n();
  const Matrix& q = t.adjacency();
  Matrix l(n, n);
  for (int j = 0; j < n; ++j) {
    double deg = 0.0;
    for (int m = 0; m < n; ++m) {
      deg += q(j, m);
      l(j, m) = -q(j, m);
    }
    l(j, j) += deg;
  }
  return l;
}

double sync_threshold(const Topology& t) {
  switch (t.kind()) {
    case TopologyKind::DirectedChain:
      return 1.0;
    case TopologyKind::DirectedRing:
      return 1.0 / (1.0 - std::cos(2.0 * std::numbers::pi / t.n()));
    default:
      throw UnsupportedTopologyError(
          "sync_threshold: no closed form for this topology");
  }
}

std::vector<std::pair<int, int>> neighbour_pairs(const Topology& t) {
  std::vector<std::pair<int, int>> pairs;
  const int n = t.n();
  switch (t.kind()) {
    case TopologyKind::DirectedChain:
      for (int j = 0; j + 1 < n; ++j) pairs.emplace_back(j, j + 1);
      break;
    case TopologyKind::DirectedRing:
      for (int j = 0; j < n; ++j) pairs.emplace_back(j, (j + 1) % n);
      break;
    case TopologyKind::TwoRings: {
      const int k = n / 2;
      for (int j = 0; j < k; ++j) pairs.emplace_back(j, (j + 1) % k);
      for (int j = 0; j < k; ++j) pairs.emplace_back(k + j, k + (j + 1) % k);
      pairs.emplace_back(0, k);
      break;
    }
    case TopologyKind::Custom: {
      const Matrix& q = t.adjacency();
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          if (q(j, l) > 0.0) pairs.emplace_back(l, j);
      break;
    }
  }
  return pairs;
}

}  // namespace ringlab::net
