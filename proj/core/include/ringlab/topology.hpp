#pragma once

#include <utility>
#include <vector>

#include "ringlab/linalg.hpp"

namespace ringlab::net {

enum class TopologyKind { DirectedChain, DirectedRing, TwoRings, Custom };

// Directed coupling graph.  adjacency()(j, l) is the weight with which node
// j listens to node l (edge l -> j).
class Topology {
public:
  static Topology directed_chain(int n);
  static Topology directed_ring(int n);
  // Two directed rings of k nodes each (nodes 0..k-1 and k..2k-1) joined by
  // a symmetric unit-weight link between node 0 and node k.
  static Topology two_rings(int k);
  static Topology custom(Matrix adjacency);

  TopologyKind kind() const { return kind_; }
  int n() const { return q_.rows(); }
  int ring_size() const;                // k for TwoRings
  const Matrix& adjacency() const { return q_; }

private:
  Topology(TopologyKind kind, Matrix q) : kind_(kind), q_(std::move(q)) {}
  TopologyKind kind_;
  Matrix q_;
};

const char* to_string(TopologyKind k);

// Graph Laplacian L = Diag(row sums of Q) - Q, so that the diffusive
// coupling is u = -sigma * L * y.
Matrix laplacian(const Topology& t);

// Coupling strength above which full synchronization is guaranteed:
// 1 for the chain (any length), 1/(1 - cos(2*pi/n)) for the ring.
// Throws UnsupportedTopologyError for the other kinds.
double sync_threshold(const Topology& t);

// Ordered pairs (upstream, downstream) used for neighbour error and phase
// shift measurements: consecutive nodes for chains, consecutive nodes plus
// the wrap-around for rings, and each sub-ring (plus the bridge) for the
// coupled pair of rings.  For custom graphs, one pair per edge.
std::vector<std::pair<int, int>> neighbour_pairs(const Topology& t);

struct CouplingConfig {
  Topology topology;
  double sigma = 0.0;
};

}  // namespace ringlab::net
