#include <cmath>
#include <vector>

#include "doctest.h"
#include "ringlab/fhn.hpp"
#include "ringlab/integrate.hpp"
#include "ringlab/linalg.hpp"
#include "ringlab/topology.hpp"

using namespace ringlab;
using net::CouplingConfig;
using net::FhnParams;
using net::NetworkState;
using net::Topology;

namespace {

// Dense reference: dz = a(y - b z), dy = y - g y^3 - z - sigma (L y).
std::vector<double> dense_rhs(const FhnParams& p, const CouplingConfig& c,
                              const NetworkState& s) {
  const int n = s.n();
  const Matrix lap = net::laplacian(c.topology);
  std::vector<double> ly(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      ly[static_cast<std::size_t>(i)] +=
          lap(i, j) * s.y[static_cast<std::size_t>(j)];
  std::vector<double> out(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    const double z = s.z[static_cast<std::size_t>(j)];
    const double y = s.y[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(2 * j)] = p.alpha * (y - p.beta * z);
    out[static_cast<std::size_t>(2 * j + 1)] =
        y - p.gamma * y * y * y - z - c.sigma * ly[static_cast<std::size_t>(j)];
  }
  return out;
}

NetworkState test_state(int n, std::uint64_t seed) {
  auto states = net::sample_initial_conditions(n, 1, seed);
  return states.front();
}

}  // namespace

TEST_SUITE_BEGIN("fhn");

TEST_CASE("rhs equals the dense laplacian form on every topology") {
  const FhnParams p;
  for (int variant = 0; variant < 3; ++variant) {
    Topology t = variant == 0   ? Topology::directed_chain(5)
                 : variant == 1 ? Topology::directed_ring(6)
                                : Topology::two_rings(4);
    CouplingConfig c{t, 0.85};
    auto s = test_state(t.n(), 11 + static_cast<std::uint64_t>(variant));
    auto flat = s.flat();
    std::vector<double> got(flat.size());
    net::fhn_rhs(p, c, flat, got);
    auto expected = dense_rhs(p, c, s);
    for (std::size_t i = 0; i < got.size(); ++i)
      CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-13));
  }
}

TEST_CASE("coupling term vanishes on the diagonal") {
  const FhnParams p;
  CouplingConfig c{Topology::directed_ring(7), 2.5};
  NetworkState s;
  s.z.assign(7, 0.4);
  s.y.assign(7, -1.1);
  auto coupled = net::fhn_vector_field(s, p, c);
  CouplingConfig c0{Topology::directed_ring(7), 0.0};
  auto free = net::fhn_vector_field(s, p, c0);
  for (int j = 0; j < 7; ++j) {
    CHECK(coupled.z[static_cast<std::size_t>(j)] ==
          doctest::Approx(free.z[static_cast<std::size_t>(j)]));
    CHECK(coupled.y[static_cast<std::size_t>(j)] ==
          doctest::Approx(free.y[static_cast<std::size_t>(j)]));
  }
}

TEST_CASE("uncoupled node reduces to the scalar oscillator") {
  const FhnParams p;
  CouplingConfig c{Topology::directed_chain(2), 1.5};
  NetworkState s;
  s.z = {0.3, 0.0};
  s.y = {-0.7, 0.0};
  auto f = net::fhn_vector_field(s, p, c);
  // node 0 of a chain has no inputs, so its equations are the free ones
  CHECK(f.z[0] == doctest::Approx(p.alpha * (-0.7 - p.beta * 0.3)));
  CHECK(f.y[0] ==
        doctest::Approx(-0.7 - p.gamma * std::pow(-0.7, 3) - 0.3));
}

TEST_CASE("jacobian matches central finite differences") {
  const FhnParams p;
  for (int variant = 0; variant < 2; ++variant) {
    Topology t = variant == 0 ? Topology::directed_ring(4)
                              : Topology::two_rings(3);
    const double sigma = 1.3;
    CouplingConfig c{t, sigma};
    const int dim = 2 * t.n();
    auto s = test_state(t.n(), 42 + static_cast<std::uint64_t>(variant));
    auto x = s.flat();

    Matrix sl = net::laplacian(t);
    sl *= sigma;
    Matrix jac;
    net::fhn_jacobian(p, sl, x, jac);
    REQUIRE(jac.rows() == dim);

    const double h = 1e-6;
    std::vector<double> xp(x), xm(x), fp(x.size()), fm(x.size());
    for (int col = 0; col < dim; ++col) {
      xp = x;
      xm = x;
      xp[static_cast<std::size_t>(col)] += h;
      xm[static_cast<std::size_t>(col)] -= h;
      net::fhn_rhs(p, c, xp, fp);
      net::fhn_rhs(p, c, xm, fm);
      for (int row = 0; row < dim; ++row) {
        const double fd = (fp[static_cast<std::size_t>(row)] -
                           fm[static_cast<std::size_t>(row)]) /
                          (2.0 * h);
        CHECK(jac(row, col) == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("initial conditions are deterministic and inside the box") {
  auto a = net::sample_initial_conditions(6, 10, 1234);
  auto b = net::sample_initial_conditions(6, 10, 1234);
  REQUIRE(a.size() == 10);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].z == b[k].z);
    CHECK(a[k].y == b[k].y);
    for (int j = 0; j < 6; ++j) {
      CHECK(std::abs(a[k].z[static_cast<std::size_t>(j)]) <= net::ic_z_bound);
      CHECK(std::abs(a[k].y[static_cast<std::size_t>(j)]) <= net::ic_y_bound);
    }
  }
  // draw k depends only on (seed, k), not on the count requested
  auto c = net::sample_initial_conditions(6, 3, 1234);
  CHECK(c[2].y == a[2].y);
  auto d = net::sample_initial_conditions(6, 10, 99);
  CHECK(d[0].y != a[0].y);
}

TEST_CASE("flat layout roundtrip") {
  NetworkState s;
  s.z = {1.0, 2.0, 3.0};
  s.y = {-1.0, -2.0, -3.0};
  auto flat = s.flat();
  REQUIRE(flat.size() == 6);
  CHECK(flat[0] == 1.0);
  CHECK(flat[1] == -1.0);
  CHECK(flat[4] == 3.0);
  auto back = NetworkState::from_flat(flat);
  CHECK(back.z == s.z);
  CHECK(back.y == s.y);
}

TEST_CASE("energy reporting and dissipation constants") {
  const FhnParams p;
  NetworkState s;
  s.z = {0.5, -0.5};
  s.y = {1.0, 2.0};
  auto e = net::energy(s, p);
  CHECK(e.storage[0] ==
        doctest::Approx(0.5 * (0.25 / p.alpha + 1.0)).epsilon(1e-12));
  CHECK(e.v == doctest::Approx(e.storage[0] + e.storage[1]));
  CHECK(e.supply[1] ==
        doctest::Approx(p.beta * 0.25 + 4.0 * (p.gamma * 4.0 - 1.0)));
  CHECK(net::energy_decay_rate(p) == doctest::Approx(p.alpha * p.beta));
  CHECK(net::energy_inflow_per_node(p) ==
        doctest::Approx(std::pow(p.alpha * p.beta + 1.0, 2) / (4.0 * p.gamma)));
}

TEST_CASE("trajectories stay inside the absorbing ball") {
  // semi-passivity: V eventually enters V <= n*inflow/decay and stays
  const FhnParams p;
  CouplingConfig c{Topology::directed_ring(3), 0.5};
  auto s = test_state(3, 7);
  auto field = net::make_fhn_field(p, c);
  auto traj = ode::integrate(field, s.flat(), 0.0, 400.0, {});
  const double cap =
      3.0 * net::energy_inflow_per_node(p) / net::energy_decay_rate(p);
  // after the transient the stored energy must sit below the bound
  const auto start = traj.index_at(200.0);
  for (std::size_t i = start; i < traj.size(); ++i) {
    auto st = NetworkState::from_flat(traj.state(i));
    CHECK(net::energy(st, p).v <= cap * 1.05);
  }
}

TEST_SUITE_END();
