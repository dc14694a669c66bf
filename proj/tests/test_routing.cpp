#include <doctest.h>

#include <set>
#include <sstream>

#include "eprnet/errors.hpp"
#include "eprnet/netgraph.hpp"
#include "eprnet/routing.hpp"
#include "eprnet/topology.hpp"
#include "eprnet/util.hpp"
#include "oracles.hpp"

using namespace eprnet;
using doctest::Approx;

namespace {

topo::Topology four_cycle() {
  topo::Topology t;
  t.labels = {"S", "B", "C", "D"};
  t.edges = {{0, 1, 5.0}, {1, 2, 5.0}, {2, 3, 5.0}, {0, 3, 5.0}};
  t.fiber_alpha = 0.4;
  return t;
}

}  // namespace

TEST_SUITE("routing") {

TEST_CASE("four-cycle hand cases") {
  const auto g = netgraph::expand(four_cycle(), 0, 4.0);
  const auto bd = routing::shortest_disjoint_pair(g, 1, 3);
  CHECK(bd.loss_db == Approx(28.0).epsilon(1e-12));
  const auto bc = routing::shortest_disjoint_pair(g, 1, 2);
  CHECK(bc.loss_db == Approx(38.0).epsilon(1e-12));
  CHECK(bc.eta == Approx(netgraph::transmittance(38.0)));
  // (i, j) and (j, i) name the same route pair.
  const auto cb = routing::shortest_disjoint_pair(g, 2, 1);
  CHECK(cb.i == bc.i);
  CHECK(cb.j == bc.j);
  CHECK(cb.loss_db == bc.loss_db);
  CHECK(cb.path_i == bc.path_i);
  CHECK(cb.path_j == bc.path_j);
}

TEST_CASE("matches exhaustive enumeration on random topologies") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = oracles::random_admissible_topology(rng);
    const double l_wss = (trial % 3) * 4.0;  // 0, 4, 8 dB
    const std::size_t source = rng.bounded(t.n());
    const auto g = netgraph::expand(t, source, l_wss);
    const auto table = routing::route_all(g);
    CHECK(table.kappa() == t.n() * (t.n() - 1) / 2);
    for (const auto& route : table.routes) {
      const double oracle =
          oracles::disjoint_pair_loss(t, source, route.i, route.j, l_wss);
      CHECK(route.loss_db == Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("paths share no arc and losses recompute from the arcs") {
  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = oracles::random_admissible_topology(rng);
    const auto g = netgraph::expand(t, rng.bounded(t.n()), 4.0);
    const auto table = routing::route_all(g);
    for (const auto& route : table.routes) {
      std::set<std::uint32_t> seen(route.path_i.begin(), route.path_i.end());
      CHECK(seen.size() == route.path_i.size());
      for (std::uint32_t a : route.path_j) {
        CHECK(seen.insert(a).second);
      }
      double loss = 0.0;
      for (std::uint32_t a : route.path_i) loss += g.arcs[a].weight_db;
      for (std::uint32_t a : route.path_j) loss += g.arcs[a].weight_db;
      CHECK(loss == route.loss_db);
      CHECK(route.eta == netgraph::transmittance(route.loss_db));
    }
  }
}

TEST_CASE("route table covers every pair of the ILEC network") {
  const auto t = topo::load_ilec();
  const auto g = netgraph::expand(t, t.index_of("M"), 8.0);
  const auto table = routing::route_all(g);
  CHECK(table.kappa() == 136);
  for (double eta : table.lambda) {
    CHECK(eta > 0.0);
    CHECK(eta <= 1.0);
  }
  // Deterministic across runs.
  const auto again = routing::route_all(g);
  for (std::size_t p = 0; p < table.routes.size(); ++p) {
    CHECK(table.routes[p].path_i == again.routes[p].path_i);
    CHECK(table.routes[p].path_j == again.routes[p].path_j);
  }
}

TEST_CASE("uniform ring looks the same from every source") {
  topo::WattsStrogatzSpec spec;
  spec.n = 10;
  spec.k = 2;
  spec.beta = 0.0;
  spec.seed = 4;
  const auto ring = topo::generate_ws(spec);
  std::vector<double> reference;
  for (std::size_t source = 0; source < ring.n(); ++source) {
    auto table = routing::route_all(netgraph::expand(ring, source, 4.0));
    std::sort(table.lambda.begin(), table.lambda.end());
    if (source == 0) {
      reference = table.lambda;
    } else {
      CHECK(reference == table.lambda);
    }
  }
}

TEST_CASE("pairs without disjoint paths are a structured error") {
  // Path graph A - B - C: from source A the pair (B, C) must reuse the
  // A-B fiber for both photons.
  topo::Topology path;
  path.labels = {"A", "B", "C"};
  path.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  path.fiber_alpha = 0.4;
  const auto g = netgraph::expand(path, 0, 4.0);
  CHECK_THROWS_AS(routing::shortest_disjoint_pair(g, 1, 2), RoutingError);
  CHECK_THROWS_AS(routing::route_all(g), RoutingError);
  CHECK_THROWS_AS(routing::shortest_disjoint_pair(g, 1, 1), ConfigError);
}

TEST_CASE("pair order is lexicographic") {
  CHECK(routing::pair_index(4, 0, 1) == 0);
  CHECK(routing::pair_index(4, 0, 3) == 2);
  CHECK(routing::pair_index(4, 1, 2) == 3);
  CHECK(routing::pair_index(4, 2, 3) == 5);
  CHECK(routing::pair_index(4, 3, 2) == 5);
  const auto g = netgraph::expand(four_cycle(), 0, 4.0);
  const auto table = routing::route_all(g);
  for (std::size_t p = 0; p < table.routes.size(); ++p) {
    CHECK(routing::pair_index(4, table.routes[p].i, table.routes[p].j) == p);
  }
}

TEST_CASE("route CSV lists vertex-labeled paths") {
  const auto g = netgraph::expand(four_cycle(), 0, 4.0);
  const auto table = routing::route_all(g);
  std::ostringstream os;
  routing::write_csv(table, g, os);
  const auto text = os.str();
  CHECK(text.starts_with("pair,loss_db,eta,path_i,path_j\n"));
  CHECK(text.find("B-D") != std::string::npos);
  CHECK(text.find("S.gen->S.out[B]->B.in[S]->B.mem") != std::string::npos);
}

}  // TEST_SUITE
