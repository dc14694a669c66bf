#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "eprnet/netgraph.hpp"

namespace eprnet::routing {

// Two edge-disjoint minimum-total-loss paths from the source's gen vertex
// to the memories of nodes i and j.
struct RoutePair {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  std::vector<std::uint32_t> path_i;  // arc ids, gen -> i.mem
  std::vector<std::uint32_t> path_j;  // arc ids, gen -> j.mem
  double loss_db = 0.0;               // sum over both paths
  double eta = 0.0;                   // 10^(-loss_db/10)
};

// One RoutePair per unordered node pair, in lexicographic (i, j) order;
// lambda holds the transmittances in the same order.
struct RouteTable {
  std::vector<RoutePair> routes;
  std::vector<double> lambda;

  std::size_t kappa() const { return routes.size(); }
};

// Suurballe's algorithm with a dummy sink joined to both memories by
// zero-weight arcs. Throws RoutingError when no disjoint pair exists.
RoutePair shortest_disjoint_pair(const netgraph::ExpandedGraph& g,
                                 std::size_t i, std::size_t j);

RouteTable route_all(const netgraph::ExpandedGraph& g);

// Canonical index of pair (i, j) in the lexicographic ordering.
std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j);

// Columns: pair, loss_db, eta, path_i, path_j.
void write_csv(const RouteTable& table, const netgraph::ExpandedGraph& g,
               std::ostream& os);

}  // namespace eprnet::routing
