#include "eprnet/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <queue>
#include <set>

#include "eprnet/errors.hpp"
#include "eprnet/util.hpp"

namespace eprnet::routing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kNoArc = UINT32_MAX;

using netgraph::ExpandedGraph;

struct Tree {
  std::vector<double> dist;
  std::vector<std::uint32_t> parent_arc;
};

// Dijkstra from the gen vertex over the whole expanded graph. Ties pop in
// vertex-id order so parents are deterministic.
Tree base_tree(const ExpandedGraph& g) {
  Tree t;
  t.dist.assign(g.vertices.size(), kInf);
  t.parent_arc.assign(g.vertices.size(), kNoArc);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  t.dist[g.source_vertex] = 0.0;
  pq.push({0.0, g.source_vertex});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > t.dist[u]) continue;
    for (std::uint32_t a : g.out[u]) {
      const auto& arc = g.arcs[a];
      const double nd = d + arc.weight_db;
      if (nd < t.dist[arc.to]) {
        t.dist[arc.to] = nd;
        t.parent_arc[arc.to] = a;
        pq.push({nd, arc.to});
      }
    }
  }
  return t;
}

// Arc of the second search: either a graph arc, the reversal of a
// first-path arc, or one of the two dummy sink arcs.
enum class StepKind : std::uint8_t { real, reversed, dummy };

struct Step {
  StepKind kind;
  std::uint32_t arc;  // graph arc id (real/reversed) or mem vertex (dummy)
};

struct ResidualPath {
  bool found = false;
  std::vector<Step> steps;  // source -> dummy
};

// Dijkstra over reduced costs with the first path's arcs removed and
// reversed. The dummy sink is vertex V.
ResidualPath residual_search(const ExpandedGraph& g, const Tree& base,
                             const std::set<std::uint32_t>& p1,
                             std::uint32_t mem_a, std::uint32_t mem_b,
                             std::uint32_t p1_dummy_mem) {
  const std::uint32_t v_count = static_cast<std::uint32_t>(g.vertices.size());
  const std::uint32_t dummy = v_count;
  const double dummy_dist = std::min(base.dist[mem_a], base.dist[mem_b]);

  // Reverse adjacency for the first path: reversed arcs enter at the arc's
  // head with reduced cost zero.
  std::vector<std::vector<std::uint32_t>> reversed_out(v_count + 1);
  for (std::uint32_t a : p1) {
    reversed_out[g.arcs[a].to].push_back(a);
  }

  std::vector<double> dist(v_count + 1, kInf);
  std::vector<Step> parent(v_count + 1, {StepKind::real, kNoArc});
  std::vector<std::uint32_t> prev_vertex(v_count + 1, UINT32_MAX);
  using Item = std::pair<double, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[g.source_vertex] = 0.0;
  pq.push({0.0, g.source_vertex});

  auto relax = [&](std::uint32_t u, std::uint32_t v, double w, Step step) {
    if (dist[u] + w < dist[v]) {
      dist[v] = dist[u] + w;
      parent[v] = step;
      prev_vertex[v] = u;
      pq.push({dist[v], v});
    }
  };

  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (u == dummy || d > dist[u]) continue;
    if (base.dist[u] == kInf) continue;
    for (std::uint32_t a : g.out[u]) {
      if (p1.count(a)) continue;
      const auto& arc = g.arcs[a];
      if (base.dist[arc.to] == kInf) continue;
      const double reduced =
          std::max(0.0, arc.weight_db + base.dist[u] - base.dist[arc.to]);
      relax(u, arc.to, reduced, {StepKind::real, a});
    }
    for (std::uint32_t a : reversed_out[u]) {
      relax(u, g.arcs[a].from, 0.0, {StepKind::reversed, a});
    }
    // Dummy arcs from the two memories, minus the one the first path used.
    if ((u == mem_a || u == mem_b) && u != p1_dummy_mem) {
      const double reduced = base.dist[u] - dummy_dist;
      relax(u, dummy, std::max(0.0, reduced), {StepKind::dummy, u});
    }
  }

  ResidualPath rp;
  if (dist[dummy] == kInf) return rp;
  rp.found = true;
  for (std::uint32_t v = dummy; v != g.source_vertex; v = prev_vertex[v]) {
    rp.steps.push_back(parent[v]);
  }
  std::reverse(rp.steps.begin(), rp.steps.end());
  return rp;
}

// Walks one gen -> mem trail out of the disjoint arc union, consuming the
// arcs it uses. Lowest arc id wins at shared vertices.
std::vector<std::uint32_t> extract_trail(
    const ExpandedGraph& g, std::multimap<std::uint32_t, std::uint32_t>& avail,
    const std::set<std::uint32_t>& terminals) {
  std::vector<std::uint32_t> trail;
  std::uint32_t v = g.source_vertex;
  while (!terminals.count(v) || avail.count(v) > 0) {
    auto it = avail.find(v);
    if (it == avail.end()) {
      throw RoutingError("internal: disjoint path reconstruction stuck at " +
                         g.vertex_label(v));
    }
    // multimap with ascending-id inserts keeps the lowest arc id first
    trail.push_back(it->second);
    const std::uint32_t next = g.arcs[it->second].to;
    avail.erase(it);
    v = next;
  }
  return trail;
}

RoutePair solve_pair(const ExpandedGraph& g, const Tree& base, std::size_t i,
                     std::size_t j) {
  const std::uint32_t mem_i = g.mem_vertex[i];
  const std::uint32_t mem_j = g.mem_vertex[j];
  if (base.dist[mem_i] == kInf || base.dist[mem_j] == kInf) {
    throw RoutingError("no path from source to pair (" + g.node_labels[i] +
                       ", " + g.node_labels[j] + ")");
  }

  // First path: the shortest-path tree branch to the nearer memory (ties
  // go to the lower node index).
  const std::uint32_t first_mem =
      base.dist[mem_i] <= base.dist[mem_j] ? mem_i : mem_j;
  std::set<std::uint32_t> p1;
  for (std::uint32_t v = first_mem; v != g.source_vertex;) {
    const std::uint32_t a = base.parent_arc[v];
    p1.insert(a);
    v = g.arcs[a].from;
  }

  ResidualPath rp = residual_search(g, base, p1, mem_i, mem_j, first_mem);
  if (!rp.found) {
    throw RoutingError("no edge-disjoint path pair for (" + g.node_labels[i] +
                       ", " + g.node_labels[j] + ")");
  }

  // Overlap cancellation: a reversed arc in the second path annihilates
  // the matching first-path arc.
  std::set<std::uint32_t> final_arcs = p1;
  for (const Step& s : rp.steps) {
    if (s.kind == StepKind::reversed) {
      final_arcs.erase(s.arc);
    } else if (s.kind == StepKind::real) {
      final_arcs.insert(s.arc);
    }
  }

  std::multimap<std::uint32_t, std::uint32_t> avail;
  for (std::uint32_t a : final_arcs) avail.insert({g.arcs[a].from, a});
  const std::set<std::uint32_t> terminals{mem_i, mem_j};

  auto trail_1 = extract_trail(g, avail, terminals);
  auto trail_2 = extract_trail(g, avail, terminals);
  if (!avail.empty()) {
    throw RoutingError("internal: leftover arcs after path reconstruction");
  }

  RoutePair result;
  result.i = i;
  result.j = j;
  const std::uint32_t end_1 = trail_1.empty() ? g.source_vertex
                                              : g.arcs[trail_1.back()].to;
  if (end_1 == mem_i) {
    result.path_i = std::move(trail_1);
    result.path_j = std::move(trail_2);
  } else {
    result.path_i = std::move(trail_2);
    result.path_j = std::move(trail_1);
  }
  double loss = 0.0;
  for (std::uint32_t a : result.path_i) loss += g.arcs[a].weight_db;
  for (std::uint32_t a : result.path_j) loss += g.arcs[a].weight_db;
  result.loss_db = loss;
  result.eta = netgraph::transmittance(loss);
  return result;
}

}  // namespace

RoutePair shortest_disjoint_pair(const netgraph::ExpandedGraph& g,
                                 std::size_t i, std::size_t j) {
  if (i == j || i >= g.n_nodes() || j >= g.n_nodes()) {
    throw ConfigError("shortest_disjoint_pair: invalid node pair");
  }
  if (i > j) std::swap(i, j);
  Tree base = base_tree(g);
  return solve_pair(g, base, i, j);
}

RouteTable route_all(const netgraph::ExpandedGraph& g) {
  Tree base = base_tree(g);
  RouteTable table;
  const std::size_t n = g.n_nodes();
  table.routes.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      try {
        table.routes.push_back(solve_pair(g, base, i, j));
      } catch (const RoutingError& e) {
        throw RoutingError("pair (" + g.node_labels[i] + ", " +
                           g.node_labels[j] + "): " + e.what());
      }
    }
  }
  table.lambda.reserve(table.routes.size());
  for (const auto& r : table.routes) table.lambda.push_back(r.eta);
  return table;
}

std::size_t pair_index(std::size_t n, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  // Pairs (0,1), (0,2), ..., (0,n-1), (1,2), ...
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

void write_csv(const RouteTable& table, const netgraph::ExpandedGraph& g,
               std::ostream& os) {
  os << "pair,loss_db,eta,path_i,path_j\n";
  auto path_string = [&](const std::vector<std::uint32_t>& path) {
    std::string s = g.vertex_label(g.source_vertex);
    for (std::uint32_t a : path) {
      s += "->";
      s += g.vertex_label(g.arcs[a].to);
    }
    return s;
  };
  for (const auto& r : table.routes) {
    os << g.node_labels[r.i] << '-' << g.node_labels[r.j] << ','
       << format_double(r.loss_db) << ',' << format_double(r.eta) << ','
       << path_string(r.path_i) << ',' << path_string(r.path_j) << '\n';
  }
}

}  // namespace eprnet::routing
