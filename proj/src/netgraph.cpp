#include "eprnet/netgraph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "eprnet/errors.hpp"
#include "eprnet/util.hpp"

namespace eprnet::netgraph {

std::string ExpandedGraph::vertex_label(std::uint32_t v) const {
  const Vertex& vx = vertices.at(v);
  const std::string& node = node_labels[vx.node];
  switch (vx.role) {
    case Role::gen:
      return node + ".gen";
    case Role::mem:
      return node + ".mem";
    case Role::out:
      return node + ".out[" + node_labels[vx.peer] + "]";
    case Role::in:
      return node + ".in[" + node_labels[vx.peer] + "]";
  }
  return node + ".?";
}

ExpandedGraph expand(const topo::Topology& t, std::size_t source,
                     const ExpandOptions& options) {
  if (source >= t.n()) {
    throw ConfigError("unknown source node index " + std::to_string(source));
  }
  if (options.l_wss < 0.0) throw ConfigError("l_wss must be non-negative");
  if (options.mem_loss < 0.0) throw ConfigError("mem_loss must be non-negative");
  if (t.fiber_alpha < 0.0) throw ConfigError("fiber_alpha must be non-negative");

  ExpandedGraph g;
  g.source_node = source;
  g.node_labels = t.labels;
  g.options = options;
  g.fiber_alpha = t.fiber_alpha;

  auto adj = t.adjacency();

  // Vertices, grouped per node in ascending node order: mem, gen (source
  // only), then per ascending neighbor in[j] (consumers only) and out[j].
  g.mem_vertex.resize(t.n());
  std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> in_vertex;
  std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> out_vertex;
  for (std::size_t i = 0; i < t.n(); ++i) {
    g.mem_vertex[i] = static_cast<std::uint32_t>(g.vertices.size());
    g.vertices.push_back({i, Role::mem, SIZE_MAX});
    if (i == source) {
      g.source_vertex = static_cast<std::uint32_t>(g.vertices.size());
      g.vertices.push_back({i, Role::gen, SIZE_MAX});
    }
    for (const auto& [j, len] : adj[i]) {
      if (i != source) {
        in_vertex[{i, j}] = static_cast<std::uint32_t>(g.vertices.size());
        g.vertices.push_back({i, Role::in, j});
      }
      out_vertex[{i, j}] = static_cast<std::uint32_t>(g.vertices.size());
      g.vertices.push_back({i, Role::out, j});
    }
  }

  const double pass_through = 2.0 * options.l_wss;
  const double to_mem = options.l_wss + options.mem_loss;

  // Source internal arcs: gen feeds every outgoing port and its own memory.
  g.arcs.push_back({g.source_vertex, g.mem_vertex[source], to_mem});
  for (const auto& [j, len] : adj[source]) {
    g.arcs.push_back({g.source_vertex, out_vertex[{source, j}], pass_through});
  }

  // Fiber arcs, both directions except into the source.
  for (const auto& e : t.edges) {
    const double w = t.fiber_alpha * e.length_km;
    if (e.b != source) {
      g.arcs.push_back({out_vertex[{e.a, e.b}], in_vertex[{e.b, e.a}], w});
    }
    if (e.a != source) {
      g.arcs.push_back({out_vertex[{e.b, e.a}], in_vertex[{e.a, e.b}], w});
    }
  }

  // Consumer internal arcs: every incoming port reaches the memory and,
  // via two WSS traversals, every outgoing port except back toward the
  // source (the source has no incoming arcs) and except the port it
  // arrived on unless allow_uturn is set.
  for (std::size_t i = 0; i < t.n(); ++i) {
    if (i == source) continue;
    for (const auto& [j, lj] : adj[i]) {
      g.arcs.push_back({in_vertex[{i, j}], g.mem_vertex[i], to_mem});
      for (const auto& [k, lk] : adj[i]) {
        if (k == source) continue;
        if (k == j && !options.allow_uturn) continue;
        g.arcs.push_back({in_vertex[{i, j}], out_vertex[{i, k}], pass_through});
      }
    }
  }

  g.out.resize(g.vertices.size());
  for (std::uint32_t a = 0; a < g.arcs.size(); ++a) {
    g.out[g.arcs[a].from].push_back(a);
  }
  return g;
}

ExpandedGraph expand(const topo::Topology& t, std::size_t source,
                     double l_wss) {
  ExpandOptions options;
  options.l_wss = l_wss;
  return expand(t, source, options);
}

double transmittance(double loss_db) {
  if (loss_db < 0.0) {
    throw ConfigError("transmittance: loss must be non-negative, got " +
                      format_double(loss_db));
  }
  return std::pow(10.0, -loss_db / 10.0);
}

void dump_edge_list(const ExpandedGraph& g, std::ostream& os) {
  for (const auto& arc : g.arcs) {
    os << g.vertex_label(arc.from) << " -> " << g.vertex_label(arc.to) << ' '
       << format_double(arc.weight_db) << '\n';
  }
}

}  // namespace eprnet::netgraph
