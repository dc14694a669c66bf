#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "eprnet/topology.hpp"

namespace eprnet::netgraph {

enum class Role : std::uint8_t { gen, mem, out, in };

struct Vertex {
  std::size_t node = 0;
  Role role = Role::mem;
  std::size_t peer = SIZE_MAX;  // neighbor node for out/in roles
};

struct Arc {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  double weight_db = 0.0;
};

struct ExpandOptions {
  double l_wss = 0.0;       // per-WSS insertion loss, dB
  double mem_loss = 0.0;    // quantum-memory insertion loss, dB
  bool allow_uturn = false; // include in[j] -> out[j] back-reflection arcs
};

// Directed per-role expansion of a topology for a fixed source node.
// Weights are photon losses in dB. The source has no incoming arcs and
// is the only node with a gen vertex.
struct ExpandedGraph {
  std::vector<Vertex> vertices;
  std::vector<Arc> arcs;
  std::vector<std::vector<std::uint32_t>> out;  // vertex -> arc ids, ascending
  std::uint32_t source_vertex = 0;              // the gen vertex
  std::vector<std::uint32_t> mem_vertex;        // per node
  std::size_t source_node = 0;
  std::vector<std::string> node_labels;
  ExpandOptions options;
  double fiber_alpha = 0.0;

  std::size_t n_nodes() const { return node_labels.size(); }
  std::string vertex_label(std::uint32_t v) const;
};

ExpandedGraph expand(const topo::Topology& t, std::size_t source,
                     const ExpandOptions& options);
ExpandedGraph expand(const topo::Topology& t, std::size_t source, double l_wss);

// Power transmittance of a loss in dB. Rejects negative input.
double transmittance(double loss_db);

// One "from -> to weight" line per arc, in arc-id order.
void dump_edge_list(const ExpandedGraph& g, std::ostream& os);

}  // namespace eprnet::netgraph
