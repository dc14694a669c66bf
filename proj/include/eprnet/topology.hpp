#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace eprnet::topo {

struct Edge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double length_km = 0.0;
};

// Undirected fiber topology. Admissible topologies are connected with
// minimum cut >= 2 so every node pair has edge-disjoint light-paths.
struct Topology {
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  double fiber_alpha = 0.4;  // dB/km
  std::optional<std::size_t> default_source;

  std::size_t n() const { return labels.size(); }
  std::size_t index_of(const std::string& label) const;  // throws ConfigError
  // adjacency()[i] = sorted neighbors (node, length_km)
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency() const;
  std::vector<std::size_t> degrees() const;
};

// Throws InvariantError naming the violated invariant: bad length,
// self-loop, duplicate edge, disconnected, min-cut<2.
void validate(const Topology& t);

bool is_connected(const Topology& t);
// Global edge connectivity >= 2, decided by repeated s-t max-flow with
// unit capacities.
bool min_cut_at_least_two(const Topology& t);

// The 17-node Manhattan ILEC map, nodes A..Q, as-the-crow-flies km.
Topology load_ilec();

Topology from_json(const nlohmann::json& j);
nlohmann::json to_json(const Topology& t);
Topology load_topology(const std::string& path);

struct WattsStrogatzSpec {
  std::size_t n = 0;
  std::size_t k = 0;  // even, 2 <= k < n
  double beta = 0.0;  // rewiring probability
  double edge_length_km = 5.0;
  std::uint64_t seed = 0;
};

// Ring lattice plus rewiring, resampled until the admissibility filter
// (connected, min cut >= 2) passes. Deterministic for a given seed.
// Throws Error when max_attempts runs out.
Topology generate_ws(const WattsStrogatzSpec& spec, int max_attempts = 1000000);

}  // namespace eprnet::topo
