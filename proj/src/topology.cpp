#include "eprnet/topology.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "eprnet/errors.hpp"
#include "eprnet/util.hpp"

namespace eprnet::topo {

std::size_t Topology::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  throw ConfigError("unknown node label: " + label);
}

std::vector<std::vector<std::pair<std::size_t, double>>> Topology::adjacency()
    const {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj(n());
  for (const auto& e : edges) {
    adj[e.a].emplace_back(e.b, e.length_km);
    adj[e.b].emplace_back(e.a, e.length_km);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

std::vector<std::size_t> Topology::degrees() const {
  std::vector<std::size_t> d(n(), 0);
  for (const auto& e : edges) {
    ++d[e.a];
    ++d[e.b];
  }
  return d;
}

bool is_connected(const Topology& t) {
  if (t.n() == 0) return false;
  auto adj = t.adjacency();
  std::vector<bool> seen(t.n(), false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    for (auto& [v, len] : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == t.n();
}

namespace {

// Max-flow value from s to t over unit-capacity directed arcs (two per
// undirected edge), stopping once `cap_needed` augmenting paths are found.
int unit_max_flow(std::size_t n, const std::vector<Edge>& edges, std::size_t s,
                  std::size_t t, int cap_needed) {
  struct Arc {
    std::size_t to;
    int cap;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> g(n);
  for (const auto& e : edges) {
    g[e.a].push_back({e.b, 1, g[e.b].size()});
    g[e.b].push_back({e.a, 0, g[e.a].size() - 1});
    g[e.b].push_back({e.a, 1, g[e.a].size()});
    g[e.a].push_back({e.b, 0, g[e.b].size() - 1});
  }
  int flow = 0;
  while (flow < cap_needed) {
    std::vector<std::pair<std::size_t, std::size_t>> parent(
        n, {SIZE_MAX, SIZE_MAX});  // (node, arc index)
    std::queue<std::size_t> q;
    q.push(s);
    std::vector<bool> seen(n, false);
    seen[s] = true;
    while (!q.empty() && !seen[t]) {
      auto u = q.front();
      q.pop();
      for (std::size_t i = 0; i < g[u].size(); ++i) {
        const Arc& a = g[u][i];
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = true;
          parent[a.to] = {u, i};
          q.push(a.to);
        }
      }
    }
    if (!seen[t]) break;
    for (std::size_t v = t; v != s;) {
      auto [u, i] = parent[v];
      g[u][i].cap -= 1;
      g[g[u][i].to][g[u][i].rev].cap += 1;
      v = u;
    }
    ++flow;
  }
  return flow;
}

}  // namespace

bool min_cut_at_least_two(const Topology& t) {
  if (t.n() < 2) return false;
  for (std::size_t v = 1; v < t.n(); ++v) {
    if (unit_max_flow(t.n(), t.edges, 0, v, 2) < 2) return false;
  }
  return true;
}

void validate(const Topology& t) {
  if (t.n() < 2) throw InvariantError("topology needs at least 2 nodes");
  {
    std::set<std::string> uniq(t.labels.begin(), t.labels.end());
    if (uniq.size() != t.labels.size()) {
      throw InvariantError("duplicate node labels");
    }
  }
  if (!(t.fiber_alpha >= 0.0)) {
    throw InvariantError("fiber_alpha must be non-negative");
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : t.edges) {
    if (e.a >= t.n() || e.b >= t.n()) {
      throw InvariantError("edge endpoint out of range");
    }
    if (e.a == e.b) throw InvariantError("self-loop");
    if (e.a > e.b) throw InvariantError("edge endpoints not ordered a < b");
    if (!(e.length_km > 0.0)) throw InvariantError("bad length");
    if (!seen.insert({e.a, e.b}).second) {
      throw InvariantError("duplicate edge");
    }
  }
  if (t.default_source && *t.default_source >= t.n()) {
    throw InvariantError("source out of range");
  }
  if (!is_connected(t)) throw InvariantError("disconnected");
  if (!min_cut_at_least_two(t)) throw InvariantError("min-cut<2");
}

namespace {

struct IlecEntry {
  char a, b;
  double km;
};

// Upper triangle of the Manhattan ILEC distance matrix.
constexpr IlecEntry kIlec[] = {
    {'A', 'B', 0.304}, {'A', 'C', 1.184}, {'A', 'D', 2.032},
    {'A', 'E', 3.744}, {'A', 'F', 5.2},   {'A', 'G', 4.352},
    {'A', 'H', 5.776}, {'A', 'I', 6.096}, {'A', 'J', 5.84},
    {'A', 'K', 7.232}, {'A', 'L', 7.04},  {'A', 'M', 8.8},
    {'A', 'N', 9.12},  {'A', 'O', 10.688},
    {'B', 'C', 0.912}, {'B', 'D', 1.712}, {'B', 'E', 3.488},
    {'B', 'F', 5.056}, {'B', 'G', 4.048}, {'B', 'H', 5.488},
    {'B', 'I', 5.936}, {'B', 'J', 5.296}, {'B', 'K', 6.848},
    {'B', 'L', 6.656}, {'B', 'M', 8.496}, {'B', 'N', 8.816},
    {'B', 'O', 10.32},
    {'C', 'D', 2.336}, {'C', 'E', 2.08},  {'C', 'F', 3.328},
    {'C', 'G', 2.304}, {'C', 'H', 3.728}, {'C', 'I', 4.192},
    {'C', 'J', 3.904}, {'C', 'K', 5.296}, {'C', 'L', 5.04},
    {'C', 'M', 6.752}, {'C', 'N', 7.216}, {'C', 'O', 9.664},
    {'D', 'E', 2.224}, {'D', 'F', 3.36},  {'D', 'G', 2.368},
    {'D', 'H', 3.728}, {'D', 'I', 2.192}, {'D', 'J', 4.0},
    {'D', 'K', 5.392}, {'D', 'L', 4.992}, {'D', 'M', 6.848},
    {'D', 'N', 7.216}, {'D', 'O', 8.768},
    {'E', 'F', 1.44},  {'E', 'G', 1.6},   {'E', 'H', 2.448},
    {'E', 'I', 2.624}, {'E', 'J', 1.968}, {'E', 'K', 3.472},
    {'E', 'L', 3.728}, {'E', 'M', 5.28},  {'E', 'N', 5.312},
    {'E', 'O', 6.88},
    {'F', 'G', 1.696}, {'F', 'H', 1.536}, {'F', 'I', 1.36},
    {'F', 'J', 0.544}, {'F', 'K', 2.0},   {'F', 'L', 2.528},
    {'F', 'M', 4.0},   {'F', 'N', 3.872}, {'F', 'O', 5.456},
    {'G', 'H', 1.408}, {'G', 'I', 1.888}, {'G', 'J', 2.112},
    {'G', 'K', 3.312}, {'G', 'L', 2.624}, {'G', 'M', 4.496},
    {'G', 'N', 5.056}, {'G', 'O', 6.496},
    {'H', 'I', 0.624}, {'H', 'J', 1.408}, {'H', 'K', 2.176},
    {'H', 'L', 1.28},  {'H', 'M', 3.04},  {'H', 'N', 3.696},
    {'H', 'O', 5.152},
    {'I', 'J', 1.12},  {'I', 'K', 1.552}, {'I', 'L', 1.264},
    {'I', 'M', 2.704}, {'I', 'N', 3.12},  {'I', 'O', 4.576},
    {'J', 'K', 1.376}, {'J', 'L', 2.288}, {'J', 'M', 3.424},
    {'J', 'N', 3.296}, {'J', 'O', 4.832},
    {'K', 'L', 2.208}, {'K', 'M', 2.56},  {'K', 'N', 1.92},
    {'K', 'O', 3.472},
    {'L', 'M', 1.872}, {'L', 'N', 3.2},   {'L', 'O', 4.256},
    {'M', 'N', 4.8},   {'M', 'O', 6.368}, {'M', 'P', 2.96},
    {'M', 'Q', 6.096},
    {'N', 'O', 1.536}, {'N', 'Q', 5.856},
    {'O', 'Q', 4.368},
    {'P', 'Q', 3.04},
};

}  // namespace

Topology load_ilec() {
  Topology t;
  for (char c = 'A'; c <= 'Q'; ++c) t.labels.emplace_back(1, c);
  for (const auto& e : kIlec) {
    t.edges.push_back({static_cast<std::size_t>(e.a - 'A'),
                       static_cast<std::size_t>(e.b - 'A'), e.km});
  }
  t.fiber_alpha = 0.4;
  return t;
}

Topology from_json(const nlohmann::json& j) {
  Topology t;
  try {
    t.labels = j.at("labels").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 3) {
        throw ConfigError("edge entries must be [i, j, km]");
      }
      std::size_t a = e[0].get<std::size_t>();
      std::size_t b = e[1].get<std::size_t>();
      if (a > b) std::swap(a, b);
      t.edges.push_back({a, b, e[2].get<double>()});
    }
    if (j.contains("alpha_db_per_km")) {
      t.fiber_alpha = j.at("alpha_db_per_km").get<double>();
    }
    if (j.contains("source")) {
      t.default_source = t.index_of(j.at("source").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("topology parse error: ") + e.what());
  }
  std::sort(t.edges.begin(), t.edges.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  validate(t);
  return t;
}

nlohmann::json to_json(const Topology& t) {
  nlohmann::json j;
  j["labels"] = t.labels;
  auto edges = nlohmann::json::array();
  for (const auto& e : t.edges) {
    edges.push_back({e.a, e.b, e.length_km});
  }
  j["edges"] = edges;
  j["alpha_db_per_km"] = t.fiber_alpha;
  if (t.default_source) j["source"] = t.labels[*t.default_source];
  return j;
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("topology parse error in " + path + ": " + e.what());
  }
  return from_json(j);
}

Topology generate_ws(const WattsStrogatzSpec& spec, int max_attempts) {
  if (spec.n < 3) throw ConfigError("watts-strogatz: n must be >= 3");
  if (spec.k % 2 != 0 || spec.k < 2 || spec.k >= spec.n) {
    throw ConfigError("watts-strogatz: k must be even with 2 <= k < n");
  }
  if (spec.beta < 0.0 || spec.beta > 1.0) {
    throw ConfigError("watts-strogatz: beta must be in [0, 1]");
  }
  if (!(spec.edge_length_km > 0.0)) {
    throw ConfigError("watts-strogatz: edge length must be positive");
  }

  const std::size_t n = spec.n;
  Rng rng(spec.seed);

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    // Ring lattice: each node to its k/2 rightmost neighbors.
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    auto connect = [&](std::size_t a, std::size_t b, bool on) {
      adj[a][b] = on;
      adj[b][a] = on;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 1; j <= spec.k / 2; ++j) {
        connect(i, (i + j) % n, true);
      }
    }
    // Rewire each rightward ring edge with probability beta to a uniform
    // non-self, non-duplicate target; if no valid target exists the edge
    // is kept. Edge count never changes.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 1; j <= spec.k / 2; ++j) {
        const std::size_t old_target = (i + j) % n;
        if (rng.unit() >= spec.beta) continue;
        std::vector<std::size_t> candidates;
        for (std::size_t v = 0; v < n; ++v) {
          if (v != i && !adj[i][v]) candidates.push_back(v);
        }
        if (candidates.empty()) continue;
        const std::size_t pick = candidates[rng.bounded(candidates.size())];
        connect(i, old_target, false);
        connect(i, pick, true);
      }
    }

    Topology t;
    t.labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      t.labels.push_back("n" + std::to_string(i));
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (adj[a][b]) t.edges.push_back({a, b, spec.edge_length_km});
      }
    }
    if (is_connected(t) && min_cut_at_least_two(t)) {
      return t;
    }
  }
  std::ostringstream msg;
  msg << "watts-strogatz generation failed after " << max_attempts
      << " attempts (n=" << spec.n << ", k=" << spec.k << ", beta=" << spec.beta
      << ", seed=" << spec.seed << ")";
  throw Error(msg.str());
}

}  // namespace eprnet::topo
