#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "eprnet/metrics.hpp"
#include "eprnet/topology.hpp"

namespace eprnet::harness {

struct WsGridSpec {
  std::vector<int> n = {10, 20, 30, 40};
  std::vector<double> k_over_n = {0.2, 0.4, 0.6, 0.8};
  std::vector<double> beta = {0.2, 0.5, 0.8};
  double edge_length_km = 5.0;
  double alpha_db_per_km = 0.4;
  int max_attempts = 1000000;
};

struct TopologySpec {
  enum class Kind { ilec, file, ws };
  Kind kind = Kind::ilec;
  std::string path;  // file kind
  WsGridSpec ws;     // ws kind
};

struct PlanSpec {
  enum class Kind { reference, scaled };
  Kind kind = Kind::reference;
  double channels_per_pair = 1.36;  // scaled kind
};

struct ExactSpec {
  double time_limit_s = 10.0;
  // The exact solver only participates when m * kappa stays below this.
  std::size_t max_m_times_kappa = 1024;
};

struct ExperimentConfig {
  TopologySpec topology;
  bool all_sources = true;
  std::vector<std::string> sources;  // labels, when !all_sources
  std::vector<double> l_wss = {4.0, 8.0};
  std::vector<std::string> strategies = {"round_robin", "first_fit",
                                         "modified_lpt", "modified_bd"};
  PlanSpec plan;
  int replications = 40;
  std::uint64_t base_seed = 1;
  ExactSpec exact;
  std::string output_dir = "out";

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // throws ConfigError
};

struct ResultRow {
  std::string topology;
  int n = 0;
  int k = 0;             // ws only
  double beta = 0.0;     // ws only
  std::uint64_t seed = 0;  // ws only
  bool is_ws = false;
  std::size_t source_idx = 0;
  std::string source;
  double l_wss = 0.0;
  std::string strategy;
  std::size_t kappa = 0;
  std::size_t m = 0;
  metrics::MetricsReport metrics;
};

struct RunResult {
  std::vector<ResultRow> rows;
  std::vector<std::string> failures;
  std::vector<std::string> skipped;
  std::map<std::string, double> timings;  // cell key -> seconds
  std::string config_hash;
  unsigned workers = 1;
};

// Replication seeds are base_seed + replication_index. Worker count comes
// from EPRNET_WORKERS when set, hardware concurrency otherwise. Cell
// failures are recorded and the run continues.
RunResult run(const ExperimentConfig& config);

void write_results_csv(const RunResult& r, std::ostream& os);
void write_importance_csv(const RunResult& r, std::ostream& os);
void write_ws_aggregate_csv(const RunResult& r, std::ostream& os);

// Writes results.csv, importance.csv / ws_aggregate.csv and manifest.json
// under config.output_dir. Returns 0, or 2 when some cells failed.
int run_to_dir(const ExperimentConfig& config);

// Renders SVG charts for one metric kind (minrate | median | jain |
// importance) from an experiment output directory. Returns the files
// written.
std::vector<std::string> plot_results(const std::string& results_dir,
                                      const std::string& kind,
                                      const std::string& out_dir);

}  // namespace eprnet::harness
