#include "eprnet/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "eprnet/allocation.hpp"
#include "eprnet/errors.hpp"
#include "eprnet/netgraph.hpp"
#include "eprnet/routing.hpp"
#include "eprnet/spectrum.hpp"
#include "eprnet/svgplot.hpp"
#include "eprnet/util.hpp"

namespace eprnet::harness {

namespace {

const std::set<std::string> kKnownStrategies = {
    "round_robin", "first_fit", "modified_lpt", "modified_bd", "exact"};

unsigned worker_count() {
  if (const char* env = std::getenv("EPRNET_WORKERS")) {
    const int v = std::atoi(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int even_degree(double k_over_n, int n) {
  int k = 2 * static_cast<int>(std::llround(k_over_n * n / 2.0));
  if (k < 2) k = 2;
  while (k >= n) k -= 2;
  if (k < 2) {
    throw ConfigError("no even degree in [2, n) for n=" + std::to_string(n));
  }
  return k;
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("topology")) {
      const auto& t = j.at("topology");
      const std::string kind = t.value("kind", "ilec");
      if (kind == "ilec") {
        c.topology.kind = TopologySpec::Kind::ilec;
      } else if (kind == "file") {
        c.topology.kind = TopologySpec::Kind::file;
        c.topology.path = t.at("path").get<std::string>();
      } else if (kind == "ws") {
        c.topology.kind = TopologySpec::Kind::ws;
        auto& ws = c.topology.ws;
        if (t.contains("n")) ws.n = t.at("n").get<std::vector<int>>();
        if (t.contains("k_over_n")) {
          ws.k_over_n = t.at("k_over_n").get<std::vector<double>>();
        }
        if (t.contains("beta")) {
          ws.beta = t.at("beta").get<std::vector<double>>();
        }
        ws.edge_length_km = t.value("edge_length_km", ws.edge_length_km);
        ws.alpha_db_per_km = t.value("alpha_db_per_km", ws.alpha_db_per_km);
        ws.max_attempts = t.value("max_attempts", ws.max_attempts);
      } else {
        throw ConfigError("unknown topology kind: " + kind);
      }
    }
    if (j.contains("sources")) {
      if (j.at("sources").is_string()) {
        if (j.at("sources").get<std::string>() != "all") {
          throw ConfigError("sources must be \"all\" or a list of labels");
        }
        c.all_sources = true;
      } else {
        c.all_sources = false;
        c.sources = j.at("sources").get<std::vector<std::string>>();
      }
    }
    if (j.contains("l_wss_db")) {
      c.l_wss = j.at("l_wss_db").get<std::vector<double>>();
    }
    if (j.contains("strategies")) {
      c.strategies = j.at("strategies").get<std::vector<std::string>>();
    }
    if (j.contains("plan")) {
      const std::string kind = j.at("plan").value("kind", "reference");
      if (kind == "reference") {
        c.plan.kind = PlanSpec::Kind::reference;
      } else if (kind == "scaled") {
        c.plan.kind = PlanSpec::Kind::scaled;
        c.plan.channels_per_pair =
            j.at("plan").value("channels_per_pair", c.plan.channels_per_pair);
      } else {
        throw ConfigError("unknown plan kind: " + kind);
      }
    }
    c.replications = j.value("replications", c.replications);
    c.base_seed = j.value("base_seed", c.base_seed);
    if (j.contains("exact")) {
      c.exact.time_limit_s =
          j.at("exact").value("time_limit_s", c.exact.time_limit_s);
      c.exact.max_m_times_kappa = j.at("exact").value(
          "max_m_times_kappa", c.exact.max_m_times_kappa);
    }
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  nlohmann::json t;
  switch (topology.kind) {
    case TopologySpec::Kind::ilec:
      t["kind"] = "ilec";
      break;
    case TopologySpec::Kind::file:
      t["kind"] = "file";
      t["path"] = topology.path;
      break;
    case TopologySpec::Kind::ws:
      t["kind"] = "ws";
      t["n"] = topology.ws.n;
      t["k_over_n"] = topology.ws.k_over_n;
      t["beta"] = topology.ws.beta;
      t["edge_length_km"] = topology.ws.edge_length_km;
      t["alpha_db_per_km"] = topology.ws.alpha_db_per_km;
      t["max_attempts"] = topology.ws.max_attempts;
      break;
  }
  j["topology"] = t;
  if (all_sources) {
    j["sources"] = "all";
  } else {
    j["sources"] = sources;
  }
  j["l_wss_db"] = l_wss;
  j["strategies"] = strategies;
  j["plan"]["kind"] =
      plan.kind == PlanSpec::Kind::reference ? "reference" : "scaled";
  if (plan.kind == PlanSpec::Kind::scaled) {
    j["plan"]["channels_per_pair"] = plan.channels_per_pair;
  }
  j["replications"] = replications;
  j["base_seed"] = base_seed;
  j["exact"]["time_limit_s"] = exact.time_limit_s;
  j["exact"]["max_m_times_kappa"] = exact.max_m_times_kappa;
  j["output_dir"] = output_dir;
  return j;
}

void ExperimentConfig::validate() const {
  if (strategies.empty()) throw ConfigError("empty strategy list");
  for (const auto& s : strategies) {
    if (!kKnownStrategies.count(s)) throw ConfigError("unknown strategy: " + s);
  }
  if (l_wss.empty()) throw ConfigError("empty l_wss_db list");
  for (double l : l_wss) {
    if (l < 0.0) throw ConfigError("l_wss_db must be non-negative");
  }
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (!all_sources && sources.empty()) {
    throw ConfigError("sources list is empty");
  }
  if (topology.kind == TopologySpec::Kind::ws) {
    const auto& ws = topology.ws;
    if (ws.n.empty() || ws.k_over_n.empty() || ws.beta.empty()) {
      throw ConfigError("ws grid must list n, k_over_n and beta values");
    }
  }
}

namespace {

struct Instance {
  topo::Topology topology;
  std::string name;
  int n = 0;
  int k = 0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  bool is_ws = false;
};

struct Cell {
  std::size_t instance = 0;
  std::size_t source = 0;
  double l_wss = 0.0;
};

struct CellOutput {
  std::vector<ResultRow> rows;
  std::vector<std::string> skipped;
  double seconds = 0.0;
};

std::string cell_key(const Instance& inst, std::size_t source, double l_wss) {
  std::string key = inst.name;
  if (inst.is_ws) {
    key += "|n=" + std::to_string(inst.n) + "|k=" + std::to_string(inst.k) +
           "|beta=" + format_double(inst.beta) +
           "|seed=" + std::to_string(inst.seed);
  }
  key += "|src=" + inst.topology.labels[source] +
         "|lwss=" + format_double(l_wss);
  return key;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  config.validate();
  RunResult out;
  {
    // The hash identifies the experiment, not where it is written.
    nlohmann::json hashed = config.to_json();
    hashed.erase("output_dir");
    out.config_hash = hex64(fnv1a(hashed.dump()));
  }
  out.workers = worker_count();

  // Materialize topology instances; generation failures are recorded and
  // the rest of the grid still runs.
  std::vector<Instance> instances;
  switch (config.topology.kind) {
    case TopologySpec::Kind::ilec: {
      Instance inst;
      inst.topology = topo::load_ilec();
      inst.name = "ilec";
      inst.n = static_cast<int>(inst.topology.n());
      instances.push_back(std::move(inst));
      break;
    }
    case TopologySpec::Kind::file: {
      Instance inst;
      inst.topology = topo::load_topology(config.topology.path);
      inst.name = std::filesystem::path(config.topology.path).stem().string();
      inst.n = static_cast<int>(inst.topology.n());
      instances.push_back(std::move(inst));
      break;
    }
    case TopologySpec::Kind::ws: {
      const auto& ws = config.topology.ws;
      for (int n : ws.n) {
        for (double kon : ws.k_over_n) {
          for (double beta : ws.beta) {
            const int k = even_degree(kon, n);
            for (int rep = 0; rep < config.replications; ++rep) {
              topo::WattsStrogatzSpec spec;
              spec.n = static_cast<std::size_t>(n);
              spec.k = static_cast<std::size_t>(k);
              spec.beta = beta;
              spec.edge_length_km = ws.edge_length_km;
              spec.seed = config.base_seed + static_cast<std::uint64_t>(rep);
              try {
                Instance inst;
                inst.topology = topo::generate_ws(spec, ws.max_attempts);
                inst.topology.fiber_alpha = ws.alpha_db_per_km;
                inst.name = "ws";
                inst.n = n;
                inst.k = k;
                inst.beta = beta;
                inst.seed = spec.seed;
                inst.is_ws = true;
                instances.push_back(std::move(inst));
              } catch (const std::exception& e) {
                out.failures.push_back("ws n=" + std::to_string(n) +
                                       " k=" + std::to_string(k) + " beta=" +
                                       format_double(beta) + " seed=" +
                                       std::to_string(spec.seed) + ": " +
                                       e.what());
              }
            }
          }
        }
      }
      break;
    }
  }

  // Channel plans are shared across cells; one per distinct node count.
  const spectrum::SourceParams params = spectrum::calibrated_params();
  const spectrum::ChannelPlan reference =
      spectrum::channel_rates(params, spectrum::default_geometry());
  const int reference_kappa = 136;  // node pairs served by the 185-channel plan
  std::map<int, spectrum::ChannelPlan> plans;
  for (const auto& inst : instances) {
    if (plans.count(inst.n)) continue;
    if (config.plan.kind == PlanSpec::Kind::reference) {
      plans[inst.n] = reference;
    } else {
      plans[inst.n] = spectrum::scaled_plan(params, reference, reference_kappa,
                                            inst.n, params.band_total,
                                            config.plan.channels_per_pair);
    }
  }

  std::vector<Cell> cells;
  for (std::size_t ii = 0; ii < instances.size(); ++ii) {
    std::vector<std::size_t> source_ids;
    if (config.all_sources) {
      for (std::size_t s = 0; s < instances[ii].topology.n(); ++s) {
        source_ids.push_back(s);
      }
    } else {
      for (const auto& label : config.sources) {
        source_ids.push_back(instances[ii].topology.index_of(label));
      }
    }
    for (std::size_t s : source_ids) {
      for (double l : config.l_wss) {
        cells.push_back({ii, s, l});
      }
    }
  }

  auto run_cell = [&](const Cell& cell) -> CellOutput {
    const auto start = std::chrono::steady_clock::now();
    const Instance& inst = instances[cell.instance];
    const spectrum::ChannelPlan& plan = plans.at(inst.n);

    const auto graph =
        netgraph::expand(inst.topology, cell.source, cell.l_wss);
    const auto routes = routing::route_all(graph);
    const auto baseline = alloc::round_robin(routes.lambda, plan.rates);

    CellOutput output;
    for (const auto& strategy : config.strategies) {
      alloc::Allocation allocation;
      if (strategy == "round_robin") {
        allocation = baseline;
      } else if (strategy == "first_fit") {
        allocation = alloc::first_fit(routes.lambda, plan.rates).allocation;
      } else if (strategy == "modified_lpt") {
        allocation = alloc::modified_lpt(routes.lambda, plan.rates).allocation;
      } else if (strategy == "modified_bd") {
        allocation = alloc::modified_bd(routes.lambda, plan.rates).allocation;
      } else {  // exact
        const std::size_t size = plan.rates.size() * routes.lambda.size();
        if (size > config.exact.max_m_times_kappa) {
          output.skipped.push_back(cell_key(inst, cell.source, cell.l_wss) +
                                   ": exact skipped (m*kappa=" +
                                   std::to_string(size) + ")");
          continue;
        }
        alloc::ExactOptions opts;
        opts.time_limit_s = config.exact.time_limit_s;
        allocation =
            alloc::exact_maxmin(routes.lambda, plan.rates, opts).allocation;
      }
      ResultRow row;
      row.topology = inst.name;
      row.n = inst.n;
      row.k = inst.k;
      row.beta = inst.beta;
      row.seed = inst.seed;
      row.is_ws = inst.is_ws;
      row.source_idx = cell.source;
      row.source = inst.topology.labels[cell.source];
      row.l_wss = cell.l_wss;
      row.strategy = strategy;
      row.kappa = routes.kappa();
      row.m = plan.rates.size();
      row.metrics = metrics::report(allocation, baseline);
      output.rows.push_back(std::move(row));
    }
    output.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return output;
  };

  std::vector<std::optional<CellOutput>> outputs(cells.size());
  std::vector<std::string> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) break;
      try {
        outputs[i] = run_cell(cells[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  {
    std::vector<std::thread> pool;
    const unsigned n_threads =
        std::min<std::size_t>(out.workers, std::max<std::size_t>(cells.size(), 1));
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string key = cell_key(instances[cells[i].instance],
                                     cells[i].source, cells[i].l_wss);
    if (outputs[i]) {
      for (auto& row : outputs[i]->rows) out.rows.push_back(std::move(row));
      for (auto& s : outputs[i]->skipped) out.skipped.push_back(std::move(s));
      out.timings[key] = outputs[i]->seconds;
    } else {
      out.failures.push_back(key + ": " + errors[i]);
    }
  }
  return out;
}

namespace {

std::string ws_field(const ResultRow& r, const std::string& value) {
  return r.is_ws ? value : "";
}

}  // namespace

void write_results_csv(const RunResult& r, std::ostream& os) {
  os << "topology,n,k,beta,seed,source,l_wss_db,strategy,kappa,m,"
        "min_rate,median_rate,normalized_min,jain,config_hash\n";
  for (const auto& row : r.rows) {
    os << row.topology << ',' << row.n << ',' << ws_field(row, std::to_string(row.k))
       << ',' << ws_field(row, format_double(row.beta)) << ','
       << ws_field(row, std::to_string(row.seed)) << ',' << row.source << ','
       << format_double(row.l_wss) << ',' << row.strategy << ',' << row.kappa
       << ',' << row.m << ',' << format_double(row.metrics.min_rate) << ','
       << format_double(row.metrics.median_rate) << ','
       << format_double(row.metrics.normalized_min) << ','
       << format_double(row.metrics.jain) << ',' << r.config_hash << '\n';
  }
}

void write_importance_csv(const RunResult& r, std::ostream& os) {
  os << "topology,l_wss_db,strategy,jain_source_importance,config_hash\n";
  // (l_wss, strategy) -> source -> min rate, plus a per-source best.
  std::map<std::pair<double, std::string>, std::map<std::size_t, double>> data;
  for (const auto& row : r.rows) {
    if (row.is_ws) continue;
    auto& per_source = data[{row.l_wss, row.strategy}];
    per_source[row.source_idx] = row.metrics.min_rate;
    auto& best = data[{row.l_wss, "best"}][row.source_idx];
    best = std::max(best, row.metrics.min_rate);
  }
  for (const auto& [key, per_source] : data) {
    if (per_source.size() < 2) continue;
    std::vector<double> values;
    values.reserve(per_source.size());
    std::string topology;
    for (const auto& row : r.rows) {
      if (!row.is_ws) {
        topology = row.topology;
        break;
      }
    }
    for (const auto& [src, v] : per_source) values.push_back(v);
    os << topology << ',' << format_double(key.first) << ',' << key.second
       << ',' << format_double(metrics::jain_index(values)) << ','
       << r.config_hash << '\n';
  }
}

namespace {

struct Aggregate {
  std::vector<double> min_rate;
  std::vector<double> median_rate;
  std::vector<double> jain;
  std::vector<double> importance;
};

std::pair<double, double> mean_ci95(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  if (v.size() < 2) return {mean, 0.0};
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, 1.96 * std::sqrt(var / n)};
}

}  // namespace

void write_ws_aggregate_csv(const RunResult& r, std::ostream& os) {
  os << "n,k,beta,l_wss_db,strategy,replications,"
        "min_rate_mean,min_rate_ci95,median_rate_mean,median_rate_ci95,"
        "jain_mean,jain_ci95,importance_mean,importance_ci95,config_hash\n";
  // Cell key without seed -> seed -> per-source rows.
  using CellId = std::tuple<int, int, double, double, std::string>;
  std::map<CellId, std::map<std::uint64_t, std::vector<const ResultRow*>>> data;
  for (const auto& row : r.rows) {
    if (!row.is_ws) continue;
    data[{row.n, row.k, row.beta, row.l_wss, row.strategy}][row.seed]
        .push_back(&row);
  }
  for (const auto& [key, by_seed] : data) {
    Aggregate agg;
    for (const auto& [seed, rows] : by_seed) {
      // Metrics are taken at the max-min-optimal source of this instance.
      const ResultRow* best = rows.front();
      std::vector<double> per_source;
      per_source.reserve(rows.size());
      for (const ResultRow* row : rows) {
        per_source.push_back(row->metrics.min_rate);
        if (row->metrics.min_rate > best->metrics.min_rate) best = row;
      }
      agg.min_rate.push_back(best->metrics.min_rate);
      agg.median_rate.push_back(best->metrics.median_rate);
      agg.jain.push_back(best->metrics.jain);
      if (per_source.size() >= 2) {
        agg.importance.push_back(metrics::jain_index(per_source));
      }
    }
    if (agg.min_rate.empty()) continue;
    const auto [min_mean, min_ci] = mean_ci95(agg.min_rate);
    const auto [med_mean, med_ci] = mean_ci95(agg.median_rate);
    const auto [jain_mean, jain_ci] = mean_ci95(agg.jain);
    const auto [imp_mean, imp_ci] =
        agg.importance.empty() ? std::pair<double, double>{0.0, 0.0}
                               : mean_ci95(agg.importance);
    os << std::get<0>(key) << ',' << std::get<1>(key) << ','
       << format_double(std::get<2>(key)) << ','
       << format_double(std::get<3>(key)) << ',' << std::get<4>(key) << ','
       << agg.min_rate.size() << ',' << format_double(min_mean) << ','
       << format_double(min_ci) << ',' << format_double(med_mean) << ','
       << format_double(med_ci) << ',' << format_double(jain_mean) << ','
       << format_double(jain_ci) << ',' << format_double(imp_mean) << ','
       << format_double(imp_ci) << ',' << r.config_hash << '\n';
  }
}

int run_to_dir(const ExperimentConfig& config) {
  const std::string started = iso_now();
  RunResult result = run(config);

  std::filesystem::create_directories(config.output_dir);
  const auto dir = std::filesystem::path(config.output_dir);
  {
    std::ofstream os(dir / "results.csv");
    write_results_csv(result, os);
  }
  bool any_ws = false;
  bool any_fixed = false;
  for (const auto& row : result.rows) {
    (row.is_ws ? any_ws : any_fixed) = true;
  }
  if (any_ws) {
    std::ofstream os(dir / "ws_aggregate.csv");
    write_ws_aggregate_csv(result, os);
  }
  if (any_fixed) {
    std::ofstream os(dir / "importance.csv");
    write_importance_csv(result, os);
  }
  {
    nlohmann::json manifest;
    manifest["config"] = config.to_json();
    manifest["config_hash"] = result.config_hash;
    manifest["started"] = started;
    manifest["finished"] = iso_now();
    manifest["workers"] = result.workers;
    manifest["rows"] = result.rows.size();
    manifest["failures"] = result.failures;
    manifest["skipped"] = result.skipped;
    manifest["timings_s"] = result.timings;
    if (config.topology.kind == TopologySpec::Kind::ws) {
      // Record how each k/n cell rounded to an even degree.
      auto degrees = nlohmann::json::array();
      for (int n : config.topology.ws.n) {
        for (double kon : config.topology.ws.k_over_n) {
          degrees.push_back({{"n", n}, {"k_over_n", kon},
                             {"k", even_degree(kon, n)}});
        }
      }
      manifest["ws_degrees"] = degrees;
    }
    std::ofstream os(dir / "manifest.json");
    os << manifest.dump(2) << '\n';
  }
  return result.failures.empty() ? 0 : 2;
}

namespace {

// Minimal CSV reader for our own outputs: no quoting, header row first.
std::vector<std::map<std::string, std::string>> read_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty csv: " + path);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) header.push_back(field);
  }
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    fields.resize(header.size());
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string metric_column(const std::string& kind) {
  if (kind == "minrate") return "min_rate";
  if (kind == "median") return "median_rate";
  if (kind == "jain") return "jain";
  throw ConfigError("unknown plot kind: " + kind);
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

}  // namespace

std::vector<std::string> plot_results(const std::string& results_dir,
                                      const std::string& kind,
                                      const std::string& out_dir) {
  if (kind != "minrate" && kind != "median" && kind != "jain" &&
      kind != "importance") {
    throw ConfigError("unknown plot kind: " + kind);
  }
  const auto dir = std::filesystem::path(results_dir);
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;

  auto rows = read_csv((dir / "results.csv").string());
  if (rows.empty()) throw ConfigError("no result rows to plot");
  const bool is_ws = rows.front().at("topology") == "ws";

  auto emit = [&](const std::string& name, auto writer) {
    const auto path = std::filesystem::path(out_dir) / name;
    std::ofstream os(path);
    writer(os);
    written.push_back(path.string());
  };

  if (kind == "importance") {
    if (is_ws) {
      auto agg = read_csv((dir / "ws_aggregate.csv").string());
      // One chart per beta: importance vs k/n, one line per (n, strategy).
      std::set<std::string> betas;
      for (auto& r : agg) betas.insert(r.at("beta"));
      for (const auto& beta : betas) {
        std::map<std::string, std::map<double, double>> series_data;
        std::set<double> xs;
        for (auto& r : agg) {
          if (r.at("beta") != beta) continue;
          const double x = std::stod(r.at("k")) / std::stod(r.at("n"));
          xs.insert(x);
          series_data["n=" + r.at("n") + " " + r.at("strategy")][x] =
              std::stod(r.at("importance_mean"));
        }
        std::vector<double> x_list(xs.begin(), xs.end());
        std::vector<plot::Series> series;
        for (auto& [label, points] : series_data) {
          plot::Series s;
          s.label = label;
          for (double x : x_list) {
            s.values.push_back(points.count(x) ? points[x]
                                               : std::nan(""));
          }
          series.push_back(std::move(s));
        }
        plot::ChartOptions opts;
        opts.title = "Source-placement importance, beta=" + beta;
        opts.x_label = "k/n";
        opts.y_label = "Jain index over sources";
        emit("ws_importance_beta" + sanitize(beta) + ".svg",
             [&](std::ostream& os) { plot::lines(os, x_list, series, opts); });
      }
    } else {
      auto imp = read_csv((dir / "importance.csv").string());
      std::set<std::string> lwss;
      std::set<std::string> strategies;
      for (auto& r : imp) {
        lwss.insert(r.at("l_wss_db"));
        strategies.insert(r.at("strategy"));
      }
      std::vector<std::string> groups(lwss.begin(), lwss.end());
      std::vector<plot::Series> series;
      for (const auto& strat : strategies) {
        plot::Series s;
        s.label = strat;
        for (const auto& l : groups) {
          double v = std::nan("");
          for (auto& r : imp) {
            if (r.at("strategy") == strat && r.at("l_wss_db") == l) {
              v = std::stod(r.at("jain_source_importance"));
            }
          }
          s.values.push_back(v);
        }
        series.push_back(std::move(s));
      }
      plot::ChartOptions opts;
      opts.title = "Source-placement importance";
      opts.x_label = "WSS loss (dB)";
      opts.y_label = "Jain index over sources";
      emit("importance.svg", [&](std::ostream& os) {
        plot::grouped_bars(os, groups, series, opts);
      });
    }
    return written;
  }

  const std::string column = metric_column(kind);
  if (!is_ws) {
    // Grouped bars per WSS loss: groups are sources, bars are strategies.
    std::set<std::string> lwss;
    for (auto& r : rows) lwss.insert(r.at("l_wss_db"));
    for (const auto& l : lwss) {
      std::vector<std::string> groups;
      std::set<std::string> strategies;
      for (auto& r : rows) {
        if (r.at("l_wss_db") != l) continue;
        if (std::find(groups.begin(), groups.end(), r.at("source")) ==
            groups.end()) {
          groups.push_back(r.at("source"));
        }
        strategies.insert(r.at("strategy"));
      }
      std::vector<plot::Series> series;
      for (const auto& strat : strategies) {
        plot::Series s;
        s.label = strat;
        for (const auto& g : groups) {
          double v = std::nan("");
          for (auto& r : rows) {
            if (r.at("l_wss_db") == l && r.at("source") == g &&
                r.at("strategy") == strat) {
              v = std::stod(r.at(column));
            }
          }
          s.values.push_back(v);
        }
        series.push_back(std::move(s));
      }
      plot::ChartOptions opts;
      opts.title = kind + " by source, WSS loss " + l + " dB";
      opts.x_label = "source node";
      opts.y_label = column;
      emit(kind + "_lwss" + sanitize(l) + ".svg", [&](std::ostream& os) {
        plot::grouped_bars(os, groups, series, opts);
      });
    }
    return written;
  }

  // WS sweeps: one chart per beta from the aggregated means.
  auto agg = read_csv((dir / "ws_aggregate.csv").string());
  std::set<std::string> betas;
  std::set<std::string> ns;
  for (auto& r : agg) {
    betas.insert(r.at("beta"));
    ns.insert(r.at("n"));
  }
  for (const auto& beta : betas) {
    std::map<std::string, std::map<double, double>> series_data;
    std::set<double> xs;
    for (auto& r : agg) {
      if (r.at("beta") != beta) continue;
      const double x = std::stod(r.at("k")) / std::stod(r.at("n"));
      xs.insert(x);
      series_data["n=" + r.at("n") + " " + r.at("strategy")][x] =
          std::stod(r.at(column + "_mean"));
    }
    std::vector<double> x_list(xs.begin(), xs.end());
    std::vector<plot::Series> series;
    for (auto& [label, points] : series_data) {
      plot::Series s;
      s.label = label;
      for (double x : x_list) {
        s.values.push_back(points.count(x) ? points[x] : std::nan(""));
      }
      series.push_back(std::move(s));
    }
    plot::ChartOptions opts;
    opts.title = kind + " vs k/n, beta=" + beta;
    opts.x_label = "k/n";
    opts.y_label = column + " (mean over replications)";
    if (kind == "jain" && ns.size() == 1) {
      const double n = std::stod(*ns.begin());
      const double floor = 2.0 / (n * (n - 1.0));
      opts.y_min = floor;
      opts.floor_annotation = format_double(floor);
    }
    emit("ws_" + kind + "_beta" + sanitize(beta) + ".svg",
         [&](std::ostream& os) { plot::lines(os, x_list, series, opts); });
  }
  return written;
}

}  // namespace eprnet::harness
