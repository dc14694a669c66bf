#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eprnet/allocation.hpp"
#include "eprnet/errors.hpp"
#include "eprnet/experiment.hpp"
#include "eprnet/metrics.hpp"
#include "eprnet/netgraph.hpp"
#include "eprnet/routing.hpp"
#include "eprnet/spectrum.hpp"
#include "eprnet/topology.hpp"

namespace {

using namespace eprnet;

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot write " + path);
  return file;
}

topo::Topology load_named_topology(const std::string& name) {
  if (name == "ilec") return topo::load_ilec();
  return topo::load_topology(name);
}

struct SpectrumArgs {
  bool table_rep_rate = false;
  int scale_n = 0;
  double channels_per_pair = 1.36;
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& args) {
  const spectrum::SourceParams params = args.table_rep_rate
                                            ? spectrum::table_params()
                                            : spectrum::calibrated_params();
  spectrum::ChannelPlan plan =
      spectrum::channel_rates(params, spectrum::default_geometry());
  if (args.scale_n > 0) {
    plan = spectrum::scaled_plan(params, plan, 136, args.scale_n,
                                 params.band_total, args.channels_per_pair);
  }
  std::ofstream file;
  spectrum::write_csv(plan, open_out(file, args.out));
  return 0;
}

struct TopologyArgs {
  std::string ws;  // "n,k,beta,seed"
  double edge_km = 5.0;
  double alpha = 0.4;
  std::string out;
};

int cmd_topology(const TopologyArgs& args) {
  topo::Topology t;
  if (args.ws.empty()) {
    t = topo::load_ilec();
  } else {
    topo::WattsStrogatzSpec spec;
    if (std::sscanf(args.ws.c_str(), "%zu,%zu,%lf,%llu", &spec.n, &spec.k,
                    &spec.beta,
                    reinterpret_cast<unsigned long long*>(&spec.seed)) != 4) {
      throw ConfigError("--ws expects n,k,beta,seed");
    }
    spec.edge_length_km = args.edge_km;
    t = topo::generate_ws(spec);
    t.fiber_alpha = args.alpha;
  }
  std::ofstream file;
  open_out(file, args.out) << topo::to_json(t).dump(2) << '\n';
  return 0;
}

struct RouteArgs {
  std::string topology = "ilec";
  std::string source;
  double l_wss = 4.0;
  double alpha = -1.0;
  std::string out;
  std::string dump_graph;
};

int cmd_route(const RouteArgs& args) {
  topo::Topology t = load_named_topology(args.topology);
  if (args.alpha >= 0.0) t.fiber_alpha = args.alpha;
  std::size_t source;
  if (!args.source.empty()) {
    source = t.index_of(args.source);
  } else if (t.default_source) {
    source = *t.default_source;
  } else {
    throw ConfigError("no source given and the topology has no default");
  }
  const auto graph = netgraph::expand(t, source, args.l_wss);
  if (!args.dump_graph.empty()) {
    std::ofstream dump(args.dump_graph);
    if (!dump) throw ConfigError("cannot write " + args.dump_graph);
    netgraph::dump_edge_list(graph, dump);
  }
  const auto routes = routing::route_all(graph);
  std::ofstream file;
  routing::write_csv(routes, graph, open_out(file, args.out));
  return 0;
}

struct AllocateArgs {
  std::string topology = "ilec";
  std::string source;
  double l_wss = 4.0;
  std::string strategy = "modified_lpt";
  std::string plan = "reference";
  int search_scale = 1;
  double exact_time_limit = 30.0;
  std::string out_csv;
};

int cmd_allocate(const AllocateArgs& args) {
  topo::Topology t = load_named_topology(args.topology);
  std::size_t source;
  if (!args.source.empty()) {
    source = t.index_of(args.source);
  } else if (t.default_source) {
    source = *t.default_source;
  } else {
    throw ConfigError("no source given and the topology has no default");
  }
  const auto params = spectrum::calibrated_params();
  spectrum::ChannelPlan plan =
      spectrum::channel_rates(params, spectrum::default_geometry());
  if (args.plan == "scaled") {
    plan = spectrum::scaled_plan(params, plan, 136,
                                 static_cast<int>(t.n()), params.band_total);
  } else if (args.plan != "reference") {
    throw ConfigError("--plan must be reference or scaled");
  }

  const auto graph = netgraph::expand(t, source, args.l_wss);
  const auto routes = routing::route_all(graph);

  alloc::StrategyResult result;
  if (args.strategy == "round_robin") {
    const auto started = std::chrono::steady_clock::now();
    result.allocation = alloc::round_robin(routes.lambda, plan.rates);
    result.strategy = "round_robin";
    result.objective = *std::min_element(result.allocation.received.begin(),
                                         result.allocation.received.end());
    result.threshold = result.objective;
    result.upper_bound = result.objective;
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  } else if (args.strategy == "first_fit") {
    result = alloc::first_fit(routes.lambda, plan.rates, args.search_scale);
  } else if (args.strategy == "modified_lpt") {
    result = alloc::modified_lpt(routes.lambda, plan.rates);
  } else if (args.strategy == "modified_bd") {
    result = alloc::modified_bd(routes.lambda, plan.rates);
  } else if (args.strategy == "exact") {
    alloc::ExactOptions opts;
    opts.time_limit_s = args.exact_time_limit;
    result = alloc::exact_maxmin(routes.lambda, plan.rates, opts);
  } else {
    throw ConfigError("unknown strategy: " + args.strategy);
  }

  if (!args.out_csv.empty()) {
    std::vector<std::string> pair_labels;
    for (const auto& r : routes.routes) {
      pair_labels.push_back(t.labels[r.i] + "-" + t.labels[r.j]);
    }
    std::ofstream os(args.out_csv);
    if (!os) throw ConfigError("cannot write " + args.out_csv);
    alloc::write_csv(result.allocation, routes.lambda, plan.rates, pair_labels,
                     os);
  }

  const auto baseline = alloc::round_robin(routes.lambda, plan.rates);
  const auto report = metrics::report(result.allocation, baseline);
  nlohmann::json j = alloc::result_json(result);
  j["metrics"] = {{"min_rate", report.min_rate},
                  {"median_rate", report.median_rate},
                  {"normalized_min", report.normalized_min},
                  {"jain", report.jain}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-source entanglement distribution: routing and "
               "spectrum allocation experiments"};
  app.require_subcommand(1);

  SpectrumArgs spectrum_args;
  auto* sc_spectrum =
      app.add_subcommand("spectrum", "Write a channel-plan CSV");
  sc_spectrum->add_flag("--table-rep-rate", spectrum_args.table_rep_rate,
                        "Use the tabulated repetition rate instead of the "
                        "calibrated one");
  sc_spectrum->add_option("--scale-n", spectrum_args.scale_n,
                          "Rescale the plan for an n-node network");
  sc_spectrum->add_option("--channels-per-pair",
                          spectrum_args.channels_per_pair,
                          "Channel budget per node pair for --scale-n");
  sc_spectrum->add_option("-o,--out", spectrum_args.out, "Output CSV path");

  TopologyArgs topology_args;
  auto* sc_topology =
      app.add_subcommand("topology", "Export a topology as JSON");
  sc_topology->add_option("--ws", topology_args.ws,
                          "Generate Watts-Strogatz: n,k,beta,seed");
  sc_topology->add_option("--edge-km", topology_args.edge_km,
                          "Uniform edge length for --ws");
  sc_topology->add_option("--alpha", topology_args.alpha, "Fiber loss dB/km");
  sc_topology->add_option("-o,--out", topology_args.out, "Output JSON path");

  RouteArgs route_args;
  auto* sc_route =
      app.add_subcommand("route", "Write the route table CSV for a source");
  sc_route->add_option("--topology", route_args.topology,
                       "\"ilec\" or a topology JSON path");
  sc_route->add_option("--source", route_args.source, "Source node label");
  sc_route->add_option("--l-wss", route_args.l_wss, "WSS loss in dB");
  sc_route->add_option("--alpha", route_args.alpha,
                       "Override fiber loss dB/km");
  sc_route->add_option("--dump-graph", route_args.dump_graph,
                       "Also dump the expanded graph edge list");
  sc_route->add_option("-o,--out", route_args.out, "Output CSV path");

  AllocateArgs allocate_args;
  auto* sc_allocate = app.add_subcommand(
      "allocate", "Run one allocation strategy on one instance");
  sc_allocate->add_option("--topology", allocate_args.topology,
                          "\"ilec\" or a topology JSON path");
  sc_allocate->add_option("--source", allocate_args.source,
                          "Source node label");
  sc_allocate->add_option("--l-wss", allocate_args.l_wss, "WSS loss in dB");
  sc_allocate->add_option("--strategy", allocate_args.strategy,
                          "round_robin | first_fit | modified_lpt | "
                          "modified_bd | exact");
  sc_allocate->add_option("--plan", allocate_args.plan, "reference | scaled");
  sc_allocate->add_option("--search-scale", allocate_args.search_scale,
                          "first_fit threshold grid steps per rate unit");
  sc_allocate->add_option("--exact-time-limit",
                          allocate_args.exact_time_limit,
                          "Exact solver budget in seconds");
  sc_allocate->add_option("--out-csv", allocate_args.out_csv,
                          "Write the channel assignment CSV here");

  std::string config_path;
  auto* sc_experiment =
      app.add_subcommand("experiment", "Run a full experiment grid");
  sc_experiment
      ->add_option("--config", config_path, "Experiment config JSON")
      ->required();

  std::string plot_results_dir;
  std::string plot_kind;
  std::string plot_out = "plots";
  auto* sc_plot = app.add_subcommand("plot", "Render SVG charts");
  sc_plot
      ->add_option("--results", plot_results_dir,
                   "Experiment output directory")
      ->required();
  sc_plot
      ->add_option("--kind", plot_kind, "minrate | median | jain | importance")
      ->required();
  sc_plot->add_option("-o,--out", plot_out, "Directory for the SVG files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_spectrum->parsed()) return cmd_spectrum(spectrum_args);
    if (sc_topology->parsed()) return cmd_topology(topology_args);
    if (sc_route->parsed()) return cmd_route(route_args);
    if (sc_allocate->parsed()) return cmd_allocate(allocate_args);
    if (sc_experiment->parsed()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config: " + config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
      }
      const auto config = harness::ExperimentConfig::from_json(j);
      return harness::run_to_dir(config);
    }
    if (sc_plot->parsed()) {
      const auto files =
          harness::plot_results(plot_results_dir, plot_kind, plot_out);
      for (const auto& f : files) std::cout << f << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
