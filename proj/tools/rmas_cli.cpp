#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rmas/error.hpp"
#include "rmas/report_io.hpp"
#include "rmas/rescue.hpp"
#include "rmas/robustness.hpp"
#include "rmas/scenario.hpp"

namespace {

using nlohmann::json;
using namespace rmas;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::string path_in(const std::string& dir, const std::string& file) {
  return dir.empty() ? file : dir + "/" + file;
}

// Finite doubles as numbers, non-finite as null so the report stays valid JSON.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ScenarioConfig load_with_seed(const CommonArgs& a) {
  if (a.config.empty()) fail(ErrorCategory::InvalidInput, "--config is required");
  ScenarioConfig cfg = load_config(a.config);
  if (a.seed) {
    // Reseed every random draw of the scenario, keeping its structure.
    std::mt19937_64 rng(*a.seed);
    cfg.initial.seed = rng();
    for (auto& d : cfg.dos.intervals)
      if (d.random) d.random->seed = rng();
    if (cfg.network.kind == "preferential") cfg.network.seed = rng();
  }
  return cfg;
}

std::string output_dir(const CommonArgs& a, const ScenarioConfig& cfg) {
  const std::string dir = a.out.empty() ? cfg.output_dir : a.out;
  ensure_directory(dir);
  return dir;
}

json graph_json(const Graph& g) {
  json e = json::array();
  for (const Edge& x : g.edges()) e.push_back({x.u, x.v});
  return {{"node_count", g.node_count()}, {"edges", e}};
}

json analyze(const ScenarioConfig& cfg) {
  const SwitchingNetwork net = resolve_network(cfg);
  const PEReport pe = pe_margin(net, cfg.pe_window);
  json r;
  r["mu"] = pe.mu;
  r["window_T"] = pe.window_T;
  r["lambda2_integral"] = pe.lambda2_integral;
  r["delta_floor"] = pe.delta_floor;
  r["projection_discrepancy"] = pe.projection_discrepancy;
  r["effective_graph"] = graph_json(pe.effective_graph);
  r["union_lambda2"] = algebraic_connectivity(laplacian(net.union_graph()));
  r["vertex_connectivity"] = vertex_connectivity(pe.effective_graph);
  if (pe.effective_graph.node_count() <= kExactEnumerationCap) {
    const BoundChainReport chain = check_bound_chain(pe);
    r["r_robustness"] = chain.r;
    r["bound_chain"] = {{"lower_ok", chain.lower_ok},       {"r_le_kappa", chain.r_le_kappa},
                        {"kappa_le_n1", chain.kappa_le_n1}, {"mu_le_mu_hat", chain.mu_le_mu_hat},
                        {"fiedler_ok", chain.fiedler_ok},   {"holds", chain.holds()}};
  } else {
    r["r_robustness"] = nullptr;
    r["bound_chain"] = "above exact enumeration cap";
  }
  const std::set<int> mal = malicious_set(cfg);
  if (!mal.empty()) {
    const RemovalCheck rc = check_removal(net, mal, cfg.pe_window);
    r["removal"] = {{"removed", rc.removed},
                    {"mu_before", rc.mu_before},
                    {"mu_after", rc.mu_after},
                    {"lambda2_before", rc.lambda2_before},
                    {"lambda2_after", rc.lambda2_after},
                    {"spectral_bound_ok", rc.spectral_bound_ok},
                    {"window_bound_ok", rc.window_bound_ok},
                    {"connected_after", rc.connected_after}};
    r["one_local"] = is_f_local(pe.effective_graph, mal, 1);
  }
  return r;
}

json consensus_json(const SimulationTrace& trace, const std::vector<int>& agents) {
  const ConsensusMetrics m = consensus_metrics(trace.x.back(), agents);
  return {{"final_gap", num(m.max_gap)}, {"final_max_speed", num(m.max_speed)}, {"t_final", trace.t.back()}};
}

void write_rescue_outputs(const ScenarioConfig& cfg, const SimulationSetup& setup, const RescueResult& res,
                          const std::string& dir, double seconds) {
  write_text(path_in(dir, "trace.csv"), trace_csv(res.trace));
  write_text(path_in(dir, "events.csv"), events_csv(res.events));
  write_text(path_in(dir, "residuals.csv"), residuals_csv(res.residuals));
  write_text(path_in(dir, "plot_consensus.csv"), long_csv(consensus_rows(res.trace, res.cooperative)));
  write_text(path_in(dir, "plot_residuals.csv"), long_csv(residual_rows(res.residuals)));
  write_text(path_in(dir, "plot_lambda2.csv"), long_csv(lambda2_rows(res.lambda2_series)));

  const PostIsolationReport post = post_isolation_connectivity(setup.network, res.removed_edges, cfg.pe_window);
  std::vector<int> live;
  for (int i : res.cooperative)
    if (!post.dropped.count(i)) live.push_back(i);

  json detections = json::object();
  int false_isolations = 0;
  for (const auto& e : res.events) {
    const std::string key = std::to_string(e.isolated);
    if (!detections.contains(key)) detections[key] = json::array();
    detections[key].push_back({{"t", e.t}, {"detector", e.detector}});
    if (!res.malicious.count(e.isolated)) ++false_isolations;
  }
  json s;
  s["name"] = cfg.name;
  s["isolation_events"] = res.events.size();
  s["false_isolations"] = false_isolations;
  s["detections"] = detections;
  s["exceedances"] = res.exceedances;
  s["malicious_exceedances"] = res.malicious_exceedances;
  s["reinitializations"] = res.reinitializations;
  s["post_isolation"] = {{"mu", post.pe.mu},
                         {"lambda2_integral", post.pe.lambda2_integral},
                         {"dropped", post.dropped},
                         {"disconnected", post.disconnected}};
  s["consensus"] = consensus_json(res.trace, live);
  s["wall_seconds"] = seconds;
  write_text(path_in(dir, "summary.json"), s.dump(2) + "\n");
  std::cout << s.dump(2) << "\n";
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void run_rescue_verb(const ScenarioConfig& cfg, const std::string& dir) {
  save_config(cfg, path_in(dir, "config.json"));
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationSetup setup = build_setup(cfg);
  const RescueResult res = run_rescue(setup, malicious_set(cfg), cfg.detector);
  write_rescue_outputs(cfg, setup, res, dir, elapsed(t0));
}

void add_common(CLI::App* sub, CommonArgs& a, bool needs_config) {
  auto* c = sub->add_option("--config", a.config, "Scenario JSON document");
  if (needs_config) c->required();
  sub->add_option("--seed", a.seed, "Seed for random draws");
  sub->add_option("--out", a.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient second-order multi-agent consensus toolkit"};
  app.require_subcommand(1);
  CommonArgs args;
  auto* analyze_cmd = app.add_subcommand("analyze-graph", "Connectivity and robustness metrics");
  auto* simulate_cmd = app.add_subcommand("simulate", "Closed-loop run without detection");
  auto* rescue_cmd = app.add_subcommand("rescue", "Run with local detection and isolation");
  auto* msr_cmd = app.add_subcommand("dp-msr", "Trimmed-mean baseline run");
  auto* ex1_cmd = app.add_subcommand("example1", "8-agent scenario with two ramp attackers");
  auto* ex2_cmd = app.add_subcommand("example2", "84-agent scenario with nine attackers");
  for (auto* s : {analyze_cmd, simulate_cmd, rescue_cmd, msr_cmd}) add_common(s, args, true);
  for (auto* s : {ex1_cmd, ex2_cmd}) add_common(s, args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code != 0) std::cerr << "error-category: " << category_name(ErrorCategory::InvalidInput) << "\n";
    return code;
  }

  try {
    if (analyze_cmd->parsed()) {
      const ScenarioConfig cfg = load_with_seed(args);
      const std::string dir = output_dir(args, cfg);
      const json r = analyze(cfg);
      write_text(path_in(dir, "metrics.json"), r.dump(2) + "\n");
      std::cout << r.dump(2) << "\n";
    } else if (simulate_cmd->parsed()) {
      const ScenarioConfig cfg = load_with_seed(args);
      const std::string dir = output_dir(args, cfg);
      const SimulationTrace trace = simulate(build_setup(cfg));
      const std::vector<int> coop = cooperative_agents(cfg.network.node_count, malicious_set(cfg));
      write_text(path_in(dir, "trace.csv"), trace_csv(trace));
      write_text(path_in(dir, "plot_consensus.csv"), long_csv(consensus_rows(trace, coop)));
      const json s = {{"name", cfg.name}, {"consensus", consensus_json(trace, coop)}};
      write_text(path_in(dir, "summary.json"), s.dump(2) + "\n");
      std::cout << s.dump(2) << "\n";
    } else if (rescue_cmd->parsed()) {
      const ScenarioConfig cfg = load_with_seed(args);
      run_rescue_verb(cfg, output_dir(args, cfg));
    } else if (msr_cmd->parsed()) {
      const ScenarioConfig cfg = load_with_seed(args);
      const std::string dir = output_dir(args, cfg);
      const std::set<int> mal = malicious_set(cfg);
      const SimulationTrace trace = dp_msr_run(build_setup(cfg), mal, cfg.dpmsr);
      const std::vector<int> coop = cooperative_agents(cfg.network.node_count, mal);
      write_text(path_in(dir, "trace.csv"), trace_csv(trace));
      write_text(path_in(dir, "plot_consensus.csv"), long_csv(consensus_rows(trace, coop)));
      const json s = {{"name", cfg.name}, {"F", cfg.dpmsr.F}, {"consensus", consensus_json(trace, coop)}};
      write_text(path_in(dir, "summary.json"), s.dump(2) + "\n");
      std::cout << s.dump(2) << "\n";
    } else {
      const bool first = ex1_cmd->parsed();
      const std::uint64_t seed = args.seed.value_or(1);
      ScenarioConfig cfg = args.config.empty() ? (first ? generate_example1(seed) : generate_example2(seed))
                                               : load_config(args.config);
      run_rescue_verb(cfg, output_dir(args, cfg));
    }
  } catch (const Error& e) {
    std::cerr << "error-category: " << category_name(e.category()) << "\n" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error-category: internal\n" << e.what() << "\n";
    return 3;
  }
  return 0;
}
