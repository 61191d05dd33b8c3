#include "rmas/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "rmas/error.hpp"
#include "rmas/robustness.hpp"

namespace rmas {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!obj.is_object()) fail(ErrorCategory::Parse, "field '" + path + "': expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(ErrorCategory::Parse, "field '" + join(path, it.key()) + "': unknown key");
  }
}

template <class T>
T field(const json& obj, const char* key, const std::string& path, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    fail(ErrorCategory::Parse, "field '" + join(path, key) + "': " + e.what());
  }
}

const json& required(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCategory::Parse, "field '" + join(path, key) + "': missing");
  return *it;
}

json edges_to_json(const std::vector<Edge>& edges) {
  json a = json::array();
  for (const Edge& e : edges) a.push_back({e.u, e.v});
  return a;
}

std::vector<Edge> edges_from_json(const json& a, const std::string& path) {
  if (!a.is_array()) fail(ErrorCategory::Parse, "field '" + path + "': expected an edge list");
  std::vector<Edge> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const json& e = a[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      fail(ErrorCategory::Parse, "field '" + path + "[" + std::to_string(k) + "]': expected [i, j]");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

// Prefixes enum-name parse failures with the field they came from.
template <class Fn>
auto named_field(const std::string& path, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.category() != ErrorCategory::Parse) throw;
    fail(ErrorCategory::Parse, "field '" + path + "': " + e.what());
  }
}

json to_json_network(const NetworkSpec& n) {
  json j;
  j["kind"] = n.kind;
  j["node_count"] = n.node_count;
  if (n.kind == "inline") {
    json modes = json::array();
    for (const auto& m : n.modes) modes.push_back(edges_to_json(m));
    j["modes"] = modes;
    json sched = json::array();
    for (const auto& s : n.schedule) sched.push_back({s.start, s.mode});
    j["schedule"] = sched;
  } else {
    j["r"] = n.r;
    j["max_degree"] = n.max_degree;
    j["mode_count"] = n.mode_count;
    j["seed"] = n.seed;
  }
  j["dwell"] = n.dwell;
  return j;
}

NetworkSpec network_from_json(const json& j, const std::string& path) {
  check_keys(j, {"kind", "node_count", "modes", "schedule", "dwell", "r", "max_degree", "mode_count", "seed"},
             path);
  NetworkSpec n;
  n.kind = field<std::string>(j, "kind", path, "inline");
  if (n.kind != "inline" && n.kind != "preferential")
    fail(ErrorCategory::Parse, "field '" + join(path, "kind") + "': expected inline or preferential");
  n.node_count = required(j, "node_count", path).is_number_integer()
                     ? j["node_count"].get<int>()
                     : (fail(ErrorCategory::Parse, "field '" + join(path, "node_count") + "': expected integer"), 0);
  n.dwell = field<double>(j, "dwell", path, 0.0);
  if (n.kind == "inline") {
    const json& modes = required(j, "modes", path);
    if (!modes.is_array()) fail(ErrorCategory::Parse, "field '" + join(path, "modes") + "': expected array");
    for (std::size_t k = 0; k < modes.size(); ++k)
      n.modes.push_back(edges_from_json(modes[k], join(path, "modes[" + std::to_string(k) + "]")));
    if (j.contains("schedule")) {
      const json& s = j["schedule"];
      if (!s.is_array()) fail(ErrorCategory::Parse, "field '" + join(path, "schedule") + "': expected array");
      for (std::size_t k = 0; k < s.size(); ++k) {
        const json& e = s[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number_integer())
          fail(ErrorCategory::Parse,
               "field '" + join(path, "schedule[" + std::to_string(k) + "]") + "': expected [time, mode]");
        n.schedule.push_back({e[0].get<double>(), e[1].get<int>()});
      }
    }
  } else {
    n.r = field<int>(j, "r", path, 2);
    n.max_degree = field<int>(j, "max_degree", path, 0);
    n.mode_count = field<int>(j, "mode_count", path, 2);
    n.seed = field<std::uint64_t>(j, "seed", path, 0);
  }
  return n;
}

json to_json_threshold(const ThresholdPolicy& t) {
  return {{"kind", threshold_kind_name(t.kind)}, {"value", t.value}, {"scale", t.scale},
          {"rate", t.rate}, {"offset", t.offset}};
}

ThresholdPolicy threshold_from_json(const json& j, const std::string& path) {
  check_keys(j, {"kind", "value", "scale", "rate", "offset"}, path);
  ThresholdPolicy t;
  t.kind = named_field(join(path, "kind"),
                       [&] { return parse_threshold_kind(field<std::string>(j, "kind", path, "analytic")); });
  t.value = field<double>(j, "value", path, t.value);
  t.scale = field<double>(j, "scale", path, t.scale);
  t.rate = field<double>(j, "rate", path, t.rate);
  t.offset = field<double>(j, "offset", path, t.offset);
  return t;
}

std::string scope_name(ViewScope s) { return s == ViewScope::TwoHop ? "two-hop" : "one-hop"; }

ViewScope parse_scope(const std::string& s, const std::string& path) {
  if (s == "two-hop") return ViewScope::TwoHop;
  if (s == "one-hop") return ViewScope::OneHop;
  fail(ErrorCategory::Parse, "field '" + path + "': expected two-hop or one-hop");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  return rng();
}

}  // namespace

std::string serialize_config(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["network"] = to_json_network(c.network);
  j["gains"] = {{"alpha", c.gains.alpha}, {"gamma", c.gains.gamma}};
  json init;
  init["random"] = c.initial.random;
  if (c.initial.random) {
    init["seed"] = c.initial.seed;
    init["p_range"] = {c.initial.p_low, c.initial.p_high};
    init["v_range"] = {c.initial.v_low, c.initial.v_high};
  } else {
    init["p"] = c.initial.p;
    init["v"] = c.initial.v;
  }
  j["initial"] = init;
  json attacks = json::array();
  for (const auto& a : c.attacks)
    attacks.push_back({{"agent", a.agent}, {"activation_time", a.activation_time},
                       {"waveform", waveform_name(a.waveform)}, {"slope", a.slope},
                       {"value", a.value}, {"amplitude", a.amplitude}, {"omega", a.omega}});
  j["attacks"] = attacks;
  j["malicious"] = c.malicious;
  json dos = json::array();
  for (const auto& d : c.dos.intervals) {
    json e{{"start", d.start}, {"duration", d.duration}};
    if (d.random)
      e["random"] = {{"trials", d.random->trials}, {"success_prob", d.random->success_prob},
                     {"seed", d.random->seed}};
    else
      e["edges"] = edges_to_json(d.edges);
    dos.push_back(e);
  }
  j["dos"] = dos;
  const DetectorSettings& d = c.detector;
  j["detector"] = {{"threshold", to_json_threshold(d.threshold)},
                   {"reinit", reinit_policy_name(d.reinit)},
                   {"scope", scope_name(d.scope)},
                   {"dwell", d.dwell},
                   {"w_budget", d.w_budget},
                   {"pe_window", d.pe_window},
                   {"beta", d.beta},
                   {"lambda_x_fraction", d.lambda_x_fraction},
                   {"isolate", d.isolate},
                   {"residual_record_every", d.residual_record_every}};
  j["integrator"] = {{"step", c.integrator.step},
                     {"horizon", c.integrator.horizon},
                     {"record_every", c.integrator.record_every}};
  j["dpmsr"] = {{"F", c.dpmsr.F},
                {"sample_time", c.dpmsr.sample_time},
                {"follow_schedule", c.dpmsr.follow_schedule},
                {"apply_dos", c.dpmsr.apply_dos}};
  j["pe_window"] = c.pe_window;
  j["output_dir"] = c.output_dir;
  return j.dump(2) + "\n";
}

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCategory::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"name", "network", "gains", "initial", "attacks", "malicious", "dos", "detector",
                 "integrator", "dpmsr", "pe_window", "output_dir"},
             "");
  ScenarioConfig c;
  c.name = field<std::string>(j, "name", "", c.name);
  c.network = network_from_json(required(j, "network", ""), "network");

  if (j.contains("gains")) {
    const json& g = j["gains"];
    check_keys(g, {"alpha", "gamma"}, "gains");
    c.gains.alpha = field<double>(g, "alpha", "gains", c.gains.alpha);
    c.gains.gamma = field<double>(g, "gamma", "gains", c.gains.gamma);
  }
  if (j.contains("initial")) {
    const json& i = j["initial"];
    check_keys(i, {"random", "seed", "p_range", "v_range", "p", "v"}, "initial");
    c.initial.random = field<bool>(i, "random", "initial", true);
    c.initial.seed = field<std::uint64_t>(i, "seed", "initial", 0);
    auto range = field<std::vector<double>>(i, "p_range", "initial", {c.initial.p_low, c.initial.p_high});
    auto vrange = field<std::vector<double>>(i, "v_range", "initial", {c.initial.v_low, c.initial.v_high});
    if (range.size() != 2) fail(ErrorCategory::Parse, "field 'initial.p_range': expected [low, high]");
    if (vrange.size() != 2) fail(ErrorCategory::Parse, "field 'initial.v_range': expected [low, high]");
    c.initial.p_low = range[0];
    c.initial.p_high = range[1];
    c.initial.v_low = vrange[0];
    c.initial.v_high = vrange[1];
    c.initial.p = field<std::vector<double>>(i, "p", "initial", {});
    c.initial.v = field<std::vector<double>>(i, "v", "initial", {});
  }
  if (j.contains("attacks")) {
    const json& a = j["attacks"];
    if (!a.is_array()) fail(ErrorCategory::Parse, "field 'attacks': expected array");
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string p = "attacks[" + std::to_string(k) + "]";
      check_keys(a[k], {"agent", "activation_time", "waveform", "slope", "value", "amplitude", "omega"}, p);
      DeceptionAttack d;
      d.agent = required(a[k], "agent", p).is_number_integer()
                    ? a[k]["agent"].get<int>()
                    : (fail(ErrorCategory::Parse, "field '" + p + ".agent': expected integer"), 0);
      d.activation_time = field<double>(a[k], "activation_time", p, 0.0);
      d.waveform = named_field(p + ".waveform",
                               [&] { return parse_waveform(field<std::string>(a[k], "waveform", p, "ramp")); });
      d.slope = field<double>(a[k], "slope", p, 0.0);
      d.value = field<double>(a[k], "value", p, 0.0);
      d.amplitude = field<double>(a[k], "amplitude", p, 0.0);
      d.omega = field<double>(a[k], "omega", p, 0.0);
      c.attacks.push_back(d);
    }
  }
  c.malicious = field<std::vector<int>>(j, "malicious", "", {});
  if (!j.contains("malicious"))
    for (const auto& a : c.attacks) c.malicious.push_back(a.agent);
  if (j.contains("dos")) {
    const json& a = j["dos"];
    if (!a.is_array()) fail(ErrorCategory::Parse, "field 'dos': expected array");
    for (std::size_t k = 0; k < a.size(); ++k) {
      const std::string p = "dos[" + std::to_string(k) + "]";
      check_keys(a[k], {"start", "duration", "edges", "random"}, p);
      DoSInterval d;
      d.start = field<double>(a[k], "start", p, 0.0);
      d.duration = field<double>(a[k], "duration", p, 0.0);
      if (a[k].contains("random")) {
        const json& r = a[k]["random"];
        check_keys(r, {"trials", "success_prob", "seed"}, p + ".random");
        d.random = RandomDrop{field<int>(r, "trials", p + ".random", 0),
                              field<double>(r, "success_prob", p + ".random", 0.0),
                              field<std::uint64_t>(r, "seed", p + ".random", 0)};
      } else if (a[k].contains("edges")) {
        d.edges = edges_from_json(a[k]["edges"], p + ".edges");
      }
      c.dos.intervals.push_back(d);
    }
  }
  if (j.contains("detector")) {
    const json& d = j["detector"];
    const std::string p = "detector";
    check_keys(d, {"threshold", "reinit", "scope", "dwell", "w_budget", "pe_window", "beta",
                   "lambda_x_fraction", "isolate", "residual_record_every"},
               p);
    DetectorSettings& s = c.detector;
    if (d.contains("threshold")) s.threshold = threshold_from_json(d["threshold"], p + ".threshold");
    s.reinit = named_field(p + ".reinit", [&] {
      return parse_reinit_policy(field<std::string>(d, "reinit", p, reinit_policy_name(s.reinit)));
    });
    s.scope = parse_scope(field<std::string>(d, "scope", p, scope_name(s.scope)), p + ".scope");
    s.dwell = field<int>(d, "dwell", p, s.dwell);
    s.w_budget = field<double>(d, "w_budget", p, s.w_budget);
    s.pe_window = field<double>(d, "pe_window", p, s.pe_window);
    s.beta = field<double>(d, "beta", p, s.beta);
    s.lambda_x_fraction = field<double>(d, "lambda_x_fraction", p, s.lambda_x_fraction);
    s.isolate = field<bool>(d, "isolate", p, s.isolate);
    s.residual_record_every = field<int>(d, "residual_record_every", p, s.residual_record_every);
  }
  if (j.contains("integrator")) {
    const json& d = j["integrator"];
    check_keys(d, {"step", "horizon", "record_every"}, "integrator");
    c.integrator.step = field<double>(d, "step", "integrator", c.integrator.step);
    c.integrator.horizon = field<double>(d, "horizon", "integrator", c.integrator.horizon);
    c.integrator.record_every = field<int>(d, "record_every", "integrator", c.integrator.record_every);
  }
  if (j.contains("dpmsr")) {
    const json& d = j["dpmsr"];
    check_keys(d, {"F", "sample_time", "follow_schedule", "apply_dos"}, "dpmsr");
    c.dpmsr.F = field<int>(d, "F", "dpmsr", c.dpmsr.F);
    c.dpmsr.sample_time = field<double>(d, "sample_time", "dpmsr", c.dpmsr.sample_time);
    c.dpmsr.follow_schedule = field<bool>(d, "follow_schedule", "dpmsr", c.dpmsr.follow_schedule);
    c.dpmsr.apply_dos = field<bool>(d, "apply_dos", "dpmsr", c.dpmsr.apply_dos);
  }
  c.pe_window = field<double>(j, "pe_window", "", c.pe_window);
  c.output_dir = field<std::string>(j, "output_dir", "", c.output_dir);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCategory::Io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCategory::Io, "cannot write config '" + path + "'");
  out << serialize_config(cfg);
}

SwitchingNetwork resolve_network(const ScenarioConfig& cfg) {
  const NetworkSpec& n = cfg.network;
  const double horizon = cfg.integrator.horizon;
  std::vector<Graph> modes;
  try {
    if (n.kind == "inline") {
      for (const auto& m : n.modes) modes.emplace_back(n.node_count, m);
    } else {
      if (n.mode_count < 1) fail(ErrorCategory::Configuration, "mode_count must be >= 1");
      const CertifiedGraph cg = generate_r_robust_preferential(n.node_count, n.r, n.seed, n.max_degree);
      std::vector<std::vector<Edge>> split(n.mode_count);
      std::mt19937_64 rng(derive_seed(n.seed, 1));
      for (const Edge& e : cg.graph.edges()) split[rng() % n.mode_count].push_back(e);
      for (const auto& m : split) modes.emplace_back(n.node_count, m);
    }
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::InvalidInput)
      fail(ErrorCategory::Configuration, std::string("network: ") + e.what());
    throw;
  }
  if (modes.empty()) fail(ErrorCategory::Configuration, "network needs at least one mode");
  if (n.node_count < 3) fail(ErrorCategory::Configuration, "scenarios need at least three agents");
  if (n.dwell > 0.0 || n.kind != "inline" || n.schedule.empty()) {
    const double dwell = n.dwell > 0.0 ? n.dwell : horizon;
    return SwitchingNetwork::periodic(std::move(modes), dwell, horizon);
  }
  try {
    return SwitchingNetwork(std::move(modes), n.schedule, horizon);
  } catch (const Error& e) {
    fail(ErrorCategory::Configuration, std::string("network schedule: ") + e.what());
  }
}

SystemState resolve_initial(const ScenarioConfig& cfg) {
  const int n = cfg.network.node_count;
  SystemState s;
  s.p_tilde.resize(n);
  s.v.resize(n);
  if (cfg.initial.random) {
    std::mt19937_64 rng(cfg.initial.seed);
    auto uni = [&](double lo, double hi) {
      return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int i = 0; i < n; ++i) s.p_tilde(i) = uni(cfg.initial.p_low, cfg.initial.p_high);
    for (int i = 0; i < n; ++i) s.v(i) = uni(cfg.initial.v_low, cfg.initial.v_high);
  } else {
    if (static_cast<int>(cfg.initial.p.size()) != n || static_cast<int>(cfg.initial.v.size()) != n)
      fail(ErrorCategory::Configuration, "initial p and v must have node_count entries");
    for (int i = 0; i < n; ++i) {
      s.p_tilde(i) = cfg.initial.p[i];
      s.v(i) = cfg.initial.v[i];
    }
  }
  return s;
}

std::set<int> malicious_set(const ScenarioConfig& cfg) {
  std::set<int> m(cfg.malicious.begin(), cfg.malicious.end());
  for (int a : m)
    if (a < 0 || a >= cfg.network.node_count)
      fail(ErrorCategory::Configuration, "malicious agent out of range");
  return m;
}

SimulationSetup build_setup(const ScenarioConfig& cfg) {
  SimulationSetup s;
  s.network = resolve_network(cfg);
  s.gains = cfg.gains;
  s.initial = resolve_initial(cfg);
  s.attacks = cfg.attacks;
  s.dos = cfg.dos;
  s.step = cfg.integrator.step;
  s.horizon = cfg.integrator.horizon;
  s.record_every = cfg.integrator.record_every;
  return s;
}

bool is_f_local(const Graph& g, const std::set<int>& malicious, int F) {
  for (int i = 0; i < g.node_count(); ++i) {
    if (malicious.count(i)) continue;
    int c = 0;
    for (int j : g.neighbors(i)) c += malicious.count(j) ? 1 : 0;
    if (c > F) return false;
  }
  return true;
}

Graph example1_overlay() {
  return Graph(8, {{0, 1}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {0, 7}, {1, 5}, {1, 6}, {1, 7},
                   {2, 4}, {2, 5}, {2, 6}, {3, 4}, {3, 6}, {3, 7}, {4, 6}, {5, 6}});
}

ScenarioConfig generate_example1(std::uint64_t seed) {
  ScenarioConfig c;
  c.name = "example1";
  const Graph overlay = example1_overlay();
  c.network.kind = "inline";
  c.network.node_count = overlay.node_count();
  c.network.modes.assign(2, {});
  for (std::size_t k = 0; k < overlay.edges().size(); ++k)
    c.network.modes[k % 2].push_back(overlay.edges()[k]);
  c.network.dwell = 0.5;
  c.gains = {1.0, 3.0};
  c.initial.random = true;
  c.initial.seed = derive_seed(seed, 0);
  c.attacks = {
      {4, 0.0, Waveform::Ramp, 0.3, 0.0, 0.0, 0.0},
      {5, 0.0, Waveform::Ramp, 0.5, 0.0, 0.0, 0.0},
  };
  c.malicious = {4, 5};
  DoSInterval d;
  d.start = 0.0;
  d.duration = 10.0;
  d.random = RandomDrop{100, 0.3, derive_seed(seed, 1)};
  c.dos.intervals = {d};
  c.detector.threshold = {ThresholdKind::Constant, 0.95, 0.0, 0.0, 0.0};
  c.detector.reinit = ReinitPolicy::VertexSet;
  c.detector.residual_record_every = 10;
  c.integrator = {1e-3, 30.0, 10};
  c.dpmsr = {1, 1e-3, false, false};
  c.pe_window = 1.0;
  c.output_dir = "out/example1";
  return c;
}

ScenarioConfig generate_example2(std::uint64_t seed) {
  constexpr int kNodes = 84;
  constexpr int kRobust = 2;
  constexpr int kMaxDegree = 9;
  constexpr int kMalicious = 9;
  constexpr int kAttempts = 500;
  std::mt19937_64 rng(derive_seed(seed, 2));
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const std::uint64_t gseed = rng();
    const CertifiedGraph cg = generate_r_robust_preferential(kNodes, kRobust, gseed, kMaxDegree);
    const Graph& g = cg.graph;
    std::vector<int> order(kNodes);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::set<int> mal;
    std::vector<int> hits(kNodes, 0);  // malicious neighbors per node
    for (int cand : order) {
      if (static_cast<int>(mal.size()) == kMalicious) break;
      bool ok = hits[cand] == 0;
      for (int j : g.neighbors(cand)) ok = ok && hits[j] == 0 && !mal.count(j);
      if (!ok) continue;
      mal.insert(cand);
      for (int j : g.neighbors(cand)) ++hits[j];
    }
    if (static_cast<int>(mal.size()) != kMalicious || !is_f_local(g, mal, 1)) continue;
    std::vector<int> keep = cooperative_agents(kNodes, mal);
    if (!induced_subgraph(g, keep).is_connected()) continue;

    ScenarioConfig c;
    c.name = "example2";
    c.network.kind = "inline";
    c.network.node_count = kNodes;
    c.network.modes.assign(2, {});
    for (const Edge& e : g.edges()) c.network.modes[rng() % 2].push_back(e);
    c.network.dwell = 0.5;
    c.gains = {1.0, 3.0};
    c.initial.random = true;
    c.initial.seed = derive_seed(seed, 3);
    for (int a : mal) {
      const double slope = 0.3 + 0.2 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
      c.attacks.push_back({a, 0.0, Waveform::Ramp, slope, 0.0, 0.0, 0.0});
      c.malicious.push_back(a);
    }
    DoSInterval d;
    d.start = 0.0;
    d.duration = 10.0;
    d.random = RandomDrop{600, 0.4, derive_seed(seed, 4)};
    c.dos.intervals = {d};
    c.detector.threshold = {ThresholdKind::Exponential, 0.0, 10.0, 1.0, 0.95};
    c.detector.reinit = ReinitPolicy::VertexSet;
    c.detector.residual_record_every = 100;
    c.integrator = {1e-3, 120.0, 100};
    c.dpmsr = {1, 1e-3, false, false};
    c.pe_window = 1.0;
    c.output_dir = "out/example2";
    return c;
  }
  fail(ErrorCategory::DesignFailure, "could not place a 1-local malicious set");
}

}  // namespace rmas
