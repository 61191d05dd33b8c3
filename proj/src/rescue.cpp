#include "rmas/rescue.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rmas/error.hpp"

namespace rmas {

std::vector<int> cooperative_agents(int n, const std::set<int>& malicious) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!malicious.count(i)) out.push_back(i);
  return out;
}

RescueResult run_rescue(const SimulationSetup& setup, const std::set<int>& malicious,
                        const DetectorSettings& det) {
  validate(setup.gains);
  const SwitchingNetwork& net = setup.network;
  const int n = net.node_count();
  if (setup.initial.p_tilde.size() != n || setup.initial.v.size() != n)
    fail(ErrorCategory::Configuration, "initial state size does not match the network");
  for (int a : malicious)
    if (a < 0 || a >= n) fail(ErrorCategory::Configuration, "malicious agent out of range");
  for (const auto& a : setup.attacks)
    if (a.agent < 0 || a.agent >= n) fail(ErrorCategory::Configuration, "attack agent out of range");
  if (setup.record_every < 1) fail(ErrorCategory::Configuration, "record_every must be >= 1");
  if (det.dwell < 1) fail(ErrorCategory::Configuration, "dwell must be >= 1");

  const double h = setup.step;
  const long total = steps_for(net, h, setup.horizon);
  const auto dos = realize_dos(setup.dos, net.union_graph(), h);
  const auto timeline = topology_timeline(net, dos, h, total);
  std::vector<DeceptionAttack> attacks = setup.attacks;
  for (auto& a : attacks) a.activation_time = std::llround(a.activation_time / h) * h;

  RescueResult res;
  res.malicious = malicious;
  res.cooperative = cooperative_agents(n, malicious);
  res.trace.node_count = n;

  Eigen::VectorXd x(2 * n);
  x << setup.initial.p_tilde, setup.initial.v;

  const bool analytic = det.threshold.kind == ThresholdKind::Analytic;
  if (analytic) {
    const PEReport pe = pe_margin(net, det.pe_window);
    const StabilityConstants sc = stability_constants(pe.mu, det.pe_window, setup.gains, n,
                                                      det.beta, det.lambda_x_fraction);
    res.analytic.alpha = setup.gains.alpha;
    res.analytic.kappa_x = sc.kappa_x;
    res.analytic.lambda_x = sc.lambda_x;
    res.analytic.x0_norm = x.norm();
  }
  res.analytic.w_config =
      det.w_budget >= 0.0 ? det.w_budget : 2.0 * setup.initial.v.cwiseAbs().maxCoeff();

  std::vector<LocalObserver> observers;
  for (int i : res.cooperative) observers.emplace_back(i, setup.gains, det.scope, det.reinit);
  std::map<std::string, ObserverDesign> design_cache;
  std::vector<std::map<int, int>> streak(observers.size());

  std::map<std::pair<int, int>, Graph> graphs;
  auto graph_for = [&](const TopologyPiece& p) -> const Graph& {
    auto key = std::make_pair(p.mode, p.dos);
    auto it = graphs.find(key);
    if (it == graphs.end()) {
      Graph g = net.modes()[p.mode];
      if (p.dos >= 0) g = g.without_edges(dos[p.dos].dropped);
      g = g.without_edges(res.removed_edges);
      it = graphs.emplace(key, std::move(g)).first;
    }
    return it->second;
  };

  Eigen::VectorXd x_next;
  std::vector<int> forced;  // observers whose owner isolated a neighbor this step
  for (const TopologyPiece& piece : timeline) {
    bool topology_changed = true;
    for (long k = piece.k_begin; k < piece.k_end; ++k) {
      const double t = k * h;
      const Graph& g = graph_for(piece);
      if (topology_changed) {
        for (std::size_t o = 0; o < observers.size(); ++o) {
          const bool force = std::find(forced.begin(), forced.end(), static_cast<int>(o)) != forced.end();
          bool reinit = observers[o].update_view(g, x, t, &design_cache, analytic);
          if (force && !reinit) {
            observers[o].reinitialize(x, t);
            reinit = true;
          }
          if (reinit) {
            ++res.reinitializations;
            streak[o].clear();
          }
        }
        forced.clear();
        res.lambda2_series.emplace_back(t, algebraic_connectivity(laplacian(g)));
        topology_changed = false;
      }
      if (k % setup.record_every == 0) {
        res.trace.t.push_back(t);
        res.trace.x.push_back(x);
        res.trace.active_mode.push_back(piece.mode);
        res.trace.dos_active.push_back(piece.dos >= 0 ? 1 : 0);
      }

      x_next = x;
      rk4_step(g, setup.gains, attacks, t, h, x_next);
      const double t1 = t + h;
      const bool log_residuals =
          det.residual_record_every > 0 && (k + 1) % det.residual_record_every == 0;

      std::vector<Edge> isolate_now;
      for (std::size_t o = 0; o < observers.size(); ++o) {
        LocalObserver& obs = observers[o];
        const Eigen::VectorXd& r = obs.step(x, x_next, h);
        const TwoHopView& view = obs.view();
        const double eps = threshold_value(det.threshold, t1, obs, res.analytic);
        for (int lj = 1; lj < view.one_hop_count; ++lj) {
          const int j = view.nodes[lj];
          const double rj = r(lj);
          const bool over = exceeds(rj, eps);
          res.max_ratio = std::max(res.max_ratio, std::abs(rj) / eps);
          if (over) {
            ++res.exceedances;
            if (malicious.count(j)) ++res.malicious_exceedances;
          }
          int& s = streak[o][j];
          s = over ? s + 1 : 0;
          if (log_residuals) res.residuals.push_back({t1, obs.owner(), j, rj, eps, s >= det.dwell});
          if (det.isolate && s >= det.dwell) {
            const Edge e(obs.owner(), j);
            if (!res.removed_edges.count(e) &&
                std::find(isolate_now.begin(), isolate_now.end(), e) == isolate_now.end()) {
              isolate_now.push_back(e);
              res.events.push_back({t1, obs.owner(), j, rj, eps});
              forced.push_back(static_cast<int>(o));
            }
          }
        }
      }
      x.swap(x_next);
      if (!isolate_now.empty()) {
        res.removed_edges.insert(isolate_now.begin(), isolate_now.end());
        graphs.clear();
        topology_changed = true;
      }
    }
  }
  res.trace.t.push_back(total * h);
  res.trace.x.push_back(x);
  res.trace.active_mode.push_back(timeline.back().mode);
  res.trace.dos_active.push_back(timeline.back().dos >= 0 ? 1 : 0);
  return res;
}

PostIsolationReport post_isolation_connectivity(const SwitchingNetwork& net,
                                                const std::set<Edge>& removed, double T) {
  PostIsolationReport rep;
  const SwitchingNetwork pruned = net.without_edges(removed);
  const Graph before = net.union_graph();
  const Graph after = pruned.union_graph();
  for (int i = 0; i < net.node_count(); ++i)
    if (before.degree(i) > 0 && after.degree(i) == 0) rep.dropped.insert(i);
  const InducedNetwork induced = remove_nodes(pruned, rep.dropped);
  rep.kept = induced.original_index;
  rep.pe = pe_margin(induced.network, T);
  rep.disconnected = rep.pe.mu <= 0.0;
  return rep;
}

SimulationTrace dp_msr_run(const SimulationSetup& setup, const std::set<int>& malicious,
                           const DPMSRConfig& cfg) {
  validate(setup.gains);
  if (!(cfg.sample_time > 0.0)) fail(ErrorCategory::Configuration, "sample time must be positive");
  if (cfg.F < 0) fail(ErrorCategory::Configuration, "F must be non-negative");
  const SwitchingNetwork& net = setup.network;
  const int n = net.node_count();
  if (setup.initial.p_tilde.size() != n || setup.initial.v.size() != n)
    fail(ErrorCategory::Configuration, "initial state size does not match the network");
  const double Ts = cfg.sample_time;
  const long total = steps_for(net, Ts, setup.horizon);
  const std::vector<DoSPiece> dos =
      cfg.apply_dos ? realize_dos(setup.dos, net.union_graph(), Ts) : std::vector<DoSPiece>{};
  std::vector<TopologyPiece> timeline;
  if (cfg.follow_schedule || cfg.apply_dos) {
    timeline = topology_timeline(net, dos, Ts, total);
  } else {
    timeline.push_back({0, total, -1, -1});
  }
  const Graph overlay = net.union_graph();
  std::vector<DeceptionAttack> attacks = setup.attacks;
  for (auto& a : attacks) a.activation_time = std::llround(a.activation_time / Ts) * Ts;

  SimulationTrace trace;
  trace.node_count = n;
  Eigen::VectorXd p = setup.initial.p_tilde;
  Eigen::VectorXd v = setup.initial.v;
  Eigen::VectorXd u(n);
  std::vector<double> below, above;

  for (const TopologyPiece& piece : timeline) {
    Graph g = piece.mode >= 0 && cfg.follow_schedule ? net.modes()[piece.mode] : overlay;
    if (piece.dos >= 0) g = g.without_edges(dos[piece.dos].dropped);
    for (long k = piece.k_begin; k < piece.k_end; ++k) {
      const double t = k * Ts;
      if (k % setup.record_every == 0) {
        Eigen::VectorXd x(2 * n);
        x << p, v;
        trace.t.push_back(t);
        trace.x.push_back(std::move(x));
        trace.active_mode.push_back(std::max(piece.mode, 0));
        trace.dos_active.push_back(piece.dos >= 0 ? 1 : 0);
      }
      for (int i = 0; i < n; ++i) {
        double coupling = 0.0;
        if (malicious.count(i)) {
          for (int j : g.neighbors(i)) coupling += p(i) - p(j);
        } else {
          below.clear();
          above.clear();
          for (int j : g.neighbors(i)) {
            if (p(j) < p(i)) below.push_back(p(j));
            else if (p(j) > p(i)) above.push_back(p(j));
          }
          // drop the F most extreme values on each side; equal values carry no coupling
          std::sort(below.begin(), below.end());
          std::sort(above.begin(), above.end(), std::greater<double>());
          for (std::size_t m = std::min<std::size_t>(cfg.F, below.size()); m < below.size(); ++m)
            coupling += p(i) - below[m];
          for (std::size_t m = std::min<std::size_t>(cfg.F, above.size()); m < above.size(); ++m)
            coupling += p(i) - above[m];
        }
        u(i) = -setup.gains.alpha * coupling - setup.gains.gamma * v(i);
      }
      for (const DeceptionAttack& a : attacks)
        if (t >= a.activation_time - 0.5 * Ts) u(a.agent) += a.signal(t);
      p += Ts * v + 0.5 * Ts * Ts * u;
      v += Ts * u;
    }
  }
  Eigen::VectorXd x(2 * n);
  x << p, v;
  trace.t.push_back(total * Ts);
  trace.x.push_back(std::move(x));
  trace.active_mode.push_back(std::max(timeline.back().mode, 0));
  trace.dos_active.push_back(timeline.back().dos >= 0 ? 1 : 0);
  return trace;
}

}  // namespace rmas
