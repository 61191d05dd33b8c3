#include "rmas/plant.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "rmas/error.hpp"
#include "rmas/linalg.hpp"
#include "rmas/spectral.hpp"

namespace rmas {

namespace {

long to_step(double t, double h) { return std::llround(t / h); }

bool on_grid(double t, double h) { return std::abs(t / h - std::round(t / h)) <= 1e-6; }

// Uniform double in [0,1) from the top 53 bits, identical on every standard library.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void derivative(const Graph& g, const Gains& gains, const std::vector<DeceptionAttack>& attacks,
                double t_gate, double tau, const Eigen::VectorXd& x, Eigen::VectorXd& dx) {
  const int n = g.node_count();
  dx.resize(2 * n);
  dx.head(n) = x.tail(n);
  dx.tail(n) = -gains.gamma * x.tail(n);
  for (const Edge& e : g.edges()) {
    const double d = gains.alpha * (x(e.u) - x(e.v));
    dx(n + e.u) -= d;
    dx(n + e.v) += d;
  }
  for (const DeceptionAttack& a : attacks)
    if (t_gate >= a.activation_time) dx(n + a.agent) += a.signal(tau);
}

}  // namespace

void validate(const Gains& g) {
  if (!(g.alpha > 0.0) || !(g.gamma > 0.0))
    fail(ErrorCategory::InvalidParameter, "gains alpha and gamma must be positive");
}

std::string waveform_name(Waveform w) {
  switch (w) {
    case Waveform::Ramp: return "ramp";
    case Waveform::Constant: return "constant";
    case Waveform::Sinusoid: return "sinusoid";
  }
  return "ramp";
}

Waveform parse_waveform(const std::string& name) {
  if (name == "ramp") return Waveform::Ramp;
  if (name == "constant") return Waveform::Constant;
  if (name == "sinusoid") return Waveform::Sinusoid;
  fail(ErrorCategory::Parse, "unknown waveform '" + name + "'");
}

double DeceptionAttack::signal(double t) const {
  switch (waveform) {
    case Waveform::Ramp: return slope * t;
    case Waveform::Constant: return value;
    case Waveform::Sinusoid: return amplitude * std::sin(omega * t);
  }
  return 0.0;
}

std::vector<DoSPiece> realize_dos(const DoSSchedule& dos, const Graph& union_graph, double step) {
  std::vector<DoSPiece> out;
  for (const DoSInterval& iv : dos.intervals) {
    if (iv.start < 0.0 || !(iv.duration > 0.0))
      fail(ErrorCategory::Configuration, "DoS interval needs start >= 0 and positive duration");
    if (!iv.random) {
      for (const Edge& e : iv.edges)
        if (!union_graph.has_edge(e.u, e.v))
          fail(ErrorCategory::Configuration, "DoS edge is not part of the network");
      DoSPiece p{to_step(iv.start, step), to_step(iv.start + iv.duration, step),
                 std::set<Edge>(iv.edges.begin(), iv.edges.end())};
      if (p.k_end > p.k_begin) out.push_back(std::move(p));
      continue;
    }
    const RandomDrop& rd = *iv.random;
    if (rd.trials < 1 || rd.success_prob < 0.0 || rd.success_prob > 1.0)
      fail(ErrorCategory::Configuration, "random DoS needs trials >= 1 and probability in [0,1]");
    std::mt19937_64 rng(rd.seed);
    const double sub = iv.duration / rd.trials;
    for (int j = 0; j < rd.trials; ++j) {
      DoSPiece p;
      p.k_begin = to_step(iv.start + j * sub, step);
      p.k_end = to_step(iv.start + (j + 1) * sub, step);
      for (const Edge& e : union_graph.edges())
        if (unit_uniform(rng) < rd.success_prob) p.dropped.insert(e);
      if (p.k_end > p.k_begin) out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const DoSPiece& a, const DoSPiece& b) { return a.k_begin < b.k_begin; });
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k].k_begin < out[k - 1].k_end)
      fail(ErrorCategory::Configuration, "DoS intervals overlap");
  return out;
}

double max_dos_in_window(const std::vector<DoSPiece>& pieces, double step, double T) {
  const long w = to_step(T, step);
  long best = 0;
  for (const DoSPiece& start : pieces) {
    const long a = start.k_begin;
    const long b = a + w;
    long covered = 0;
    for (const DoSPiece& p : pieces) {
      if (p.dropped.empty()) continue;
      covered += std::max(0L, std::min(b, p.k_end) - std::max(a, p.k_begin));
    }
    best = std::max(best, covered);
  }
  return best * step;
}

Eigen::MatrixXd closed_loop_matrix(const Graph& g, const Gains& gains) {
  const int n = g.node_count();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  A.topRightCorner(n, n).setIdentity();
  A.bottomLeftCorner(n, n) = -gains.alpha * laplacian(g);
  A.bottomRightCorner(n, n) = -gains.gamma * Eigen::MatrixXd::Identity(n, n);
  return A;
}

Eigen::VectorXd control_input(const SystemState& s, const Graph& g, const Gains& gains,
                              const std::vector<DeceptionAttack>& attacks, double t) {
  const int n = g.node_count();
  if (s.p_tilde.size() != n || s.v.size() != n)
    fail(ErrorCategory::InvalidDimension, "state size does not match the graph");
  Eigen::VectorXd u = -gains.gamma * s.v;
  for (const Edge& e : g.edges()) {
    const double d = gains.alpha * (s.p_tilde(e.u) - s.p_tilde(e.v));
    u(e.u) -= d;
    u(e.v) += d;
  }
  for (const DeceptionAttack& a : attacks)
    if (t >= a.activation_time) u(a.agent) += a.signal(t);
  return u;
}

Eigen::VectorXd output_vector(const SystemState& s) {
  const int n = static_cast<int>(s.p_tilde.size());
  Eigen::VectorXd y(2 * n - 1);
  y.head(n - 1) = projection_matrix(n) * s.p_tilde;
  y.tail(n) = s.v;
  return y;
}

long steps_for(const SwitchingNetwork& net, double step, double horizon) {
  if (!(step > 0.0)) fail(ErrorCategory::Configuration, "integrator step must be positive");
  if (!(horizon > 0.0)) fail(ErrorCategory::Configuration, "horizon must be positive");
  if (!on_grid(horizon, step))
    fail(ErrorCategory::Configuration, "horizon is not a multiple of the integrator step");
  for (double b : net.breakpoints())
    if (!on_grid(b, step))
      fail(ErrorCategory::Configuration,
           "schedule breakpoint " + std::to_string(b) + " is not a multiple of the step");
  return to_step(horizon, step);
}

std::vector<TopologyPiece> topology_timeline(const SwitchingNetwork& net,
                                             const std::vector<DoSPiece>& dos, double step,
                                             long total_steps) {
  std::vector<long> cuts{0, total_steps};
  for (const auto& s : net.schedule()) cuts.push_back(to_step(s.start, step));
  for (const auto& p : dos) {
    cuts.push_back(p.k_begin);
    cuts.push_back(p.k_end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<TopologyPiece> out;
  std::size_t sched = 0;
  std::size_t d = 0;
  const auto& schedule = net.schedule();
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const long a = cuts[c];
    const long b = cuts[c + 1];
    if (a < 0 || a >= total_steps) continue;
    while (sched + 1 < schedule.size() && to_step(schedule[sched + 1].start, step) <= a) ++sched;
    while (d < dos.size() && dos[d].k_end <= a) ++d;
    TopologyPiece p{a, std::min(b, total_steps), schedule[sched].mode, -1};
    if (d < dos.size() && dos[d].k_begin <= a) p.dos = static_cast<int>(d);
    out.push_back(p);
  }
  return out;
}

void rk4_step(const Graph& g, const Gains& gains, const std::vector<DeceptionAttack>& attacks,
              double t, double h, Eigen::VectorXd& x) {
  // attacks switch on at step boundaries; the gate uses the step start with half-step slack
  const double gate = t + 0.5 * h;
  Eigen::VectorXd k1, k2, k3, k4;
  derivative(g, gains, attacks, gate, t, x, k1);
  derivative(g, gains, attacks, gate, t + 0.5 * h, x + 0.5 * h * k1, k2);
  derivative(g, gains, attacks, gate, t + 0.5 * h, x + 0.5 * h * k2, k3);
  derivative(g, gains, attacks, gate, t + h, x + h * k3, k4);
  x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

SimulationTrace simulate(const SimulationSetup& setup) {
  validate(setup.gains);
  const SwitchingNetwork& net = setup.network;
  const int n = net.node_count();
  if (setup.initial.p_tilde.size() != n || setup.initial.v.size() != n)
    fail(ErrorCategory::Configuration, "initial state size does not match the network");
  for (const auto& a : setup.attacks)
    if (a.agent < 0 || a.agent >= n) fail(ErrorCategory::Configuration, "attack agent out of range");
  if (setup.record_every < 1) fail(ErrorCategory::Configuration, "record_every must be >= 1");
  const double h = setup.step;
  const long total = steps_for(net, h, setup.horizon);
  const auto dos = realize_dos(setup.dos, net.union_graph(), h);
  const auto timeline = topology_timeline(net, dos, h, total);

  std::vector<DeceptionAttack> attacks = setup.attacks;
  for (auto& a : attacks) a.activation_time = to_step(a.activation_time, h) * h;

  SimulationTrace trace;
  trace.node_count = n;
  Eigen::VectorXd x(2 * n);
  x << setup.initial.p_tilde, setup.initial.v;

  std::map<std::pair<int, int>, Graph> graphs;
  auto graph_for = [&](const TopologyPiece& p) -> const Graph& {
    auto key = std::make_pair(p.mode, p.dos);
    auto it = graphs.find(key);
    if (it == graphs.end()) {
      Graph g = net.modes()[p.mode];
      if (p.dos >= 0) g = g.without_edges(dos[p.dos].dropped);
      it = graphs.emplace(key, std::move(g)).first;
    }
    return it->second;
  };
  auto record = [&](long k, const TopologyPiece& p) {
    trace.t.push_back(k * h);
    trace.x.push_back(x);
    trace.active_mode.push_back(p.mode);
    trace.dos_active.push_back(p.dos >= 0 ? 1 : 0);
  };

  for (const TopologyPiece& piece : timeline) {
    const Graph& g = graph_for(piece);
    for (long k = piece.k_begin; k < piece.k_end; ++k) {
      if (k % setup.record_every == 0) record(k, piece);
      rk4_step(g, setup.gains, attacks, k * h, h, x);
    }
  }
  record(total, timeline.back());
  return trace;
}

StabilityConstants stability_constants(double mu, double T, const Gains& gains, int n,
                                       double beta, double lambda_x_fraction) {
  validate(gains);
  if (!(mu > 0.0)) fail(ErrorCategory::DegenerateConnectivity, "PE margin must be positive");
  if (!(T > 0.0)) fail(ErrorCategory::InvalidParameter, "window length must be positive");
  if (n < 2) fail(ErrorCategory::InvalidDimension, "need at least two agents");
  if (!(beta > 0.0)) fail(ErrorCategory::InvalidParameter, "beta must be positive");
  if (!(lambda_x_fraction > 0.0 && lambda_x_fraction < 1.0))
    fail(ErrorCategory::InvalidParameter, "lambda_x fraction must lie in (0,1)");
  const double a = gains.alpha / gains.gamma;
  const double N = n;
  StabilityConstants c;
  c.beta = beta;
  c.eta = -std::log(1.0 - a * mu * T / (1.0 + a * a * N * N * T * T)) / (2.0 * T);
  c.lambda_chi = c.eta * std::exp(-2.0 * c.eta * T);
  c.lambda_x = lambda_x_fraction * c.lambda_chi;

  const Eigen::MatrixXd Q = projection_matrix(n);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(2 * n - 1, 2 * n - 1);
  C.topLeftCorner(n - 1, n - 1) = Eigen::MatrixXd::Identity(n - 1, n - 1) / gains.gamma;
  C.topRightCorner(n - 1, n) = -Q / gains.gamma;
  C.bottomRightCorner(n, n).setIdentity();
  const double nc = spectral_norm(C);
  const double nci = spectral_norm(C.inverse());
  const double top = std::max(1.0 / c.lambda_chi, beta);
  c.kappa_x = nc * std::sqrt(top / std::min(gains.gamma / (gains.alpha * N), beta)) * nci;
  c.kappa_u = nc * top / (c.lambda_x * std::min(gains.gamma / (2.0 * gains.alpha * N), beta / 2.0));

  const double m11 = 1.0 - c.lambda_x / c.lambda_chi;
  const double m12 = -a * (beta + 1.0 / c.lambda_chi) * N / 2.0;
  const double m22 = beta * (gains.gamma - a * N - c.lambda_x);
  c.pd_condition = m11 > 0.0 && m11 * m22 - m12 * m12 > 0.0;
  return c;
}

ConsensusMetrics consensus_metrics(const Eigen::VectorXd& x, const std::vector<int>& agents) {
  ConsensusMetrics m;
  if (agents.empty()) return m;
  const Eigen::Index n = x.size() / 2;
  double lo = x(agents.front());
  double hi = lo;
  for (int i : agents) {
    lo = std::min(lo, x(i));
    hi = std::max(hi, x(i));
    m.max_speed = std::max(m.max_speed, std::abs(x(n + i)));
  }
  m.max_gap = hi - lo;
  return m;
}

}  // namespace rmas
