#include "rmas/detect.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

#include "rmas/error.hpp"
#include "rmas/linalg.hpp"

namespace rmas {

Eigen::MatrixXd TwoHopView::A() const {
  const int n = size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  A.topRightCorner(n, n).setIdentity();
  A.bottomLeftCorner(n, n) = -gains.alpha * L;
  A.bottomRightCorner(n, n) = -gains.gamma * Eigen::MatrixXd::Identity(n, n);
  return A;
}

Eigen::MatrixXd TwoHopView::C() const {
  const int n = size();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n + 1, 2 * n);
  C.topLeftCorner(n, n).setIdentity();
  C(n, n) = 1.0;
  return C;
}

int TwoHopView::local_index(int global) const {
  auto it = std::find(nodes.begin(), nodes.end(), global);
  return it == nodes.end() ? -1 : static_cast<int>(it - nodes.begin());
}

bool TwoHopView::same_vertex_set(const TwoHopView& o) const {
  if (nodes.size() != o.nodes.size()) return false;
  std::vector<int> a = nodes, b = o.nodes;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

TwoHopView two_hop_view(const Graph& g, int i, const Gains& gains, ViewScope scope) {
  const int n = g.node_count();
  if (i < 0 || i >= n) fail(ErrorCategory::OutOfRange, "view owner out of range");
  TwoHopView v;
  v.owner = i;
  v.scope = scope;
  v.gains = gains;
  v.nodes.push_back(i);
  for (int j : g.neighbors(i)) v.nodes.push_back(j);
  v.one_hop_count = static_cast<int>(v.nodes.size());
  std::vector<int> pos(n, -1);
  for (int k = 0; k < v.one_hop_count; ++k) pos[v.nodes[k]] = k;
  if (scope == ViewScope::TwoHop) {
    std::set<int> second;
    for (int k = 1; k < v.one_hop_count; ++k)
      for (int b : g.neighbors(v.nodes[k]))
        if (pos[b] < 0) second.insert(b);
    for (int b : second) {
      pos[b] = static_cast<int>(v.nodes.size());
      v.nodes.push_back(b);
    }
  }
  for (int x = 0; x < n; ++x)
    if (pos[x] < 0) v.remainder.push_back(x);
  // edges with an endpoint among the owner and its 1-hop neighbors; 2-hop/2-hop
  // edges stay in the unknown coupling
  for (const Edge& e : g.edges()) {
    const int a = pos[e.u];
    const int b = pos[e.v];
    if (a < 0 || b < 0) continue;
    if (a >= v.one_hop_count && b >= v.one_hop_count) continue;
    v.edges.emplace_back(a, b);
  }
  std::sort(v.edges.begin(), v.edges.end());
  v.L = laplacian(Graph(v.size(), v.edges));
  return v;
}

bool pbh_observable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
  const Eigen::Index n = A.rows();
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  Eigen::MatrixXcd M(n + C.rows(), n);
  M.bottomRows(C.rows()) = C.cast<std::complex<double>>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const std::complex<double> lam = es.eigenvalues()(k);
    M.topRows(n) = -A.cast<std::complex<double>>();
    M.topRows(n).diagonal().array() += lam;
    if (numeric_rank(M) < n) return false;
  }
  return true;
}

bool pbh_observability(const TwoHopView& view) { return pbh_observable(view.A(), view.C()); }

Eigen::MatrixXd observer_gain(const TwoHopView& view, double k1, double h) {
  const int n = view.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(2 * n, n + 1);
  H.block(n, 0, n, n) = k1 * Eigen::MatrixXd::Identity(n, n);
  H(n, n) = h;
  return H;
}

Eigen::MatrixXd closed_observer_matrix(const TwoHopView& view, double k1, double h) {
  return view.A() - observer_gain(view, k1, h) * view.C();
}

DecayEnvelope decay_envelope(const Eigen::MatrixXd& Abar) {
  const double abscissa = spectral_abscissa(Abar);
  if (!(abscissa < 0.0)) fail(ErrorCategory::DesignFailure, "matrix is not Hurwitz");
  if (is_normal(Abar)) return {1.0, -abscissa};
  const Eigen::Index n = Abar.rows();
  const Eigen::MatrixXd P = solve_lyapunov(Abar, Eigen::MatrixXd::Identity(n, n));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(n - 1);
  if (!(lo > 0.0)) fail(ErrorCategory::DesignFailure, "Lyapunov solution is not positive definite");
  return {std::sqrt(hi / lo), 1.0 / (2.0 * hi)};
}

ObserverDesign design_gain(const TwoHopView& view, bool with_envelope) {
  static constexpr double kLadder[] = {1, 2, 5, 10, 20, 50, 100};
  for (double k1 : kLadder) {
    const Eigen::MatrixXd Abar = closed_observer_matrix(view, k1, k1);
    const double margin = -spectral_abscissa(Abar);
    if (margin < kHurwitzMarginTarget) continue;
    ObserverDesign d;
    d.k1 = k1;
    d.h = k1;
    d.hurwitz_margin = margin;
    if (with_envelope) {
      const DecayEnvelope env = decay_envelope(Abar);
      d.kappa_e = env.kappa;
      d.lambda_e = env.lambda;
      d.lyapunov = true;
    }
    return d;
  }
  fail(ErrorCategory::DesignFailure,
       "no gain on the ladder reaches the Hurwitz margin for agent " + std::to_string(view.owner));
}

std::string threshold_kind_name(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::Analytic: return "analytic";
    case ThresholdKind::Constant: return "constant";
    case ThresholdKind::Exponential: return "exponential";
  }
  return "analytic";
}

ThresholdKind parse_threshold_kind(const std::string& s) {
  if (s == "analytic") return ThresholdKind::Analytic;
  if (s == "constant") return ThresholdKind::Constant;
  if (s == "exponential") return ThresholdKind::Exponential;
  fail(ErrorCategory::Parse, "unknown threshold kind '" + s + "'");
}

double residual_threshold(double t, double t_k, double t0, double kappa_e, double lambda_e,
                          double kappa_r, double w, double x0_norm, double lambda_x) {
  const double decay = std::exp(-lambda_e * (t - t_k));
  return kappa_e * w * decay +
         (kappa_r / lambda_e) * x0_norm * std::exp(-lambda_x * (t_k - t0)) * (1.0 - decay);
}

double reinit_budget(const AnalyticThresholdInputs& in, double t_k, double t0) {
  return std::max(in.w_config, in.kappa_x * in.x0_norm * std::exp(-in.lambda_x * (t_k - t0)));
}

double coupling_bound(double t, double t0, double alpha, double kappa_x, double lambda_x,
                      double kappa_u, double x0_norm, double u_sup) {
  return alpha * kappa_x * std::exp(-lambda_x * (t - t0)) * x0_norm + alpha * kappa_u * u_sup;
}

double coupling_norm(const TwoHopView& view, const Graph& g, const Eigen::VectorXd& x) {
  const int n = g.node_count();
  const int m = view.size();
  Eigen::VectorXd p(m);
  for (int k = 0; k < m; ++k) p(k) = x(view.nodes[k]);
  const Eigen::VectorXd model = -view.gains.alpha * (view.L * p);
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    const int gi = view.nodes[k];
    double truth = 0.0;
    for (int j : g.neighbors(gi)) truth -= view.gains.alpha * (x(gi) - x(j));
    const double d = truth - model(k);
    acc += d * d;
  }
  (void)n;
  return std::sqrt(acc);
}

std::string reinit_policy_name(ReinitPolicy p) {
  switch (p) {
    case ReinitPolicy::VertexSet: return "vertex-set";
    case ReinitPolicy::Matrix: return "matrix";
    case ReinitPolicy::Persistent: return "persistent";
  }
  return "vertex-set";
}

ReinitPolicy parse_reinit_policy(const std::string& s) {
  if (s == "vertex-set") return ReinitPolicy::VertexSet;
  if (s == "matrix") return ReinitPolicy::Matrix;
  if (s == "persistent") return ReinitPolicy::Persistent;
  fail(ErrorCategory::Parse, "unknown reinit policy '" + s + "'");
}

std::string view_key(const TwoHopView& view) {
  std::ostringstream os;
  os.precision(17);
  os << view.size() << '|' << view.gains.alpha << '|' << view.gains.gamma << '|';
  for (const Edge& e : view.edges) os << e.u << ',' << e.v << ';';
  return os.str();
}

LocalObserver::LocalObserver(int owner, const Gains& gains, ViewScope scope, ReinitPolicy policy)
    : owner_(owner), gains_(gains), scope_(scope), policy_(policy) {}

bool LocalObserver::update_view(const Graph& g, const Eigen::VectorXd& x, double t,
                                std::map<std::string, ObserverDesign>* cache, bool with_envelope) {
  TwoHopView next = two_hop_view(g, owner_, gains_, scope_);
  if (initialized_ && next.same_model(view_)) return false;

  ObserverDesign design;
  const std::string key = view_key(next);
  auto hit = cache ? cache->find(key) : decltype(cache->end()){};
  if (cache && hit != cache->end() && (hit->second.lyapunov || !with_envelope)) {
    design = hit->second;
  } else {
    design = design_gain(next, with_envelope);
    if (cache) (*cache)[key] = design;
  }

  const bool reinit = !initialized_ || policy_ == ReinitPolicy::Matrix ||
                      (policy_ == ReinitPolicy::VertexSet && !next.same_vertex_set(view_));
  if (!reinit && next.nodes != view_.nodes) {
    // carry estimates over by global id; nodes entering the view start from
    // their measured position with zero velocity
    const int m = next.size();
    Eigen::VectorXd moved(2 * m);
    for (int k = 0; k < m; ++k) {
      const int old = view_.local_index(next.nodes[k]);
      moved(k) = old >= 0 ? xhat_(old) : x(next.nodes[k]);
      moved(m + k) = old >= 0 ? xhat_(view_.size() + old) : 0.0;
    }
    xhat_ = moved;
  }
  view_ = std::move(next);
  design_ = design;
  if (reinit) {
    reinitialize(x, t);
  } else {
    r_ = measure(x) - view_.C() * xhat_;
  }
  initialized_ = true;
  return reinit;
}

Eigen::VectorXd LocalObserver::measure(const Eigen::VectorXd& x) const {
  const int m = view_.size();
  const Eigen::Index n = x.size() / 2;
  Eigen::VectorXd y(m + 1);
  for (int k = 0; k < m; ++k) y(k) = x(view_.nodes[k]);
  y(m) = x(n + owner_);
  return y;
}

void LocalObserver::reinitialize(const Eigen::VectorXd& x, double t) {
  const int m = view_.size();
  const Eigen::Index n = x.size() / 2;
  xhat_ = Eigen::VectorXd::Zero(2 * m);
  for (int k = 0; k < m; ++k) xhat_(k) = x(view_.nodes[k]);
  xhat_(m) = x(n + owner_);
  r_ = Eigen::VectorXd::Zero(m + 1);
  last_reinit_ = t;
  ++reinit_count_;
}

void LocalObserver::derivative(const Eigen::VectorXd& xh, const Eigen::VectorXd& y,
                               Eigen::VectorXd& d) const {
  const int m = view_.size();
  const double alpha = gains_.alpha;
  d.resize(2 * m);
  d.head(m) = xh.tail(m);
  d.tail(m) = -gains_.gamma * xh.tail(m) + design_.k1 * (y.head(m) - xh.head(m));
  for (const Edge& e : view_.edges) {
    const double f = alpha * (xh(e.u) - xh(e.v));
    d(m + e.u) -= f;
    d(m + e.v) += f;
  }
  d(m) += design_.h * (y(m) - xh(m));
}

const Eigen::VectorXd& LocalObserver::step(const Eigen::VectorXd& x_begin,
                                           const Eigen::VectorXd& x_end, double h) {
  const Eigen::VectorXd y0 = measure(x_begin);
  const Eigen::VectorXd y1 = measure(x_end);
  const Eigen::VectorXd ym = 0.5 * (y0 + y1);
  Eigen::VectorXd k1, k2, k3, k4;
  derivative(xhat_, y0, k1);
  derivative(xhat_ + 0.5 * h * k1, ym, k2);
  derivative(xhat_ + 0.5 * h * k2, ym, k3);
  derivative(xhat_ + h * k3, y1, k4);
  xhat_ += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  const int m = view_.size();
  r_.resize(m + 1);
  r_.head(m) = y1.head(m) - xhat_.head(m);
  r_(m) = y1(m) - xhat_(m);
  return r_;
}

double threshold_value(const ThresholdPolicy& policy, double t, const LocalObserver& obs,
                       const AnalyticThresholdInputs& in, double t0) {
  switch (policy.kind) {
    case ThresholdKind::Constant: return policy.value;
    case ThresholdKind::Exponential: return policy.scale * std::exp(-policy.rate * t) + policy.offset;
    case ThresholdKind::Analytic: break;
  }
  const ObserverDesign& d = obs.design();
  if (!d.lyapunov) fail(ErrorCategory::DesignFailure, "analytic threshold needs decay constants");
  const double tk = obs.last_reinit();
  const double kappa_r = in.alpha * in.kappa_x * d.kappa_e;
  return residual_threshold(t, tk, t0, d.kappa_e, d.lambda_e, kappa_r, reinit_budget(in, tk, t0),
                            in.x0_norm, in.lambda_x);
}

}  // namespace rmas
