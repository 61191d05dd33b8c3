#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rmas/graph.hpp"
#include "rmas/plant.hpp"

namespace rmas {

enum class ViewScope { TwoHop, OneHop };

/// Local subsystem an agent reconstructs from its own state and the positions of
/// its 1- and 2-hop neighbors. Local index 0 is the owner.
struct TwoHopView {
  int owner = 0;
  ViewScope scope = ViewScope::TwoHop;
  std::vector<int> nodes;      // owner, 1-hop ascending, remaining 2-hop ascending
  std::vector<int> remainder;  // global nodes outside the view
  int one_hop_count = 0;       // owner plus 1-hop neighbors
  std::vector<Edge> edges;     // local-index edges of the modeled Laplacian
  Eigen::MatrixXd L;           // modeled Laplacian (2-hop proximity Laplacian)
  Gains gains;

  int size() const { return static_cast<int>(nodes.size()); }
  /// [[0, I], [-alpha L, -gamma I]]
  Eigen::MatrixXd A() const;
  /// diag(I, e1^T): all positions plus the owner's velocity.
  Eigen::MatrixXd C() const;
  /// Local index of a global node, -1 if absent.
  int local_index(int global) const;

  /// Order-insensitive comparison of the vertex sets.
  bool same_vertex_set(const TwoHopView& o) const;
  bool same_model(const TwoHopView& o) const { return nodes == o.nodes && edges == o.edges; }
};

TwoHopView two_hop_view(const Graph& g, int i, const Gains& gains,
                        ViewScope scope = ViewScope::TwoHop);

/// PBH test: rank [lambda I - A; C] = n at every eigenvalue of A.
bool pbh_observable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C);
bool pbh_observability(const TwoHopView& view);

/// Observer gain H = [[0, 0], [k1 I, h e1]] and the certified decay envelope of
/// Abar = A - H C.
struct ObserverDesign {
  double k1 = 0.0;
  double h = 0.0;
  double hurwitz_margin = 0.0;  // -max Re(eig(Abar))
  double kappa_e = 0.0;
  double lambda_e = 0.0;
  bool lyapunov = false;  // decay constants available
};

Eigen::MatrixXd observer_gain(const TwoHopView& view, double k1, double h);
Eigen::MatrixXd closed_observer_matrix(const TwoHopView& view, double k1, double h);

/// Decay constants of a Hurwitz matrix: normal matrices get kappa = 1 and
/// lambda = -max Re(eig); otherwise the Lyapunov route with Q = I.
struct DecayEnvelope {
  double kappa = 0.0;
  double lambda = 0.0;
};
DecayEnvelope decay_envelope(const Eigen::MatrixXd& Abar);

inline constexpr double kHurwitzMarginTarget = 0.1;

/// Escalates k1 over {1, 2, 5, 10, 20, 50, 100} (h = k1) until the Hurwitz margin
/// reaches 0.1. With `with_envelope` the decay constants are also computed.
/// Throws DesignFailure if the ladder is exhausted.
ObserverDesign design_gain(const TwoHopView& view, bool with_envelope = true);

enum class ThresholdKind { Analytic, Constant, Exponential };

std::string threshold_kind_name(ThresholdKind k);
ThresholdKind parse_threshold_kind(const std::string& s);

/// Constant: value. Exponential: scale * e^{-rate t} + offset. Analytic: residual
/// bound built from the observer envelope and the plant stability constants.
struct ThresholdPolicy {
  ThresholdKind kind = ThresholdKind::Analytic;
  double value = 0.95;
  double scale = 0.0;
  double rate = 0.0;
  double offset = 0.0;

  bool operator==(const ThresholdPolicy&) const = default;
};

/// Global quantities the analytic threshold depends on.
struct AnalyticThresholdInputs {
  double alpha = 1.0;
  double kappa_x = 0.0;
  double lambda_x = 0.0;
  double x0_norm = 0.0;
  double w_config = 0.0;  // configured reinit error budget
};

double residual_threshold(double t, double t_k, double t0, double kappa_e, double lambda_e,
                          double kappa_r, double w, double x0_norm, double lambda_x);

/// Effective reinit budget: the configured value or the consensus velocity envelope
/// at t_k, whichever is larger.
double reinit_budget(const AnalyticThresholdInputs& in, double t_k, double t0);

double coupling_bound(double t, double t0, double alpha, double kappa_x, double lambda_x,
                      double kappa_u, double x0_norm, double u_sup);

/// ||rho|| for a view: true velocity derivative of the view nodes (attack-free)
/// minus the view model's prediction, evaluated on the global state.
double coupling_norm(const TwoHopView& view, const Graph& g, const Eigen::VectorXd& x);

enum class ReinitPolicy { VertexSet, Matrix, Persistent };

std::string reinit_policy_name(ReinitPolicy p);
ReinitPolicy parse_reinit_policy(const std::string& s);

/// Reconfigurable local observer of one agent.
class LocalObserver {
 public:
  LocalObserver() = default;
  LocalObserver(int owner, const Gains& gains, ViewScope scope, ReinitPolicy policy);

  /// Adopts a new view when the local topology changed. Returns true when the
  /// estimate was reinitialized from the global state x at time t.
  bool update_view(const Graph& g, const Eigen::VectorXd& x, double t,
                   std::map<std::string, ObserverDesign>* cache, bool with_envelope);

  /// RK4 step with the measurement linearly interpolated between the plant states
  /// at the step ends; returns the residual y(t+h) - C xhat(t+h).
  const Eigen::VectorXd& step(const Eigen::VectorXd& x_begin, const Eigen::VectorXd& x_end,
                              double h);

  /// Resets the estimate from the measurement of the global state.
  void reinitialize(const Eigen::VectorXd& x, double t);

  int owner() const { return owner_; }
  const TwoHopView& view() const { return view_; }
  const ObserverDesign& design() const { return design_; }
  const Eigen::VectorXd& estimate() const { return xhat_; }
  const Eigen::VectorXd& residual() const { return r_; }
  double last_reinit() const { return last_reinit_; }
  int reinit_count() const { return reinit_count_; }

  Eigen::VectorXd measure(const Eigen::VectorXd& x) const;

 private:
  void derivative(const Eigen::VectorXd& xh, const Eigen::VectorXd& y, Eigen::VectorXd& d) const;

  int owner_ = 0;
  Gains gains_;
  ViewScope scope_ = ViewScope::TwoHop;
  ReinitPolicy policy_ = ReinitPolicy::VertexSet;
  bool initialized_ = false;
  TwoHopView view_;
  ObserverDesign design_;
  Eigen::VectorXd xhat_;
  Eigen::VectorXd r_;
  double last_reinit_ = 0.0;
  int reinit_count_ = 0;
};

/// Structural key of a view's model, used to cache gain designs.
std::string view_key(const TwoHopView& view);

/// Threshold for one residual component of `obs` at time t. The analytic policy
/// needs the observer's decay envelope (DesignFailure otherwise).
double threshold_value(const ThresholdPolicy& policy, double t, const LocalObserver& obs,
                       const AnalyticThresholdInputs& in, double t0 = 0.0);

/// attacked iff |r| > eps (strict).
inline bool exceeds(double r, double eps) { return std::abs(r) > eps; }

}  // namespace rmas
