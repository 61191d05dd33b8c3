#include <cmath>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "rmas/detect.hpp"
#include "rmas/linalg.hpp"
#include "rmas/spectral.hpp"
#include "test_util.hpp"

namespace rmas {
namespace {

using testing::throws_category;

const Gains kGains{1.0, 3.0};

Graph random_connected(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  while (true) {
    std::vector<Edge> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng)) e.emplace_back(i, j);
    Graph g(n, e);
    if (g.is_connected()) return g;
  }
}

Eigen::VectorXd random_state(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Eigen::VectorXd x(2 * n);
  for (int k = 0; k < 2 * n; ++k) x(k) = u(rng);
  return x;
}

TEST(Linalg, ScalarLyapunov) {
  const Eigen::MatrixXd P = solve_lyapunov(Eigen::MatrixXd::Constant(1, 1, -1.0), Eigen::MatrixXd::Identity(1, 1));
  EXPECT_NEAR(P(0, 0), 0.5, 1e-15);
}

TEST(Linalg, LyapunovResidualOnRandomStableMatrices) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = nd(rng);
    A -= (spectral_abscissa(A) + 0.5) * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd P = solve_lyapunov(A, Q);
    EXPECT_LT((A.transpose() * P + P * A + Q).norm(), 1e-9 * std::max(1.0, P.norm()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
    EXPECT_GT(es.eigenvalues()(0), 0.0);
  }
}

TEST(Linalg, RankAndNullspace) {
  Eigen::MatrixXd M(3, 4);
  M << 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 2, 0;
  EXPECT_EQ(numeric_rank(M), 2);
  const Eigen::MatrixXd K = nullspace(M);
  EXPECT_EQ(K.cols(), 2);
  EXPECT_LT((M * K).norm(), 1e-12);
  EXPECT_LT((K.transpose() * K - Eigen::MatrixXd::Identity(2, 2)).norm(), 1e-12);
}

TEST(TwoHopView, CompleteGraphHasNoRemainderNorCoupling) {
  std::mt19937_64 rng(2);
  const Graph g = Graph::complete(5);
  const TwoHopView v = two_hop_view(g, 2, kGains);
  EXPECT_EQ(v.size(), 5);
  EXPECT_TRUE(v.remainder.empty());
  EXPECT_EQ(v.nodes.front(), 2);
  EXPECT_LT(coupling_norm(v, g, random_state(5, rng)), 1e-12);
}

TEST(TwoHopView, PathCouplingEntersThroughBoundaryEdge) {
  const Graph g = Graph::path(5);
  const TwoHopView v = two_hop_view(g, 0, kGains);
  EXPECT_EQ(v.nodes, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(v.remainder, (std::vector<int>{3, 4}));
  EXPECT_EQ(v.one_hop_count, 2);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(10);
  x(3) = 2.5;  // only the remainder node next to the view moves
  EXPECT_NEAR(coupling_norm(v, g, x), kGains.alpha * 2.5, 1e-14);
  x(4) = -7.0;  // deeper remainder nodes do not couple
  EXPECT_NEAR(coupling_norm(v, g, x), kGains.alpha * 2.5, 1e-14);
}

TEST(TwoHopView, MatrixStructure) {
  const TwoHopView v = two_hop_view(Graph::star(4), 0, kGains);
  EXPECT_EQ(v.size(), 4);
  const Eigen::MatrixXd A = v.A();
  EXPECT_EQ(A.topLeftCorner(4, 4), Eigen::MatrixXd::Zero(4, 4));
  EXPECT_EQ(A.topRightCorner(4, 4), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(A.bottomLeftCorner(4, 4), -kGains.alpha * laplacian(Graph::star(4)));
  const Eigen::MatrixXd C = v.C();
  EXPECT_EQ(C.rows(), 5);
  EXPECT_EQ(C.topLeftCorner(4, 4), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(C(4, 4), 1.0);
  EXPECT_EQ(C.row(4).sum(), 1.0);
}

TEST(TwoHopView, OneHopScopeDropsSecondRing) {
  const TwoHopView v = two_hop_view(Graph::path(5), 1, kGains, ViewScope::OneHop);
  EXPECT_EQ(v.nodes, (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(v.remainder, (std::vector<int>{3, 4}));
}

TEST(PBH, ConnectedViewsAreObservable) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 8;
    const Graph g = random_connected(n, 0.35, rng);
    for (int i = 0; i < n; ++i) EXPECT_TRUE(pbh_observability(two_hop_view(g, i, kGains)));
  }
}

TEST(PBH, IsolatedOwnerIsObservable) {
  const TwoHopView v = two_hop_view(Graph(3, {{1, 2}}), 0, kGains);
  EXPECT_EQ(v.size(), 1);
  EXPECT_TRUE(pbh_observability(v));
}

TEST(PBH, OwnerPositionOnlyIsNotObservable) {
  // Symmetric leaves of a star cannot be told apart from the hub's position.
  const TwoHopView v = two_hop_view(Graph::star(4), 0, kGains);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(1, 2 * v.size());
  C(0, 0) = 1.0;
  EXPECT_FALSE(pbh_observable(v.A(), C));
}

TEST(DecayEnvelope, ScalarAndNormal) {
  const DecayEnvelope s = decay_envelope(Eigen::MatrixXd::Constant(1, 1, -1.0));
  EXPECT_NEAR(s.kappa, 1.0, 1e-14);
  EXPECT_NEAR(s.lambda, 1.0, 1e-14);
  Eigen::MatrixXd S(2, 2);
  S << -2, 1, 1, -3;
  const DecayEnvelope n = decay_envelope(S);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  EXPECT_NEAR(n.kappa, 1.0, 1e-14);
  EXPECT_NEAR(n.lambda, -es.eigenvalues()(1), 1e-12);
}

TEST(DecayEnvelope, LyapunovRouteForNonNormal) {
  Eigen::MatrixXd A(2, 2);
  A << -1, 10, 0, -2;
  const DecayEnvelope e = decay_envelope(A);
  const Eigen::MatrixXd P = solve_lyapunov(A, Eigen::MatrixXd::Identity(2, 2));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(P);
  EXPECT_NEAR(e.kappa, std::sqrt(es.eigenvalues()(1) / es.eigenvalues()(0)), 1e-10);
  EXPECT_NEAR(e.lambda, 1.0 / (2.0 * es.eigenvalues()(1)), 1e-12);
  EXPECT_LE(exp_envelope_ratio(A, e.kappa, e.lambda, 10.0, 1000), 1.0 + 1e-9);
  EXPECT_TRUE(throws_category([] { decay_envelope(Eigen::MatrixXd::Identity(2, 2)); }, ErrorCategory::DesignFailure));
}

TEST(DesignGain, CertifiedEnvelopeOnRandomViews) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + trial % 6;
    const Graph g = random_connected(n, 0.4, rng);
    for (int i = 0; i < n; ++i) {
      const TwoHopView v = two_hop_view(g, i, kGains);
      const ObserverDesign d = design_gain(v);
      EXPECT_GE(d.hurwitz_margin, kHurwitzMarginTarget);
      EXPECT_EQ(d.k1, d.h);
      const Eigen::MatrixXd Abar = closed_observer_matrix(v, d.k1, d.h);
      EXPECT_LT(spectral_abscissa(Abar), 0.0);
      EXPECT_LE(exp_envelope_ratio(Abar, d.kappa_e, d.lambda_e, 10.0, 1000), 1.0 + 1e-9);
      const Eigen::MatrixXd H = observer_gain(v, d.k1, d.h);
      EXPECT_EQ(H.topRows(v.size()), Eigen::MatrixXd::Zero(v.size(), v.size() + 1));
    }
  }
}

TEST(Threshold, ClosedFormLimits) {
  const double ke = 2.0, le = 0.5, kr = 3.0, w = 1.5, x0 = 4.0, lx = 0.1;
  EXPECT_DOUBLE_EQ(residual_threshold(3.0, 3.0, 0.0, ke, le, kr, w, x0, lx), ke * w);
  EXPECT_NEAR(residual_threshold(1e4, 3.0, 0.0, ke, le, kr, w, x0, lx), kr / le * x0 * std::exp(-lx * 3.0), 1e-12);
}

TEST(Threshold, PolicyKinds) {
  const LocalObserver obs;
  const AnalyticThresholdInputs in;
  ThresholdPolicy p;
  p.kind = ThresholdKind::Constant;
  p.value = 0.95;
  EXPECT_EQ(threshold_value(p, 12.0, obs, in), 0.95);
  p.kind = ThresholdKind::Exponential;
  p.scale = 10.0;
  p.rate = 1.0;
  p.offset = 0.95;
  EXPECT_DOUBLE_EQ(threshold_value(p, 0.0, obs, in), 10.95);
  EXPECT_NEAR(threshold_value(p, 2.0, obs, in), 10.0 * std::exp(-2.0) + 0.95, 1e-15);
  p.kind = ThresholdKind::Analytic;
  EXPECT_TRUE(throws_category([&] { threshold_value(p, 1.0, obs, in); }, ErrorCategory::DesignFailure));
  for (ThresholdKind k : {ThresholdKind::Analytic, ThresholdKind::Constant, ThresholdKind::Exponential})
    EXPECT_EQ(parse_threshold_kind(threshold_kind_name(k)), k);
  EXPECT_TRUE(throws_category([] { parse_threshold_kind("fixed"); }, ErrorCategory::Parse));
}

TEST(Hypothesis, StrictInequality) {
  EXPECT_FALSE(exceeds(0.0, 0.95));
  EXPECT_TRUE(exceeds(1.0, 0.95));
  EXPECT_TRUE(exceeds(-1.0, 0.95));
  EXPECT_FALSE(exceeds(0.95, 0.95));
}

TEST(CouplingBound, Limits) {
  EXPECT_DOUBLE_EQ(coupling_bound(0.0, 0.0, 2.0, 3.0, 0.1, 5.0, 4.0, 0.5), 2.0 * 3.0 * 4.0 + 2.0 * 5.0 * 0.5);
  EXPECT_LT(coupling_bound(1e4, 0.0, 2.0, 3.0, 0.1, 5.0, 4.0, 0.0), 1e-300);
}

TEST(ReinitPolicy, Names) {
  for (ReinitPolicy p : {ReinitPolicy::VertexSet, ReinitPolicy::Matrix, ReinitPolicy::Persistent})
    EXPECT_EQ(parse_reinit_policy(reinit_policy_name(p)), p);
  EXPECT_TRUE(throws_category([] { parse_reinit_policy("always"); }, ErrorCategory::Parse));
}

// Steps plant and observer together on a fixed graph; returns the largest
// residual magnitude over neighbor components, optionally the first time it
// exceeds eps.
struct LoopResult {
  double max_abs = 0.0;
  double first_cross = -1.0;
};

LoopResult run_loop(const Graph& g, int owner, const std::vector<DeceptionAttack>& attacks, Eigen::VectorXd x,
                    double horizon, double eps) {
  const double h = 1e-3;
  LocalObserver obs(owner, kGains, ViewScope::TwoHop, ReinitPolicy::VertexSet);
  obs.update_view(g, x, 0.0, nullptr, true);
  EXPECT_EQ(obs.residual().norm(), 0.0);
  LoopResult out;
  Eigen::VectorXd next;
  const long steps = std::lround(horizon / h);
  for (long k = 0; k < steps; ++k) {
    next = x;
    rk4_step(g, kGains, attacks, k * h, h, next);
    const Eigen::VectorXd r = obs.step(x, next, h);
    EXPECT_LT((r - (obs.measure(next) - obs.view().C() * obs.estimate())).norm(), 1e-15);
    for (int l = 1; l < obs.view().one_hop_count; ++l) {
      out.max_abs = std::max(out.max_abs, std::abs(r(l)));
      if (out.first_cross < 0.0 && exceeds(r(l), eps)) out.first_cross = (k + 1) * h;
    }
    x.swap(next);
  }
  return out;
}

TEST(Observer, ExactStartWithoutAttackStaysAtZero) {
  // Complete graph: the view is the whole network, so there is no coupling.
  const Graph g = Graph::complete(4);
  Eigen::VectorXd x(8);
  x << 1, -2, 0.5, 3, 0, 0, 0, 0;  // zero velocities make the reinit exact
  const LoopResult r = run_loop(g, 0, {}, x, 5.0, 0.95);
  // Only the midpoint interpolation of the measurements separates observer and plant.
  EXPECT_LT(r.max_abs, 1e-6);
}

TEST(Observer, ReinitCopiesPositionsAndZeroesHiddenVelocities) {
  std::mt19937_64 rng(6);
  const Graph g = Graph::path(5);
  const Eigen::VectorXd x = random_state(5, rng);
  LocalObserver obs(1, kGains, ViewScope::TwoHop, ReinitPolicy::VertexSet);
  EXPECT_TRUE(obs.update_view(g, x, 0.0, nullptr, true));
  const TwoHopView& v = obs.view();
  const Eigen::VectorXd& xh = obs.estimate();
  for (int k = 0; k < v.size(); ++k) EXPECT_EQ(xh(k), x(v.nodes[k]));
  EXPECT_EQ(xh(v.size()), x(5 + 1));
  for (int k = 1; k < v.size(); ++k) EXPECT_EQ(xh(v.size() + k), 0.0);
  EXPECT_EQ(obs.residual(), Eigen::VectorXd::Zero(v.size() + 1));
  EXPECT_EQ(obs.reinit_count(), 1);
}

TEST(Observer, RampInsideViewCrossesConstantThreshold) {
  const Graph g = Graph::complete(4);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  const LoopResult r = run_loop(g, 0, {{3, 0.0, Waveform::Ramp, 0.5}}, x, 40.0, 0.95);
  EXPECT_GT(r.first_cross, 0.0);
  EXPECT_LT(r.first_cross, 40.0);
}

TEST(Observer, ViewUpdatePolicies) {
  std::mt19937_64 rng(8);
  // Same vertex set for owner 0, different edges among its neighbors.
  const Graph a(4, {{0, 1}, {0, 2}, {0, 3}});
  const Graph b(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
  const Graph c(4, {{0, 1}, {1, 2}, {2, 3}});
  const Eigen::VectorXd x = random_state(4, rng);
  std::map<std::string, ObserverDesign> cache;

  LocalObserver vs(0, kGains, ViewScope::TwoHop, ReinitPolicy::VertexSet);
  EXPECT_TRUE(vs.update_view(a, x, 0.0, &cache, true));
  EXPECT_FALSE(vs.update_view(a, x, 0.1, &cache, true));
  EXPECT_FALSE(vs.update_view(b, x, 0.2, &cache, true));
  EXPECT_EQ(vs.view().L, two_hop_view(b, 0, kGains).L);
  EXPECT_TRUE(vs.update_view(c, x, 0.3, &cache, true));  // node 3 leaves the view
  EXPECT_EQ(vs.last_reinit(), 0.3);

  LocalObserver mx(0, kGains, ViewScope::TwoHop, ReinitPolicy::Matrix);
  EXPECT_TRUE(mx.update_view(a, x, 0.0, &cache, true));
  EXPECT_FALSE(mx.update_view(a, x, 0.1, &cache, true));
  EXPECT_TRUE(mx.update_view(b, x, 0.2, &cache, true));

  LocalObserver ps(0, kGains, ViewScope::TwoHop, ReinitPolicy::Persistent);
  EXPECT_TRUE(ps.update_view(a, x, 0.0, &cache, true));
  EXPECT_FALSE(ps.update_view(c, x, 0.3, &cache, true));
  EXPECT_EQ(ps.view().size(), 3);
  EXPECT_EQ(ps.reinit_count(), 1);
  EXPECT_FALSE(cache.empty());
}

TEST(Observer, CouplingStaysBelowBoundWithoutAttack) {
  // Ring with gamma = alpha N so the decay constants are valid.
  const int n = 6;
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  const Graph g(n, e);
  const Gains gains{1.0, static_cast<double>(n)};
  const PEReport pe = pe_margin(SwitchingNetwork::constant(g, 2.0), 1.0);
  const StabilityConstants sc = stability_constants(pe.mu, 1.0, gains, n);
  std::mt19937_64 rng(10);
  Eigen::VectorXd x = random_state(n, rng);
  x.tail(n).setZero();
  const double x0 = x.norm();
  const double h = 1e-3;
  for (long k = 0; k <= 10000; ++k) {
    if (k % 100 == 0) {
      const double bound = coupling_bound(k * h, 0.0, gains.alpha, sc.kappa_x, sc.lambda_x, sc.kappa_u, x0, 0.0);
      for (int i = 0; i < n; ++i) EXPECT_LE(coupling_norm(two_hop_view(g, i, gains), g, x), bound);
    }
    rk4_step(g, gains, {}, k * h, h, x);
  }
}

}  // namespace
}  // namespace rmas
