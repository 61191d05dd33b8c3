#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "rmas/spectral.hpp"
#include "test_util.hpp"

namespace rmas {
namespace {

using testing::throws_category;

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph(n, e);
}

TEST(Projection, Identities) {
  for (int n = 2; n <= 12; ++n) {
    const Eigen::MatrixXd Q = projection_matrix(n);
    ASSERT_EQ(Q.rows(), n - 1);
    ASSERT_EQ(Q.cols(), n);
    EXPECT_LT((Q * Eigen::VectorXd::Ones(n)).norm(), 1e-12);
    EXPECT_LT((Q * Q.transpose() - Eigen::MatrixXd::Identity(n - 1, n - 1)).norm(), 1e-12);
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    EXPECT_LT((Q.transpose() * Q - P).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.transpose() * Q);
    EXPECT_NEAR(es.eigenvalues()(0), 0.0, 1e-12);
    for (int k = 1; k < n; ++k) EXPECT_NEAR(es.eigenvalues()(k), 1.0, 1e-12);
  }
}

TEST(Projection, TwoNodesIsNormalizedDifference) {
  const Eigen::MatrixXd Q = projection_matrix(2);
  EXPECT_NEAR(std::abs(Q(0, 0)), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(Q(0, 0), -Q(0, 1), 1e-15);
}

TEST(Projection, RejectsSmallN) {
  EXPECT_TRUE(throws_category([] { projection_matrix(1); }, ErrorCategory::InvalidDimension));
}

TEST(AlgebraicConnectivity, SmallGraphs) {
  EXPECT_NEAR(algebraic_connectivity(laplacian(Graph::complete(3))), 3.0, 1e-12);
  EXPECT_NEAR(algebraic_connectivity(laplacian(Graph::path(3))), 1.0, 1e-12);
  EXPECT_EQ(algebraic_connectivity(laplacian(Graph(4, {{0, 1}, {2, 3}}))), 0.0);
}

TEST(AlgebraicConnectivity, RejectsAsymmetric) {
  Eigen::MatrixXd M(2, 2);
  M << 1, -1, 0, 0;
  EXPECT_TRUE(throws_category([&] { algebraic_connectivity(M); }, ErrorCategory::InvalidInput));
}

TEST(IntegralLaplacian, SingleModeEqualsModeLaplacian) {
  const Graph g = Graph::path(5);
  const SwitchingNetwork net = SwitchingNetwork::constant(g, 4.0);
  EXPECT_LT((integral_laplacian(net, 0.7, 2.0) - laplacian(g)).norm(), 1e-14);
}

TEST(IntegralLaplacian, HalfAndHalfIsMean) {
  const Graph a(4, {{0, 1}, {2, 3}});
  const Graph b(4, {{1, 2}, {0, 3}});
  const SwitchingNetwork net = SwitchingNetwork::periodic({a, b}, 0.5, 4.0);
  const Eigen::MatrixXd expected = 0.5 * (laplacian(a) + laplacian(b));
  EXPECT_LT((integral_laplacian(net, 0.0, 1.0) - expected).norm(), 1e-14);
  EXPECT_LT((integral_laplacian(net, 0.25, 1.0) - expected).norm(), 1e-14);
  // Each mode alone is disconnected, the window average is not.
  EXPECT_EQ(algebraic_connectivity(laplacian(a)), 0.0);
  EXPECT_GT(algebraic_connectivity(expected), 0.0);
}

TEST(IntegralLaplacian, WindowBeyondHorizon) {
  const SwitchingNetwork net = SwitchingNetwork::constant(Graph::path(3), 1.0);
  EXPECT_TRUE(throws_category([&] { integral_laplacian(net, 0.5, 1.0); }, ErrorCategory::OutOfRange));
}

TEST(IntegralLaplacian, StructuralProperties) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + trial % 5;
    const SwitchingNetwork net =
        SwitchingNetwork::periodic({random_graph(n, 0.4, rng), random_graph(n, 0.4, rng)}, 0.3, 3.0);
    const Eigen::MatrixXd L = integral_laplacian(net, 0.1, 1.0);
    EXPECT_LT((L - L.transpose()).norm(), 1e-14);
    EXPECT_LT((L * Eigen::VectorXd::Ones(n)).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    EXPECT_GE(es.eigenvalues()(0), -1e-12);
  }
}

TEST(WindowStarts, IncludeBreakpointsAndShiftedBreakpoints) {
  const SwitchingNetwork net(
      {Graph::path(3), Graph::complete(3)}, {{0.0, 0}, {0.37, 1}, {1.91, 0}}, 3.0);
  const std::vector<double> s = pe_window_starts(net, 1.0);
  auto has = [&](double v) {
    for (double x : s)
      if (std::abs(x - v) < 1e-15) return true;
    return false;
  };
  EXPECT_TRUE(has(0.0));
  EXPECT_TRUE(has(2.0));
  EXPECT_TRUE(has(0.37));
  EXPECT_TRUE(has(1.91));
  EXPECT_TRUE(has(0.91));
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
}

TEST(PEMargin, StaticConnectedEqualsLambda2) {
  const Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 2}});
  const PEReport r = pe_margin(SwitchingNetwork::constant(g, 3.0), 1.0);
  const double l2 = algebraic_connectivity(laplacian(g));
  EXPECT_NEAR(r.mu, l2, 1e-10);
  EXPECT_NEAR(r.lambda2_integral, l2, 1e-10);
  EXPECT_EQ(r.effective_graph, g);
  EXPECT_NEAR(r.delta_floor, 1.0, 1e-12);
}

TEST(PEMargin, StaticDisconnectedIsZero) {
  const PEReport r = pe_margin(SwitchingNetwork::constant(Graph(4, {{0, 1}, {2, 3}}), 2.0), 1.0);
  EXPECT_EQ(r.mu, 0.0);
  EXPECT_EQ(r.lambda2_integral, 0.0);
}

TEST(PEMargin, ProjectionEquivalenceAndChain) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 8;
    const SwitchingNetwork net = SwitchingNetwork::periodic(
        {random_graph(n, 0.5, rng), random_graph(n, 0.5, rng), random_graph(n, 0.5, rng)}, 0.4, 4.0);
    const PEReport r = pe_margin(net, 1.2);
    EXPECT_LT(r.projection_discrepancy, 1e-9);
    EXPECT_GE(r.mu, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) {
          EXPECT_GE(r.effective_weights(i, j), -1e-15);
          EXPECT_LE(r.effective_weights(i, j), 1.0 + 1e-15);
        }
  }
}

TEST(EffectiveEdges, InclusiveThreshold) {
  // Edge (0,1) is active half of every unit window; (1,2) always.
  const Graph a(3, {{0, 1}, {1, 2}});
  const Graph b(3, {{1, 2}});
  const SwitchingNetwork net = SwitchingNetwork::periodic({a, b}, 0.5, 4.0);
  EXPECT_FALSE(effective_edge_set(net, 1.0, 0.6).has_edge(0, 1));
  EXPECT_TRUE(effective_edge_set(net, 1.0, 0.5).has_edge(0, 1));
  EXPECT_TRUE(effective_edge_set(net, 1.0, 0.6).has_edge(1, 2));
  EXPECT_EQ(effective_edge_set(SwitchingNetwork::constant(a, 2.0), 1.0, 1.0), a);
  EXPECT_TRUE(throws_category([&] { effective_edge_set(net, 1.0, 0.0); }, ErrorCategory::InvalidParameter));
}

TEST(EffectiveEdges, SmallDeltaGivesUnionWhenEveryWindowSeesEveryMode) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const SwitchingNetwork net =
        SwitchingNetwork::periodic({random_graph(6, 0.4, rng), random_graph(6, 0.4, rng)}, 0.5, 5.0);
    EXPECT_EQ(effective_edge_set(net, 1.0, 1e-6), net.union_graph());
  }
}

}  // namespace
}  // namespace rmas
