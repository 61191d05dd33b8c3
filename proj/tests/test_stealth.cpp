#include <complex>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rmas/robustness.hpp"
#include "rmas/stealth.hpp"
#include "test_util.hpp"

namespace rmas {
namespace {

using testing::throws_category;

const Gains kGains{1.0, 3.0};

// Cooperative 4-clique {0..3} with a malicious tail 3 - 4 - 5 - 6. Node 6 sits
// three hops from every cooperative agent, so its position is never measured.
Graph tail_mode() {
  return Graph(7, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {5, 6}});
}
// Companion mode in which node 6 talks to a cooperative agent directly.
Graph shortcut_mode() { return Graph(7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {2, 6}}); }
const std::set<int> kTail{4, 5, 6};

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

TEST(MeasurementKernel, NoMaliciousAgents) {
  const KernelReport r = measurement_kernel({Graph::path(4)}, {});
  EXPECT_EQ(r.dimension, 0);
  EXPECT_TRUE(r.matches());
}

TEST(MeasurementKernel, SingleMaliciousVelocityAxis) {
  const KernelReport r = measurement_kernel({Graph::path(4)}, {2});
  ASSERT_EQ(r.dimension, 1);
  EXPECT_TRUE(r.matches());
  EXPECT_NEAR(std::abs(r.basis(4 + 2, 0)), 1.0, 1e-12);
}

TEST(MeasurementKernel, TwoMaliciousAgents) {
  const Graph g(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
  const KernelReport r = measurement_kernel({g, Graph::complete(6)}, {1, 4});
  EXPECT_EQ(r.dimension, 2);
  EXPECT_TRUE(r.matches());
}

TEST(MeasurementKernel, UnmeasuredPositionWidensKernel) {
  const KernelReport single = measurement_kernel({tail_mode()}, kTail);
  EXPECT_EQ(single.dimension, 4);  // three velocities plus the hidden position of node 6
  EXPECT_FALSE(single.matches());
  EXPECT_TRUE(measurement_kernel({tail_mode(), shortcut_mode()}, kTail).matches());
}

TEST(MeasurementRows, CooperativeViewsOnly) {
  const Eigen::MatrixXd C = cooperative_measurement_matrix(Graph::path(3), {1});
  // Agents 0 and 2 each see positions {self, 1, other end} plus their velocity.
  EXPECT_EQ(C.rows(), 8);
  EXPECT_EQ(C.col(3 + 1).sum(), 0.0);
}

TEST(Pencil, RejectsEmptySuspectedSet) {
  EXPECT_TRUE(throws_category([] { stealth_pencil_kernel({Graph::path(3)}, {}, kGains, {0.5, 0.0}); },
                              ErrorCategory::InvalidInput));
  EXPECT_TRUE(throws_category([] { zero_dynamics_search(Graph::path(3), {}, kGains); },
                              ErrorCategory::InvalidInput));
}

TEST(Pencil, SamplePoints) {
  const std::vector<Graph> modes{Graph::path(4), Graph::star(4)};
  const auto pts = pencil_sample_points(modes, kGains, 5);
  ASSERT_EQ(pts.size(), 20u + 2u * 8u);
  for (int k = 0; k < 20; ++k) {
    EXPECT_LE(std::abs(pts[k].real()), 5.0);
    EXPECT_LE(std::abs(pts[k].imag()), 5.0);
  }
  EXPECT_EQ(pts, pencil_sample_points(modes, kGains, 5));
}

TEST(Pencil, ConnectedFamiliesHaveEmptyStackedKernel) {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int trial = 0; trial < 40 && checked < 15; ++trial) {
    const int n = 6 + trial % 4;
    const std::vector<Graph> modes{random_connected(n, 0.5, rng), random_connected(n, 0.5, rng)};
    const SwitchingNetwork net = SwitchingNetwork::periodic(modes, 0.5, 2.0);
    const int kappa = vertex_connectivity(pe_margin(net, 1.0).effective_graph);
    if (kappa < 2) continue;
    const int F = kappa - 1;
    std::vector<int> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = i;
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const std::set<int> suspected(nodes.begin(), nodes.begin() + F);
    for (const auto& lam : pencil_sample_points(modes, kGains, trial))
      EXPECT_EQ(stealth_pencil_kernel(modes, suspected, kGains, lam).cols(), 0);
    ++checked;
  }
  EXPECT_EQ(checked, 15);
}

TEST(ZeroDynamics, FullyMeasuredNetworkHasNone) {
  EXPECT_FALSE(zero_dynamics_search(Graph::complete(5), {2}, kGains).has_value());
  EXPECT_FALSE(zero_dynamics_search(Graph::path(5), {2}, kGains).has_value());
}

TEST(ZeroDynamics, HiddenTailAdmitsStealthyDirection) {
  const auto z = zero_dynamics_search(tail_mode(), kTail, kGains);
  ASSERT_TRUE(z.has_value());
  EXPECT_LE(z->residual, 1e-8);
  EXPECT_GT(z->x0.norm() + z->u0.norm(), 0.5);
  Eigen::VectorXcd v(z->x0.size() + z->u0.size());
  v << z->x0, z->u0;
  EXPECT_LE((stealth_pencil(tail_mode(), kTail, kGains, z->lambda) * v).norm(), 1e-8);
  // Cooperative outputs stay at zero along the direction.
  const Eigen::MatrixXd C = cooperative_measurement_matrix(tail_mode(), kTail);
  EXPECT_LE((C.cast<std::complex<double>>() * z->x0).norm(), 1e-8);
  EXPECT_GT(stealth_pencil_kernel({tail_mode()}, kTail, kGains, z->lambda).cols(), 0);
}

TEST(ZeroDynamics, SecondModeRemovesStealth) {
  const std::vector<Graph> both{tail_mode(), shortcut_mode()};
  EXPECT_GT(pe_margin(SwitchingNetwork::periodic(both, 0.5, 2.0), 1.0).mu, 0.0);
  for (const auto& lam : pencil_sample_points(both, kGains, 3))
    EXPECT_EQ(stealth_pencil_kernel(both, kTail, kGains, lam).cols(), 0) << lam;
}

}  // namespace
}  // namespace rmas
