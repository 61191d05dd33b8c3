#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "rmas/graph.hpp"
#include "rmas/plant.hpp"

namespace rmas {

/// Stacked local measurement rows of the cooperative agents, in global
/// coordinates x = col(p_tilde, v): each cooperative agent contributes the
/// positions of its 2-hop view and its own velocity.
Eigen::MatrixXd cooperative_measurement_matrix(const Graph& g, const std::set<int>& malicious);

struct KernelReport {
  Eigen::MatrixXd basis;     // orthonormal columns
  Eigen::MatrixXd expected;  // malicious velocity axes
  int dimension = 0;
  int expected_dimension = 0;
  double distance = 0.0;     // sine of the largest principal angle
  bool matches(double tol = 1e-9) const { return dimension == expected_dimension && distance <= tol; }
};

/// Intersection over modes of ker C^{V \ A}, compared with the malicious velocity span.
KernelReport measurement_kernel(const std::vector<Graph>& modes, const std::set<int>& malicious);

/// P(lambda) = [[lambda I - A, -B_A], [C^{V \ A}, 0]].
Eigen::MatrixXcd stealth_pencil(const Graph& g, const std::set<int>& suspected, const Gains& gains,
                                std::complex<double> lambda);

/// Kernel of the vertically stacked pencils of all modes. Throws InvalidInput
/// for an empty suspected set.
Eigen::MatrixXcd stealth_pencil_kernel(const std::vector<Graph>& modes,
                                       const std::set<int>& suspected, const Gains& gains,
                                       std::complex<double> lambda);

/// `count` seeded points with real and imaginary parts in [-5, 5] followed by the
/// eigenvalues of every closed-loop mode matrix.
std::vector<std::complex<double>> pencil_sample_points(const std::vector<Graph>& modes,
                                                       const Gains& gains, std::uint64_t seed,
                                                       int count = 20);

struct ZeroDirection {
  std::complex<double> lambda;
  Eigen::VectorXcd x0;
  Eigen::VectorXcd u0;
  double residual = 0.0;  // ||P(lambda) col(x0, u0)||
  bool normal_rank_deficient = false;
};

/// Searches a static topology for an output-zeroing direction of the pencil.
std::optional<ZeroDirection> zero_dynamics_search(const Graph& g, const std::set<int>& suspected,
                                                  const Gains& gains, std::uint64_t seed = 1);

}  // namespace rmas
