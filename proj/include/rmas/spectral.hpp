#pragma once

#include <vector>

#include <Eigen/Dense>

#include "rmas/graph.hpp"

namespace rmas {

/// Orthonormal (n-1)xn basis of the hyperplane orthogonal to the ones vector
/// (Helmert rows). Throws InvalidDimension for n < 2.
Eigen::MatrixXd projection_matrix(int n);

/// Second-smallest eigenvalue of a symmetric Laplacian-like matrix, clamped to 0
/// within 1e-9 * max(1, ||L||). Throws InvalidInput on asymmetric input.
double algebraic_connectivity(const Eigen::MatrixXd& L);

/// (1/T) * integral of L_sigma over [t, t+T], exact over constant-mode pieces.
Eigen::MatrixXd integral_laplacian(const SwitchingNetwork& net, double t, double T);

/// Same integral of the adjacency matrix: entry (i,j) is the fraction of the
/// window during which edge (i,j) is active.
Eigen::MatrixXd integral_adjacency(const SwitchingNetwork& net, double t, double T);

/// Window starts over which PE quantities are minimized: a 100-point uniform
/// grid on [0, horizon - T] plus every breakpoint b and b - T inside that range.
std::vector<double> pe_window_starts(const SwitchingNetwork& net, double T);

struct PEReport {
  double mu = 0.0;                // min over windows of lambda_min(Q Lbar Q^T)
  double window_T = 0.0;
  double worst_window_start = 0.0;
  double lambda2_integral = 0.0;  // lambda_2 of the effective graph Laplacian
  double delta_floor = 0.0;       // smallest uniform average weight over effective edges
  Graph effective_graph;          // edges with positive average weight in every window
  Eigen::MatrixXd effective_weights;  // min-over-windows averaged adjacency
  double projection_discrepancy = 0.0;    // max |lambda_min(Q Lbar Q^T) - lambda_2(Lbar)|
};

PEReport pe_margin(const SwitchingNetwork& net, double T);

/// Edges whose windowed average adjacency is >= delta for every window start.
Graph effective_edge_set(const SwitchingNetwork& net, double T, double delta);

}  // namespace rmas
