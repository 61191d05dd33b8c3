#pragma once

#include <Eigen/Dense>

namespace rmas {

/// Singular-value rank threshold: max_dim * sigma_max * 1e-12.
double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max);

int numeric_rank(const Eigen::MatrixXd& M);
int numeric_rank(const Eigen::MatrixXcd& M);

/// Orthonormal basis (columns) of ker M.
Eigen::MatrixXd nullspace(const Eigen::MatrixXd& M);
Eigen::MatrixXcd nullspace(const Eigen::MatrixXcd& M);

/// Smallest singular value, or 0 for a wide matrix's structural deficiency.
double smallest_singular_value(const Eigen::MatrixXcd& M);

/// Solves A^T P + P A = -Q for symmetric P (A Hurwitz) through a complex Schur
/// form of A.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q);

double spectral_norm(const Eigen::MatrixXd& M);

/// Largest real part of the spectrum.
double spectral_abscissa(const Eigen::MatrixXd& A);

bool is_normal(const Eigen::MatrixXd& A, double tol = 1e-10);

/// Samples ||exp(A t)|| at `samples` equispaced points of (0, t_max] (plus t = 0)
/// and returns the largest ratio ||exp(A t)|| / (kappa e^{-lambda t}).
double exp_envelope_ratio(const Eigen::MatrixXd& A, double kappa, double lambda, double t_max,
                          int samples);

/// Largest principal-angle sine between the column spans of U and V (both
/// orthonormal, same column count).
double subspace_distance(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V);

}  // namespace rmas
