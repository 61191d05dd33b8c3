#include "rmas/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <unsupported/Eigen/MatrixFunctions>

#include "rmas/error.hpp"

namespace rmas {

double rank_tolerance(Eigen::Index rows, Eigen::Index cols, double sigma_max) {
  return static_cast<double>(std::max(rows, cols)) * sigma_max * 1e-12;
}

namespace {

template <class Mat>
int rank_of(const Mat& M) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(M);
  const auto& s = svd.singularValues();
  const double tol = rank_tolerance(M.rows(), M.cols(), s.size() ? s(0) : 0.0);
  int r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol) ++r;
  return r;
}

template <class Mat>
Mat kernel_of(const Mat& M) {
  const Eigen::Index n = M.cols();
  if (M.rows() == 0) return Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double tol = rank_tolerance(M.rows(), M.cols(), s.size() ? s(0) : 0.0);
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > tol) ++r;
  return svd.matrixV().rightCols(n - r);
}

}  // namespace

int numeric_rank(const Eigen::MatrixXd& M) { return rank_of(M); }
int numeric_rank(const Eigen::MatrixXcd& M) { return rank_of(M); }

Eigen::MatrixXd nullspace(const Eigen::MatrixXd& M) { return kernel_of(M); }
Eigen::MatrixXcd nullspace(const Eigen::MatrixXcd& M) { return kernel_of(M); }

double smallest_singular_value(const Eigen::MatrixXcd& M) {
  if (M.rows() < M.cols()) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Q) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || Q.rows() != n || Q.cols() != n)
    fail(ErrorCategory::InvalidDimension, "Lyapunov operands must be square and conformant");
  // A = U T U^*, so A^T P + P A = -Q becomes T^* Y + Y T = -U^* Q U with P = U Y U^*.
  Eigen::ComplexSchur<Eigen::MatrixXd> schur(A);
  const Eigen::MatrixXcd& T = schur.matrixT();
  const Eigen::MatrixXcd& U = schur.matrixU();
  const Eigen::MatrixXcd F = U.adjoint() * Q.cast<std::complex<double>>() * U;
  const Eigen::MatrixXcd Th = T.adjoint();
  Eigen::MatrixXcd Y = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXcd rhs = -F.col(j);
    for (Eigen::Index k = 0; k < j; ++k) rhs -= Y.col(k) * T(k, j);
    Eigen::MatrixXcd M = Th;
    M.diagonal().array() += T(j, j);
    Y.col(j) = M.triangularView<Eigen::Lower>().solve(rhs);
  }
  Eigen::MatrixXd P = (U * Y * U.adjoint()).real();
  return 0.5 * (P + P.transpose());
}

double spectral_norm(const Eigen::MatrixXd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M.transpose() * M, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues()(es.eigenvalues().size() - 1)));
}

double spectral_abscissa(const Eigen::MatrixXd& A) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  return es.eigenvalues().real().maxCoeff();
}

bool is_normal(const Eigen::MatrixXd& A, double tol) {
  const Eigen::MatrixXd C = A * A.transpose() - A.transpose() * A;
  return C.cwiseAbs().maxCoeff() <= tol * std::max(1.0, A.squaredNorm());
}

double exp_envelope_ratio(const Eigen::MatrixXd& A, double kappa, double lambda, double t_max,
                          int samples) {
  const double dt = t_max / samples;
  const Eigen::MatrixXd step = (A * dt).exp();
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(A.rows(), A.cols());
  double worst = 1.0 / kappa;
  for (int k = 1; k <= samples; ++k) {
    E = E * step;
    const double t = k * dt;
    worst = std::max(worst, spectral_norm(E) / (kappa * std::exp(-lambda * t)));
  }
  return worst;
}

double subspace_distance(const Eigen::MatrixXd& U, const Eigen::MatrixXd& V) {
  if (U.cols() != V.cols()) return 1.0;
  if (U.cols() == 0) return 0.0;
  // || (I - V V^T) U || is the sine of the largest principal angle
  const Eigen::MatrixXd R = U - V * (V.transpose() * U);
  return spectral_norm(R);
}

}  // namespace rmas
