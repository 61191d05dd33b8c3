#include "rmas/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rmas/error.hpp"

namespace rmas {

namespace {

constexpr double kWindowSlack = 1e-9;
constexpr int kUniformWindowSamples = 100;

double smallest_eigenvalue(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void check_window(const SwitchingNetwork& net, double t, double T) {
  if (!(T > 0.0)) fail(ErrorCategory::InvalidParameter, "window length must be positive");
  if (t < -kWindowSlack || t + T > net.horizon() + kWindowSlack)
    fail(ErrorCategory::OutOfRange, "window [" + std::to_string(t) + ", " + std::to_string(t + T) +
                                        "] exceeds horizon " + std::to_string(net.horizon()));
}

}  // namespace

Eigen::MatrixXd projection_matrix(int n) {
  if (n < 2) fail(ErrorCategory::InvalidDimension, "projection matrix needs n >= 2");
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n - 1, n);
  for (int k = 1; k < n; ++k) {
    const double s = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int j = 0; j < k; ++j) Q(k - 1, j) = s;
    Q(k - 1, k) = -k * s;
  }
  return Q;
}

double algebraic_connectivity(const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols()) fail(ErrorCategory::InvalidInput, "matrix is not square");
  const double scale = std::max(1.0, L.norm());
  if ((L - L.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    fail(ErrorCategory::InvalidInput, "matrix is not symmetric");
  if (L.rows() < 2) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
  const double l2 = es.eigenvalues()(1);
  return std::abs(l2) <= 1e-9 * scale ? 0.0 : l2;
}

Eigen::MatrixXd integral_laplacian(const SwitchingNetwork& net, double t, double T) {
  check_window(net, t, T);
  const int n = net.node_count();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::MatrixXd> cache(net.modes().size());
  for (const Segment& s : net.segments(t, t + T)) {
    if (cache[s.mode].size() == 0) cache[s.mode] = laplacian(net.modes()[s.mode]);
    acc += (s.end - s.begin) * cache[s.mode];
  }
  return acc / T;
}

Eigen::MatrixXd integral_adjacency(const SwitchingNetwork& net, double t, double T) {
  Eigen::MatrixXd L = integral_laplacian(net, t, T);
  Eigen::MatrixXd A = -L;
  A.diagonal().setZero();
  return A;
}

std::vector<double> pe_window_starts(const SwitchingNetwork& net, double T) {
  const double last = net.horizon() - T;
  if (last < -kWindowSlack) fail(ErrorCategory::OutOfRange, "horizon shorter than PE window");
  const double span = std::max(0.0, last);
  std::vector<double> starts;
  for (int k = 0; k < kUniformWindowSamples; ++k)
    starts.push_back(span * k / (kUniformWindowSamples - 1));
  for (double b : net.breakpoints()) {
    if (b <= span) starts.push_back(b);
    if (b - T >= 0.0 && b - T <= span) starts.push_back(b - T);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  return starts;
}

PEReport pe_margin(const SwitchingNetwork& net, double T) {
  const int n = net.node_count();
  PEReport rep;
  rep.window_T = T;
  rep.mu = std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd Q = n >= 2 ? projection_matrix(n) : Eigen::MatrixXd();
  Eigen::MatrixXd wmin = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  for (double t : pe_window_starts(net, T)) {
    const Eigen::MatrixXd Lbar = integral_laplacian(net, t, T);
    double m = 0.0;
    if (n >= 2) {
      const Eigen::MatrixXd reduced = Q * Lbar * Q.transpose();
      m = smallest_eigenvalue(0.5 * (reduced + reduced.transpose()));
      const double l2 = algebraic_connectivity(0.5 * (Lbar + Lbar.transpose()));
      rep.projection_discrepancy = std::max(rep.projection_discrepancy, std::abs(std::max(m, 0.0) - l2));
    }
    m = std::max(m, 0.0);
    if (m < rep.mu) {
      rep.mu = m;
      rep.worst_window_start = t;
    }
    Eigen::MatrixXd A = -Lbar;
    A.diagonal().setZero();
    wmin = wmin.cwiseMin(A);
  }
  // clamp the eigen-solver's tiny negative noise the same way algebraic_connectivity does
  const double tol = 1e-9 * std::max(1.0, static_cast<double>(n));
  if (rep.mu <= tol) rep.mu = 0.0;

  rep.effective_weights = wmin;
  std::vector<Edge> eff;
  rep.delta_floor = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (wmin(i, j) > 1e-12) {
        eff.emplace_back(i, j);
        rep.delta_floor = std::min(rep.delta_floor, wmin(i, j));
      }
  if (eff.empty()) rep.delta_floor = 0.0;
  rep.effective_graph = Graph(n, eff);
  rep.lambda2_integral = algebraic_connectivity(laplacian(rep.effective_graph));
  return rep;
}

Graph effective_edge_set(const SwitchingNetwork& net, double T, double delta) {
  if (!(delta > 0.0)) fail(ErrorCategory::InvalidParameter, "delta must be positive");
  const int n = net.node_count();
  Eigen::MatrixXd wmin = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::infinity());
  for (double t : pe_window_starts(net, T)) wmin = wmin.cwiseMin(integral_adjacency(net, t, T));
  std::vector<Edge> eff;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (wmin(i, j) >= delta - 1e-12) eff.emplace_back(i, j);
  return Graph(n, eff);
}

}  // namespace rmas
