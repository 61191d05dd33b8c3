#include "rmas/stealth.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "rmas/detect.hpp"
#include "rmas/error.hpp"
#include "rmas/linalg.hpp"

namespace rmas {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXd malicious_input_matrix(int n, const std::set<int>& suspected) {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2 * n, suspected.size());
  int c = 0;
  for (int a : suspected) B(n + a, c++) = 1.0;
  return B;
}

void check_suspected(int n, const std::set<int>& suspected) {
  if (suspected.empty()) fail(ErrorCategory::InvalidInput, "suspected set must be nonempty");
  for (int a : suspected)
    if (a < 0 || a >= n) fail(ErrorCategory::OutOfRange, "suspected node out of range");
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Eigen::MatrixXd cooperative_measurement_matrix(const Graph& g, const std::set<int>& malicious) {
  const int n = g.node_count();
  std::vector<Eigen::RowVectorXd> rows;
  for (int i = 0; i < n; ++i) {
    if (malicious.count(i)) continue;
    const TwoHopView view = two_hop_view(g, i, Gains{});
    for (int node : view.nodes) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(2 * n);
      r(node) = 1.0;
      rows.push_back(r);
    }
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(2 * n);
    r(n + i) = 1.0;
    rows.push_back(r);
  }
  Eigen::MatrixXd C(rows.size(), 2 * n);
  for (std::size_t k = 0; k < rows.size(); ++k) C.row(k) = rows[k];
  return C;
}

KernelReport measurement_kernel(const std::vector<Graph>& modes, const std::set<int>& malicious) {
  if (modes.empty()) fail(ErrorCategory::InvalidInput, "need at least one mode");
  const int n = modes.front().node_count();
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::Index rows = 0;
  for (const Graph& g : modes) {
    blocks.push_back(cooperative_measurement_matrix(g, malicious));
    rows += blocks.back().rows();
  }
  Eigen::MatrixXd stacked(rows, 2 * n);
  Eigen::Index r0 = 0;
  for (const auto& b : blocks) {
    stacked.middleRows(r0, b.rows()) = b;
    r0 += b.rows();
  }
  KernelReport rep;
  rep.basis = nullspace(stacked);
  rep.expected = malicious_input_matrix(n, malicious);
  rep.dimension = static_cast<int>(rep.basis.cols());
  rep.expected_dimension = static_cast<int>(malicious.size());
  rep.distance = subspace_distance(rep.basis, rep.expected);
  return rep;
}

Eigen::MatrixXcd stealth_pencil(const Graph& g, const std::set<int>& suspected, const Gains& gains,
                                cd lambda) {
  const int n = g.node_count();
  check_suspected(n, suspected);
  const Eigen::MatrixXd A = closed_loop_matrix(g, gains);
  const Eigen::MatrixXd B = malicious_input_matrix(n, suspected);
  const Eigen::MatrixXd C = cooperative_measurement_matrix(g, suspected);
  const Eigen::Index s = 2 * n;
  const Eigen::Index a = B.cols();
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(s + C.rows(), s + a);
  P.topLeftCorner(s, s) = -A.cast<cd>();
  P.topLeftCorner(s, s).diagonal().array() += lambda;
  P.topRightCorner(s, a) = -B.cast<cd>();
  P.bottomLeftCorner(C.rows(), s) = C.cast<cd>();
  return P;
}

Eigen::MatrixXcd stealth_pencil_kernel(const std::vector<Graph>& modes,
                                       const std::set<int>& suspected, const Gains& gains,
                                       cd lambda) {
  if (modes.empty()) fail(ErrorCategory::InvalidInput, "need at least one mode");
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::Index rows = 0;
  for (const Graph& g : modes) {
    blocks.push_back(stealth_pencil(g, suspected, gains, lambda));
    rows += blocks.back().rows();
  }
  Eigen::MatrixXcd stacked(rows, blocks.front().cols());
  Eigen::Index r0 = 0;
  for (const auto& b : blocks) {
    stacked.middleRows(r0, b.rows()) = b;
    r0 += b.rows();
  }
  return nullspace(stacked);
}

std::vector<cd> pencil_sample_points(const std::vector<Graph>& modes, const Gains& gains,
                                     std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<cd> pts;
  for (int k = 0; k < count; ++k) {
    const double re = -5.0 + 10.0 * unit_uniform(rng);
    const double im = -5.0 + 10.0 * unit_uniform(rng);
    pts.emplace_back(re, im);
  }
  for (const Graph& g : modes) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(closed_loop_matrix(g, gains), false);
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) pts.push_back(es.eigenvalues()(k));
  }
  return pts;
}

std::optional<ZeroDirection> zero_dynamics_search(const Graph& g, const std::set<int>& suspected,
                                                  const Gains& gains, std::uint64_t seed) {
  const int n = g.node_count();
  check_suspected(n, suspected);
  const Eigen::Index s = 2 * n;
  const Eigen::Index a = static_cast<Eigen::Index>(suspected.size());

  auto kernel_direction = [&](cd lam) -> std::optional<ZeroDirection> {
    const Eigen::MatrixXcd P = stealth_pencil(g, suspected, gains, lam);
    const Eigen::MatrixXcd K = nullspace(P);
    if (K.cols() == 0) return std::nullopt;
    ZeroDirection z;
    z.lambda = lam;
    Eigen::VectorXcd v = K.col(0);
    v /= v.norm();
    z.x0 = v.head(s);
    z.u0 = v.tail(a);
    z.residual = (P * v).norm();
    return z;
  };

  std::mt19937_64 rng(seed);
  const cd probe(-5.0 + 10.0 * unit_uniform(rng), -5.0 + 10.0 * unit_uniform(rng));
  if (auto z = kernel_direction(probe)) {
    z->normal_rank_deficient = true;
    return z;
  }

  // Invariant zeros: square the tall pencil lambda E - F down with a random row
  // combination and verify each finite generalized eigenvalue on the full pencil.
  const Eigen::MatrixXd A = closed_loop_matrix(g, gains);
  const Eigen::MatrixXd B = malicious_input_matrix(n, suspected);
  const Eigen::MatrixXd C = cooperative_measurement_matrix(g, suspected);
  const Eigen::Index rows = s + C.rows();
  const Eigen::Index cols = s + a;
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(rows, cols);
  E.topLeftCorner(s, s).setIdentity();
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(rows, cols);
  F.topLeftCorner(s, s) = A;
  F.topRightCorner(s, a) = B;
  F.bottomLeftCorner(C.rows(), s) = -C;
  Eigen::MatrixXd R(cols, rows);
  for (Eigen::Index i = 0; i < R.rows(); ++i)
    for (Eigen::Index j = 0; j < R.cols(); ++j) R(i, j) = -1.0 + 2.0 * unit_uniform(rng);
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(R * F, R * E, false);
  const auto& alphas = ges.alphas();
  const auto& betas = ges.betas();
  std::vector<cd> candidates;
  for (Eigen::Index k = 0; k < alphas.size(); ++k)
    if (std::abs(betas(k)) > 1e-12 * std::max(1.0, std::abs(alphas(k))))
      candidates.push_back(alphas(k) / betas(k));
  std::sort(candidates.begin(), candidates.end(),
            [](cd x, cd y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });

  std::optional<ZeroDirection> best;
  for (cd lam : candidates) {
    const Eigen::MatrixXcd P = stealth_pencil(g, suspected, gains, lam);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(P, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin > 1e-8 * std::max(1.0, sv(0))) continue;
    Eigen::VectorXcd v = svd.matrixV().col(cols - 1);
    ZeroDirection z;
    z.lambda = lam;
    z.x0 = v.head(s);
    z.u0 = v.tail(a);
    z.residual = (P * v).norm();
    if (!best || z.residual < best->residual) best = z;
  }
  return best;
}

}  // namespace rmas
