#include "rmas/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "rmas/error.hpp"

namespace rmas {

Graph::Graph(int node_count, std::vector<Edge> edges) : n_(node_count) {
  if (node_count < 1) fail(ErrorCategory::InvalidInput, "graph needs at least one node");
  for (const Edge& e : edges) {
    if (e.u == e.v) fail(ErrorCategory::InvalidInput, "self-loop at node " + std::to_string(e.u));
    if (e.u < 0 || e.v >= n_)
      fail(ErrorCategory::InvalidInput,
           "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    fail(ErrorCategory::InvalidInput, "duplicate edge");
  edges_ = std::move(edges);
  adj_.assign(n_, {});
  for (const Edge& e : edges_) {
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

Graph Graph::complete(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

Graph Graph::path(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

Graph Graph::star(int n, int center) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    if (i != center) e.emplace_back(center, i);
  return Graph(n, std::move(e));
}

bool Graph::has_edge(int a, int b) const {
  if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) return false;
  const auto& na = adj_[a];
  return std::binary_search(na.begin(), na.end(), b);
}

int Graph::max_degree() const {
  int m = 0;
  for (const auto& a : adj_) m = std::max(m, static_cast<int>(a.size()));
  return m;
}

bool Graph::is_complete() const {
  return edges_.size() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
}

bool Graph::is_connected() const {
  if (n_ <= 1) return true;
  std::vector<char> seen(n_, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int w : adj_[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == n_;
}

Graph Graph::without_edges(const std::set<Edge>& removed) const {
  if (removed.empty()) return *this;
  std::vector<Edge> kept;
  kept.reserve(edges_.size());
  for (const Edge& e : edges_)
    if (!removed.count(e)) kept.push_back(e);
  return Graph(n_, std::move(kept));
}

Graph Graph::with_edges(const std::vector<Edge>& added) const {
  std::set<Edge> all(edges_.begin(), edges_.end());
  all.insert(added.begin(), added.end());
  return Graph(n_, std::vector<Edge>(all.begin(), all.end()));
}

Eigen::MatrixXd laplacian(const Graph& g) {
  const int n = g.node_count();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    L(e.u, e.u) += 1.0;
    L(e.v, e.v) += 1.0;
    L(e.u, e.v) -= 1.0;
    L(e.v, e.u) -= 1.0;
  }
  return L;
}

Eigen::MatrixXd adjacency(const Graph& g) {
  const int n = g.node_count();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) A(e.u, e.v) = A(e.v, e.u) = 1.0;
  return A;
}

std::set<int> khop_neighbors(const Graph& g, int i, int k) {
  if (i < 0 || i >= g.node_count()) fail(ErrorCategory::OutOfRange, "node index out of range");
  if (k != 1 && k != 2) fail(ErrorCategory::InvalidParameter, "k must be 1 or 2");
  std::set<int> out;
  for (int a : g.neighbors(i)) {
    if (k == 1) {
      out.insert(a);
      continue;
    }
    for (int b : g.neighbors(a))
      if (b != i) out.insert(b);
  }
  return out;
}

// ---------------------------------------------------------------------------

SwitchingNetwork::SwitchingNetwork(std::vector<Graph> modes, std::vector<ScheduleEntry> schedule,
                                   double horizon)
    : modes_(std::move(modes)), schedule_(std::move(schedule)), horizon_(horizon) {
  if (modes_.empty()) fail(ErrorCategory::InvalidInput, "switching network needs at least one mode");
  const int n = modes_.front().node_count();
  for (const Graph& g : modes_)
    if (g.node_count() != n) fail(ErrorCategory::InvalidInput, "modes disagree on node count");
  if (schedule_.empty() || schedule_.front().start != 0.0)
    fail(ErrorCategory::InvalidInput, "schedule must start at t = 0");
  for (std::size_t k = 0; k < schedule_.size(); ++k) {
    const auto& s = schedule_[k];
    if (s.mode < 0 || s.mode >= static_cast<int>(modes_.size()))
      fail(ErrorCategory::InvalidInput, "schedule references unknown mode " + std::to_string(s.mode));
    if (k > 0 && !(s.start > schedule_[k - 1].start))
      fail(ErrorCategory::InvalidInput, "schedule times must be strictly increasing");
  }
  if (!(horizon_ > 0.0)) fail(ErrorCategory::InvalidInput, "horizon must be positive");
}

SwitchingNetwork SwitchingNetwork::constant(const Graph& g, double horizon) {
  return SwitchingNetwork({g}, {{0.0, 0}}, horizon);
}

SwitchingNetwork SwitchingNetwork::periodic(std::vector<Graph> modes, double dwell, double horizon) {
  if (!(dwell > 0.0)) fail(ErrorCategory::InvalidParameter, "dwell must be positive");
  std::vector<ScheduleEntry> sched;
  const int q = static_cast<int>(modes.size());
  // integer stepping keeps breakpoints exact multiples of the dwell
  for (long k = 0;; ++k) {
    double t = static_cast<double>(k) * dwell;
    if (t >= horizon) break;
    sched.push_back({t, static_cast<int>(k % q)});
  }
  return SwitchingNetwork(std::move(modes), std::move(sched), horizon);
}

int SwitchingNetwork::mode_index_at(double t) const {
  auto it = std::upper_bound(schedule_.begin(), schedule_.end(), t,
                             [](double x, const ScheduleEntry& e) { return x < e.start; });
  if (it == schedule_.begin()) return schedule_.front().mode;
  return std::prev(it)->mode;
}

std::vector<Segment> SwitchingNetwork::segments(double a, double b) const {
  std::vector<Segment> out;
  for (std::size_t k = 0; k < schedule_.size(); ++k) {
    double s = schedule_[k].start;
    double e = (k + 1 < schedule_.size()) ? schedule_[k + 1].start : std::max(horizon_, b);
    double lo = std::max(s, a);
    double hi = std::min(e, b);
    if (hi > lo) out.push_back({lo, hi, schedule_[k].mode});
  }
  return out;
}

std::vector<double> SwitchingNetwork::breakpoints() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < schedule_.size(); ++k) out.push_back(schedule_[k].start);
  return out;
}

Graph SwitchingNetwork::union_graph() const {
  std::set<Edge> all;
  std::set<int> used;
  for (const auto& s : schedule_) used.insert(s.mode);
  for (int m : used) all.insert(modes_[m].edges().begin(), modes_[m].edges().end());
  return Graph(node_count(), std::vector<Edge>(all.begin(), all.end()));
}

SwitchingNetwork SwitchingNetwork::with_horizon(double horizon) const {
  std::vector<ScheduleEntry> sched;
  for (const auto& s : schedule_)
    if (s.start < horizon) sched.push_back(s);
  return SwitchingNetwork(modes_, std::move(sched), horizon);
}

SwitchingNetwork SwitchingNetwork::without_edges(const std::set<Edge>& removed) const {
  std::vector<Graph> modes;
  modes.reserve(modes_.size());
  for (const Graph& g : modes_) modes.push_back(g.without_edges(removed));
  return SwitchingNetwork(std::move(modes), schedule_, horizon_);
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& keep) {
  std::vector<int> pos(g.node_count(), -1);
  for (std::size_t k = 0; k < keep.size(); ++k) pos[keep[k]] = static_cast<int>(k);
  std::vector<Edge> e;
  for (const Edge& x : g.edges())
    if (pos[x.u] >= 0 && pos[x.v] >= 0) e.emplace_back(pos[x.u], pos[x.v]);
  return Graph(static_cast<int>(keep.size()), std::move(e));
}

InducedNetwork remove_nodes(const SwitchingNetwork& net, const std::set<int>& removed) {
  const int n = net.node_count();
  for (int r : removed)
    if (r < 0 || r >= n) fail(ErrorCategory::OutOfRange, "removed node out of range");
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (!removed.count(i)) keep.push_back(i);
  if (keep.empty()) fail(ErrorCategory::EmptyNetwork, "removing every node leaves an empty network");
  std::vector<Graph> modes;
  for (const Graph& g : net.modes()) modes.push_back(induced_subgraph(g, keep));
  return {SwitchingNetwork(std::move(modes), net.schedule(), net.horizon()), keep};
}

// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXd block(const Eigen::MatrixXd& L, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = L(rows[r], cols[c]);
  return out;
}

}  // namespace

LaplacianPartition partition_laplacian(const Graph& g, int i) {
  const int n = g.node_count();
  if (i < 0 || i >= n) fail(ErrorCategory::OutOfRange, "node index out of range");
  LaplacianPartition p;
  p.owner = i;
  const std::set<int> n1 = khop_neighbors(g, i, 1);
  const std::set<int> n2 = khop_neighbors(g, i, 2);
  p.one_hop_set.push_back(i);
  p.one_hop_set.insert(p.one_hop_set.end(), n1.begin(), n1.end());
  for (int b : n2)
    if (!n1.count(b)) p.two_hop_set.push_back(b);
  std::vector<char> taken(n, 0);
  for (int x : p.one_hop_set) taken[x] = 1;
  for (int x : p.two_hop_set) taken[x] = 1;
  for (int x = 0; x < n; ++x)
    if (!taken[x]) p.rest_set.push_back(x);
  p.order = p.one_hop_set;
  p.order.insert(p.order.end(), p.two_hop_set.begin(), p.two_hop_set.end());
  p.order.insert(p.order.end(), p.rest_set.begin(), p.rest_set.end());

  const Eigen::MatrixXd L = laplacian(g);
  const auto& s1 = p.one_hop_set;
  const auto& s2 = p.two_hop_set;
  const auto& s3 = p.rest_set;
  p.L11 = block(L, s1, s1);
  p.L12 = block(L, s1, s2);
  p.L21 = block(L, s2, s1);
  p.L22 = block(L, s2, s2);
  p.L23 = block(L, s2, s3);
  p.L32 = block(L, s3, s2);
  p.L33 = block(L, s3, s3);
  p.Lrest = p.L33;

  const int m1 = static_cast<int>(s1.size());
  p.Lprime = Eigen::MatrixXd::Zero(m1, m1);
  for (int k = 1; k < m1; ++k) {
    p.Lprime(0, 0) += 1.0;
    p.Lprime(k, k) += 1.0;
    p.Lprime(0, k) = p.Lprime(k, 0) = -1.0;
  }
  p.Ltilde = p.L11 - p.Lprime;

  // 2-hop rows keep only the degree owed to edges into the 1-hop set
  p.Ldoubletilde = p.L22;
  for (std::size_t r = 0; r < s2.size(); ++r) p.Ldoubletilde(r, r) += p.L21.row(r).sum();
  return p;
}

Eigen::MatrixXd LaplacianPartition::two_hop_laplacian() const {
  const Eigen::Index a = L11.rows();
  const Eigen::Index b = L22.rows();
  Eigen::MatrixXd out(a + b, a + b);
  out.topLeftCorner(a, a) = L11;
  out.topRightCorner(a, b) = L12;
  out.bottomLeftCorner(b, a) = L21;
  out.bottomRightCorner(b, b) = L22 - Ldoubletilde;
  return out;
}

Eigen::MatrixXd LaplacianPartition::assemble() const {
  const Eigen::Index a = L11.rows();
  const Eigen::Index b = L22.rows();
  const Eigen::Index c = L33.rows();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a + b + c, a + b + c);
  out.block(0, 0, a, a) = Lprime + Ltilde;
  out.block(0, a, a, b) = L12;
  out.block(a, 0, b, a) = L21;
  out.block(a, a, b, b) = L22;
  out.block(a, a + b, b, c) = L23;
  out.block(a + b, a, c, b) = L32;
  out.block(a + b, a + b, c, c) = Lrest;
  return out;
}

}  // namespace rmas
