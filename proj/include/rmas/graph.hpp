#pragma once

#include <compare>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace rmas {

/// Undirected edge stored with u < v.
struct Edge {
  int u = 0;
  int v = 0;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;
  bool operator==(const Edge&) const = default;
};

/// Simple undirected graph on nodes 0..N-1 with unit edge weights.
class Graph {
 public:
  Graph() = default;
  /// Throws InvalidInput on self-loops, duplicate edges or out-of-range nodes.
  explicit Graph(int node_count, std::vector<Edge> edges = {});

  static Graph complete(int n);
  static Graph path(int n);
  static Graph star(int n, int center = 0);

  int node_count() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(int a, int b) const;
  const std::vector<int>& neighbors(int i) const { return adj_.at(i); }
  int degree(int i) const { return static_cast<int>(adj_.at(i).size()); }
  int max_degree() const;
  bool is_complete() const;
  bool is_connected() const;

  Graph without_edges(const std::set<Edge>& removed) const;
  Graph with_edges(const std::vector<Edge>& added) const;

  bool operator==(const Graph& other) const {
    return n_ == other.n_ && edges_ == other.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

/// L = D - A.
Eigen::MatrixXd laplacian(const Graph& g);
Eigen::MatrixXd adjacency(const Graph& g);

/// Nodes reachable from i by a path of length exactly k (k in {1,2}), excluding i.
/// A node can be both a 1-hop and a 2-hop neighbor.
std::set<int> khop_neighbors(const Graph& g, int i, int k);

struct ScheduleEntry {
  double start = 0.0;
  int mode = 0;

  bool operator==(const ScheduleEntry&) const = default;
};

/// Constant-mode stretch [begin, end) of a schedule.
struct Segment {
  double begin = 0.0;
  double end = 0.0;
  int mode = 0;
};

/// Finite library of graph modes and a piecewise-constant, right-continuous
/// switching schedule on [0, horizon].
class SwitchingNetwork {
 public:
  SwitchingNetwork() = default;
  SwitchingNetwork(std::vector<Graph> modes, std::vector<ScheduleEntry> schedule,
                   double horizon);

  static SwitchingNetwork constant(const Graph& g, double horizon);
  /// Cycles through the modes, dwelling `dwell` seconds in each.
  static SwitchingNetwork periodic(std::vector<Graph> modes, double dwell, double horizon);

  int node_count() const { return modes_.empty() ? 0 : modes_.front().node_count(); }
  const std::vector<Graph>& modes() const { return modes_; }
  const std::vector<ScheduleEntry>& schedule() const { return schedule_; }
  double horizon() const { return horizon_; }

  int mode_index_at(double t) const;
  const Graph& graph_at(double t) const { return modes_[mode_index_at(t)]; }

  /// Constant-mode pieces covering [a, b]; zero-length pieces are dropped.
  std::vector<Segment> segments(double a, double b) const;
  /// Schedule switch instants (excluding 0).
  std::vector<double> breakpoints() const;

  Graph union_graph() const;
  SwitchingNetwork with_horizon(double horizon) const;
  SwitchingNetwork without_edges(const std::set<Edge>& removed) const;

  bool operator==(const SwitchingNetwork&) const = default;

 private:
  std::vector<Graph> modes_;
  std::vector<ScheduleEntry> schedule_;
  double horizon_ = 0.0;
};

/// Induced subnetwork after node removal; original_index maps new -> old.
struct InducedNetwork {
  SwitchingNetwork network;
  std::vector<int> original_index;
};

Graph induced_subgraph(const Graph& g, const std::vector<int>& keep);
InducedNetwork remove_nodes(const SwitchingNetwork& net, const std::set<int>& removed);

/// Laplacian blocks seen from one node: ordering [ {i} u N1 | N2 \ N1 | rest ].
struct LaplacianPartition {
  int owner = 0;
  std::vector<int> one_hop_set;  // owner first, then 1-hop neighbors ascending
  std::vector<int> two_hop_set;  // 2-hop nodes not already in one_hop_set
  std::vector<int> rest_set;
  std::vector<int> order;        // concatenation of the three sets

  Eigen::MatrixXd L11, L12, L21, L22, L23, L32, L33;
  Eigen::MatrixXd Lprime;          // star Laplacian of owner with its 1-hop neighbors
  Eigen::MatrixXd Ltilde;          // L11 - Lprime
  Eigen::MatrixXd Ldoubletilde;    // L22 minus the 1-hop/2-hop edge degrees
  Eigen::MatrixXd Lrest;           // == L33

  /// Laplacian of the 2-hop proximity graph on one_hop_set u two_hop_set.
  Eigen::MatrixXd two_hop_laplacian() const;
  /// Full Laplacian in the permuted order, rebuilt from the blocks.
  Eigen::MatrixXd assemble() const;
};

LaplacianPartition partition_laplacian(const Graph& g, int i);

}  // namespace rmas
