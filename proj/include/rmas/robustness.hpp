#pragma once

#include <cstdint>
#include <set>

#include "rmas/graph.hpp"
#include "rmas/spectral.hpp"

namespace rmas {

/// Largest node count accepted by the exact enumerations below.
inline constexpr int kExactEnumerationCap = 12;

/// Exact vertex connectivity; 0 for disconnected graphs, N-1 for complete graphs.
int vertex_connectivity(const Graph& g);

/// Exact r-robustness by enumeration of disjoint subset pairs.
/// Throws Capability above kExactEnumerationCap nodes.
int r_robustness(const Graph& g);

struct BoundChainReport {
  double mu = 0.0;
  double mu_hat = 0.0;  // lambda_2 of the effective graph
  int r = 0;
  int kappa = 0;
  int node_count = 0;
  bool effective_complete = false;
  bool lower_ok = false;        // ceil(mu_hat / 2) <= r
  bool r_le_kappa = false;
  bool kappa_le_n1 = false;
  bool mu_le_mu_hat = false;
  bool fiedler_ok = true;       // lambda_2 <= kappa when noncomplete
  bool holds() const { return lower_ok && r_le_kappa && kappa_le_n1 && mu_le_mu_hat && fiedler_ok; }
};

BoundChainReport check_bound_chain(const SwitchingNetwork& net, double T);
BoundChainReport check_bound_chain(const PEReport& pe);

struct CertifiedGraph {
  Graph graph;
  int certified_r = 0;
};

/// K_{2r+1} seed, then each new node links to r distinct existing nodes drawn with
/// degree-proportional probability; max_degree > 0 excludes saturated targets.
CertifiedGraph generate_r_robust_preferential(int n, int r, std::uint64_t seed, int max_degree = 0);

struct RemovalCheck {
  double mu_before = 0.0;
  double mu_after = 0.0;
  double lambda2_before = 0.0;  // effective graph
  double lambda2_after = 0.0;   // effective graph of the induced network
  int removed = 0;
  bool spectral_bound_ok = false;  // lambda2_before <= lambda2_after + |A|
  bool window_bound_ok = false;    // mu_before <= mu_after + |A|
  bool connected_after = false;    // mu_after > 0
};

/// Compares PE quantities before and after removing `removed` from every mode.
RemovalCheck check_removal(const SwitchingNetwork& net, const std::set<int>& removed, double T);

}  // namespace rmas
