#include "rmas/robustness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <random>
#include <string>

#include "rmas/error.hpp"

namespace rmas {

namespace {

std::vector<std::uint32_t> neighbor_masks(const Graph& g) {
  std::vector<std::uint32_t> nb(g.node_count(), 0);
  for (const Edge& e : g.edges()) {
    nb[e.u] |= 1u << e.v;
    nb[e.v] |= 1u << e.u;
  }
  return nb;
}

bool mask_connected(const std::vector<std::uint32_t>& nb, std::uint32_t alive) {
  if (alive == 0) return true;
  std::uint32_t seen = alive & (~alive + 1);  // lowest set bit
  std::uint32_t frontier = seen;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) next |= nb[std::countr_zero(f)];
    next &= alive & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == alive;
}

int vertex_connectivity_bruteforce(const Graph& g) {
  const int n = g.node_count();
  const auto nb = neighbor_masks(g);
  const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
  int best = n - 1;
  for (std::uint32_t cut = 0; cut <= all; ++cut) {
    const int k = std::popcount(cut);
    if (k >= best) continue;
    const std::uint32_t alive = all & ~cut;
    if (std::popcount(alive) < 2) continue;
    if (!mask_connected(nb, alive)) best = k;
  }
  return best;
}

// Unit-capacity max-flow on the vertex-split graph, counting internally
// vertex-disjoint s-t paths.
int local_vertex_connectivity(const Graph& g, int s, int t) {
  const int n = g.node_count();
  const int V = 2 * n;  // in(v) = 2v, out(v) = 2v + 1
  struct Arc {
    int to;
    int cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj(V);
  auto add = [&](int a, int b, int c) {
    adj[a].push_back({b, c, static_cast<int>(adj[b].size())});
    adj[b].push_back({a, 0, static_cast<int>(adj[a].size()) - 1});
  };
  const int big = n + 1;
  for (int v = 0; v < n; ++v) add(2 * v, 2 * v + 1, (v == s || v == t) ? big : 1);
  for (const Edge& e : g.edges()) {
    add(2 * e.u + 1, 2 * e.v, big);
    add(2 * e.v + 1, 2 * e.u, big);
  }
  const int src = 2 * s + 1;
  const int snk = 2 * t;
  int flow = 0;
  while (true) {
    std::vector<int> prev_node(V, -1), prev_arc(V, -1);
    std::queue<int> q;
    q.push(src);
    prev_node[src] = src;
    while (!q.empty() && prev_node[snk] < 0) {
      int u = q.front();
      q.pop();
      for (int k = 0; k < static_cast<int>(adj[u].size()); ++k) {
        const Arc& a = adj[u][k];
        if (a.cap > 0 && prev_node[a.to] < 0) {
          prev_node[a.to] = u;
          prev_arc[a.to] = k;
          q.push(a.to);
        }
      }
    }
    if (prev_node[snk] < 0) break;
    for (int v = snk; v != src; v = prev_node[v]) {
      Arc& a = adj[prev_node[v]][prev_arc[v]];
      a.cap -= 1;
      adj[v][a.rev].cap += 1;
    }
    ++flow;
  }
  return flow;
}

}  // namespace

int vertex_connectivity(const Graph& g) {
  const int n = g.node_count();
  if (n <= 1) return 0;
  if (!g.is_connected()) return 0;
  if (g.is_complete()) return n - 1;
  if (n <= kExactEnumerationCap) return vertex_connectivity_bruteforce(g);
  int best = n - 1;
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t)
      if (!g.has_edge(s, t)) best = std::min(best, local_vertex_connectivity(g, s, t));
  return best;
}

int r_robustness(const Graph& g) {
  const int n = g.node_count();
  if (n > kExactEnumerationCap)
    fail(ErrorCategory::Capability,
         "r-robustness enumeration is limited to " + std::to_string(kExactEnumerationCap) +
             " nodes; use a construction certificate (generate_r_robust_preferential)");
  if (n < 2) return 0;
  const auto nb = neighbor_masks(g);
  const std::uint32_t all = (1u << n) - 1;
  // maxout[S] = max over i in S of |N(i) \ S|
  std::vector<int> maxout(all + 1, 0);
  for (std::uint32_t S = 1; S <= all; ++S) {
    int m = 0;
    for (std::uint32_t f = S; f; f &= f - 1) m = std::max(m, std::popcount(nb[std::countr_zero(f)] & ~S));
    maxout[S] = m;
  }
  int r = n;
  for (std::uint32_t S1 = 1; S1 <= all; ++S1) {
    if (maxout[S1] >= r) continue;
    const std::uint32_t rest = all & ~S1;
    // ordered pairs are symmetric, so only take S2 with a larger lowest bit
    for (std::uint32_t S2 = rest; S2; S2 = (S2 - 1) & rest) {
      if (std::countr_zero(S2) < std::countr_zero(S1)) continue;
      r = std::min(r, std::max(maxout[S1], maxout[S2]));
      if (r == 0) return 0;
    }
  }
  return r;
}

BoundChainReport check_bound_chain(const PEReport& pe) {
  BoundChainReport rep;
  const Graph& g = pe.effective_graph;
  rep.mu = pe.mu;
  rep.mu_hat = pe.lambda2_integral;
  rep.node_count = g.node_count();
  rep.r = r_robustness(g);
  rep.kappa = vertex_connectivity(g);
  rep.effective_complete = g.is_complete();
  rep.lower_ok = static_cast<int>(std::ceil(rep.mu_hat / 2.0 - 1e-9)) <= rep.r;
  rep.r_le_kappa = rep.r <= rep.kappa;
  rep.kappa_le_n1 = rep.kappa <= rep.node_count - 1;
  rep.mu_le_mu_hat = rep.mu <= rep.mu_hat + 1e-9;
  rep.fiedler_ok = rep.effective_complete || rep.mu_hat <= rep.kappa + 1e-9;
  return rep;
}

BoundChainReport check_bound_chain(const SwitchingNetwork& net, double T) {
  return check_bound_chain(pe_margin(net, T));
}

CertifiedGraph generate_r_robust_preferential(int n, int r, std::uint64_t seed, int max_degree) {
  if (r < 1) fail(ErrorCategory::InvalidParameter, "r must be at least 1");
  if (n < 2 * r + 1)
    fail(ErrorCategory::InvalidParameter, "need N >= 2r+1 for the seed clique");
  if (max_degree > 0 && max_degree < 2 * r)
    fail(ErrorCategory::InvalidParameter, "degree cap below the seed clique degree");
  std::mt19937_64 rng(seed);
  const int m0 = 2 * r + 1;
  std::vector<Edge> edges;
  std::vector<int> deg(n, 0);
  for (int i = 0; i < m0; ++i)
    for (int j = i + 1; j < m0; ++j) {
      edges.emplace_back(i, j);
      ++deg[i];
      ++deg[j];
    }
  for (int v = m0; v < n; ++v) {
    std::vector<int> chosen;
    for (int k = 0; k < r; ++k) {
      std::vector<double> w(v, 0.0);
      double total = 0.0;
      for (int u = 0; u < v; ++u) {
        const bool taken = std::find(chosen.begin(), chosen.end(), u) != chosen.end();
        const bool saturated = max_degree > 0 && deg[u] >= max_degree;
        if (!taken && !saturated) {
          w[u] = deg[u];
          total += w[u];
        }
      }
      if (total <= 0.0)
        fail(ErrorCategory::InvalidParameter, "degree cap leaves no attachment targets");
      std::discrete_distribution<int> pick(w.begin(), w.end());
      chosen.push_back(pick(rng));
    }
    for (int u : chosen) {
      edges.emplace_back(u, v);
      ++deg[u];
      ++deg[v];
    }
  }
  return {Graph(n, edges), r};
}

RemovalCheck check_removal(const SwitchingNetwork& net, const std::set<int>& removed, double T) {
  RemovalCheck out;
  out.removed = static_cast<int>(removed.size());
  const PEReport before = pe_margin(net, T);
  const PEReport after = pe_margin(remove_nodes(net, removed).network, T);
  out.mu_before = before.mu;
  out.mu_after = after.mu;
  out.lambda2_before = before.lambda2_integral;
  out.lambda2_after = after.lambda2_integral;
  const double a = static_cast<double>(removed.size());
  out.spectral_bound_ok = out.lambda2_before <= out.lambda2_after + a + 1e-9;
  out.window_bound_ok = out.mu_before <= out.mu_after + a + 1e-9;
  out.connected_after = out.mu_after > 0.0;
  return out;
}

}  // namespace rmas
