#pragma once

// Hand-rolled generators and independent oracles shared by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "graphnorm/graph.hpp"
#include "graphnorm/rng.hpp"
#include "graphnorm/step_kernel.hpp"

namespace testing {

using graphnorm::Graph;
using graphnorm::SplitMix64Stream;
using graphnorm::StepKernel;

inline Graph random_graph(SplitMix64Stream& rng, int min_v, int max_v, double p) {
  const int n = min_v + rng.below(max_v - min_v + 1);
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform() < p) e.emplace_back(u, v);
  return Graph(n, e);
}

inline std::vector<double> random_measures(SplitMix64Stream& rng, int k) {
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) total += (x = 0.05 + rng.uniform());
  for (double& x : w) x /= total;
  return w;
}

inline StepKernel random_kernel(SplitMix64Stream& rng, int k, double lo, double hi) {
  return StepKernel::from_upper(random_measures(rng, k), [&](int, int) { return rng.uniform(lo, hi); });
}

inline StepKernel random_kernel_on(SplitMix64Stream& rng, std::span<const double> mu, double lo, double hi) {
  return StepKernel::from_upper({mu.begin(), mu.end()}, [&](int, int) { return rng.uniform(lo, hi); });
}

inline std::vector<int> random_permutation(SplitMix64Stream& rng, int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[rng.below(i + 1)]);
  return p;
}

// Plain nested enumeration over assignments, one kernel per edge; shares no
// code with the library's engines.
inline double oracle_density(const Graph& h, const std::vector<const StepKernel*>& per_edge) {
  const int n = h.vertex_count();
  const int k = per_edge.empty() ? 1 : per_edge.front()->parts();
  const auto mu = per_edge.empty() ? std::vector<double>{1.0}
                                   : std::vector<double>(per_edge.front()->measures().begin(),
                                                         per_edge.front()->measures().end());
  std::vector<int> phi(n, 0);
  long double total = 0.0L;
  for (;;) {
    long double term = 1.0L;
    for (int v = 0; v < n; ++v) term *= mu[phi[v]];
    const auto& edges = h.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) term *= per_edge[i]->value(phi[edges[i].u], phi[edges[i].v]);
    total += term;
    int v = n - 1;
    while (v >= 0 && ++phi[v] == k) phi[v--] = 0;
    if (v < 0) break;
  }
  return static_cast<double>(total);
}

inline double oracle_density(const Graph& h, const StepKernel& w) {
  return oracle_density(h, std::vector<const StepKernel*>(h.edge_count(), &w));
}

inline bool rel_close(double a, double b, double tol) {
  if (a == b) return true;
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

// Isomorphism by trying every permutation; fine up to 7 vertices.
inline bool oracle_isomorphic(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> p(a.vertex_count());
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (const auto& e : a.edges())
      if (!b.has_edge(p[e.u], p[e.v])) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

}  // namespace testing
