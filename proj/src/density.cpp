#include "graphnorm/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace graphnorm {

namespace {

// Neumaier summation in extended precision.
class CompensatedSum {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  long double value() const { return sum_ + comp_; }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

struct Factor {
  std::vector<int> vars;  // sorted; first var is the most significant digit
  std::vector<long double> table;
};

struct EdgeTerm {
  int u;
  int v;
  const StepKernel* kernel;
};

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

Factor edge_factor(const EdgeTerm& e) {
  const int k = e.kernel->parts();
  Factor f;
  f.vars = {std::min(e.u, e.v), std::max(e.u, e.v)};
  f.table.resize(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) f.table[static_cast<std::size_t>(i) * k + j] = e.kernel->value(i, j);
  return f;
}

// Sums variable v out of every factor mentioning it, weighting by the part
// measures. Returns the new factor over the remaining neighbours.
Factor eliminate(int v, std::vector<Factor>& factors, std::span<const double> measures) {
  const std::size_t k = measures.size();
  std::vector<Factor> touching;
  std::vector<Factor> rest;
  for (auto& f : factors) {
    if (std::binary_search(f.vars.begin(), f.vars.end(), v))
      touching.push_back(std::move(f));
    else
      rest.push_back(std::move(f));
  }
  factors = std::move(rest);

  std::vector<int> scope;
  for (const auto& f : touching)
    for (int x : f.vars)
      if (x != v) scope.push_back(x);
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());

  Factor out;
  out.vars = scope;
  if (touching.empty()) {
    // Isolated variable: the measures form a probability vector.
    out.table = {1.0L};
    return out;
  }

  // Each touching table is copied so that v varies fastest; stride[f][s] is
  // then the stride of scope[s] in that copy (0 if absent).
  const std::size_t nf = touching.size();
  std::vector<std::vector<std::size_t>> stride(nf, std::vector<std::size_t>(scope.size(), 0));
  std::vector<std::vector<long double>> tabs(nf);
  for (std::size_t fi = 0; fi < nf; ++fi) {
    const auto& vars = touching[fi].vars;
    const std::size_t r = vars.size();
    std::vector<std::size_t> old_stride(r);
    for (std::size_t p = 0; p < r; ++p) old_stride[p] = ipow(k, r - 1 - p);
    // New layout: the other vars in order, then v.
    std::vector<std::size_t> order;
    for (std::size_t p = 0; p < r; ++p)
      if (vars[p] != v) order.push_back(p);
    std::size_t vpos = 0;
    while (vars[vpos] != v) ++vpos;
    order.push_back(vpos);
    std::vector<std::size_t> new_stride(r);
    for (std::size_t q = 0; q < r; ++q) new_stride[order[q]] = ipow(k, r - 1 - q);
    for (std::size_t p = 0; p < r; ++p)
      if (vars[p] != v) {
        auto it = std::lower_bound(scope.begin(), scope.end(), vars[p]);
        stride[fi][static_cast<std::size_t>(it - scope.begin())] = new_stride[p];
      }
    const auto& src = touching[fi].table;
    auto& dst = tabs[fi];
    dst.resize(src.size());
    std::vector<std::size_t> digit(r, 0);
    for (std::size_t idx = 0; idx < src.size(); ++idx) {
      std::size_t to = 0;
      for (std::size_t p = 0; p < r; ++p) to += digit[p] * new_stride[p];
      dst[to] = src[idx];
      for (std::size_t p = r; p-- > 0;) {
        if (++digit[p] < k) break;
        digit[p] = 0;
      }
    }
  }

  const std::size_t out_size = ipow(k, scope.size());
  out.table.assign(out_size, 0.0L);
  std::vector<std::size_t> digit(scope.size(), 0);
  std::vector<const long double*> row(nf);
  std::vector<long double> prod(k);
  for (std::size_t o = 0; o < out_size; ++o) {
    for (std::size_t fi = 0; fi < nf; ++fi) {
      std::size_t b = 0;
      for (std::size_t s = 0; s < scope.size(); ++s) b += digit[s] * stride[fi][s];
      row[fi] = tabs[fi].data() + b;
    }
    for (std::size_t i = 0; i < k; ++i) prod[i] = measures[i];
    for (std::size_t fi = 0; fi < nf; ++fi)
      for (std::size_t i = 0; i < k; ++i) prod[i] *= row[fi][i];
    // Plain extended-precision sum: k terms lose at most k ulps of a 64-bit
    // mantissa, far below double resolution for any feasible k.
    long double acc = 0.0L;
    for (std::size_t i = 0; i < k; ++i) acc += prod[i];
    out.table[o] = acc;
    for (std::size_t s = scope.size(); s-- > 0;) {
      if (++digit[s] < k) break;
      digit[s] = 0;
    }
  }
  return out;
}

long double contract(const std::vector<EdgeTerm>& edges, std::span<const int> order,
                     std::span<const double> measures) {
  std::vector<Factor> factors;
  factors.reserve(edges.size());
  for (const auto& e : edges) factors.push_back(edge_factor(e));
  std::vector<Factor> scalars;
  for (int v : order) {
    Factor f = eliminate(v, factors, measures);
    if (f.vars.empty())
      scalars.push_back(std::move(f));
    else
      factors.push_back(std::move(f));
  }
  long double result = 1.0L;
  for (const auto& f : scalars) result *= f.table[0];
  return result;
}

// Min-fill greedy on the interaction graph.
EliminationPlan greedy_plan(const Graph& h) {
  const int n = h.vertex_count();
  std::vector<std::set<int>> nb(n);
  for (const Edge& e : h.edges()) {
    nb[e.u].insert(e.v);
    nb[e.v].insert(e.u);
  }
  std::vector<bool> done(n, false);
  EliminationPlan plan;
  for (int step = 0; step < n; ++step) {
    int best = -1;
    long best_fill = 0;
    std::size_t best_deg = 0;
    for (int v = 0; v < n; ++v) {
      if (done[v]) continue;
      long fill = 0;
      for (auto a = nb[v].begin(); a != nb[v].end(); ++a)
        for (auto b = std::next(a); b != nb[v].end(); ++b)
          if (!nb[*a].count(*b)) ++fill;
      if (best < 0 || fill < best_fill || (fill == best_fill && nb[v].size() < best_deg)) {
        best = v;
        best_fill = fill;
        best_deg = nb[v].size();
      }
    }
    plan.order.push_back(best);
    plan.width = std::max(plan.width, static_cast<int>(nb[best].size()));
    for (int a : nb[best])
      for (int b : nb[best])
        if (a != b) nb[a].insert(b);
    for (int a : nb[best]) nb[a].erase(best);
    nb[best].clear();
    done[best] = true;
  }
  return plan;
}

void require_enumerable(const Graph& h, std::span<const double> measures) {
  const double assignments = std::pow(static_cast<double>(measures.size()), h.vertex_count());
  if (assignments > 1e8)
    throw DensityError("brute-force density would enumerate more than 1e8 assignments");
}

long double bruteforce(const Graph& h, const std::vector<EdgeTerm>& edges,
                       std::span<const double> measures) {
  require_enumerable(h, measures);
  const int n = h.vertex_count();
  const std::size_t k = measures.size();
  std::vector<std::size_t> phi(n, 0);
  CompensatedSum acc;
  for (;;) {
    long double term = 1.0L;
    for (int v = 0; v < n; ++v) term *= measures[phi[v]];
    for (const auto& e : edges) term *= e.kernel->value(static_cast<int>(phi[e.u]), static_cast<int>(phi[e.v]));
    acc.add(term);
    int v = n - 1;
    for (; v >= 0; --v) {
      if (++phi[v] < k) break;
      phi[v] = 0;
    }
    if (v < 0) break;
  }
  return acc.value();
}

std::vector<EdgeTerm> uniform_terms(const Graph& h, const StepKernel& w) {
  std::vector<EdgeTerm> t;
  for (const Edge& e : h.edges()) t.push_back({e.u, e.v, &w});
  return t;
}

std::vector<EdgeTerm> decorated_terms(const Decoration& d) {
  std::vector<EdgeTerm> t;
  const auto& edges = d.host().edges();
  for (std::size_t i = 0; i < edges.size(); ++i) t.push_back({edges[i].u, edges[i].v, &d.kernel(static_cast<int>(i))});
  return t;
}

// Evaluates each connected component separately and multiplies.
double by_components(const Graph& h, const std::vector<EdgeTerm>& terms, std::span<const double> measures) {
  long double result = 1.0L;
  for (const auto& comp : components(h)) {
    if (comp.singleton) continue;
    std::vector<int> local(h.vertex_count(), -1);
    for (int i = 0; i < static_cast<int>(comp.vertices.size()); ++i) local[comp.vertices[i]] = i;
    std::vector<EdgeTerm> sub;
    for (const auto& t : terms)
      if (local[t.u] >= 0) sub.push_back({local[t.u], local[t.v], t.kernel});
    const auto plan = greedy_plan(comp.graph);
    result *= contract(sub, plan.order, measures);
    if (result == 0.0L) break;
  }
  return static_cast<double>(result);
}

}  // namespace

Decoration::Decoration(Graph host, std::vector<StepKernel> kernels)
    : host_(std::move(host)), kernels_(std::move(kernels)) {
  if (static_cast<int>(kernels_.size()) != host_.edge_count())
    throw DensityError("decoration needs exactly one kernel per edge");
  if (kernels_.empty()) throw DensityError("decoration of an edgeless graph carries no partition");
  for (const auto& k : kernels_)
    if (!k.same_partition(kernels_.front()))
      throw DensityError("decoration kernels must share one partition; use common_refinement");
}

Decoration Decoration::uniform(Graph host, const StepKernel& w) {
  std::vector<StepKernel> ks(host.edge_count(), w);
  return Decoration(std::move(host), std::move(ks));
}

EliminationPlan elimination_plan(const Graph& h) { return greedy_plan(h); }

int induced_width(const Graph& h, std::span<const int> order) {
  const int n = h.vertex_count();
  std::vector<int> seen(n, 0);
  if (static_cast<int>(order.size()) != n) throw DensityError("elimination order must be a permutation");
  for (int v : order) {
    if (v < 0 || v >= n || seen[v]++) throw DensityError("elimination order must be a permutation");
  }
  std::vector<std::set<int>> nb(n);
  for (const Edge& e : h.edges()) {
    nb[e.u].insert(e.v);
    nb[e.v].insert(e.u);
  }
  int width = 0;
  for (int v : order) {
    width = std::max(width, static_cast<int>(nb[v].size()));
    for (int a : nb[v])
      for (int b : nb[v])
        if (a != b) nb[a].insert(b);
    for (int a : nb[v]) nb[a].erase(v);
    nb[v].clear();
  }
  return width;
}

double density(const Graph& h, const StepKernel& w) {
  return by_components(h, uniform_terms(h, w), w.measures());
}

double density(const Graph& h, const StepKernel& w, const EliminationPlan& plan) {
  induced_width(h, plan.order);  // validates the permutation
  return static_cast<double>(contract(uniform_terms(h, w), plan.order, w.measures()));
}

double decorated_density(const Decoration& d) {
  return by_components(d.host(), decorated_terms(d), d.measures());
}

double density_bruteforce(const Graph& h, const StepKernel& w) {
  return static_cast<double>(bruteforce(h, uniform_terms(h, w), w.measures()));
}

double decorated_density_bruteforce(const Decoration& d) {
  return static_cast<double>(bruteforce(d.host(), decorated_terms(d), d.measures()));
}

double norm_h(const Graph& h, const StepKernel& w) {
  if (h.edge_count() == 0) throw DensityError("graph norm of an edgeless graph is undefined");
  return std::pow(std::abs(density(h, w)), 1.0 / h.edge_count());
}

double norm_rh(const Graph& h, const StepKernel& w) {
  if (h.edge_count() == 0) throw DensityError("graph norm of an edgeless graph is undefined");
  return std::pow(density(h, abs(w)), 1.0 / h.edge_count());
}

}  // namespace graphnorm
