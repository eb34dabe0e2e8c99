#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "graphnorm/graph.hpp"
#include "graphnorm/step_kernel.hpp"

namespace graphnorm {

class DensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One kernel per edge of the host, indexed like host.edges(); all kernels
// share one partition.
class Decoration {
 public:
  Decoration(Graph host, std::vector<StepKernel> kernels);
  static Decoration uniform(Graph host, const StepKernel& w);

  const Graph& host() const { return host_; }
  const std::vector<StepKernel>& kernels() const { return kernels_; }
  const StepKernel& kernel(int edge) const { return kernels_[edge]; }
  std::span<const double> measures() const { return kernels_.front().measures(); }

 private:
  Graph host_;
  std::vector<StepKernel> kernels_;
};

struct EliminationPlan {
  std::vector<int> order;  // permutation of the host's vertices
  int width = 0;           // largest neighbourhood met while eliminating
};

// Greedy min-fill order (ties: min degree, then smallest label).
EliminationPlan elimination_plan(const Graph& h);
// Width of an arbitrary order; throws if order is not a permutation.
int induced_width(const Graph& h, std::span<const int> order);

// Homomorphism density of h in w: the sum over part assignments phi of
// prod_v mu_phi(v) * prod_{uv} w(phi(u), phi(v)), computed by variable
// elimination per connected component. Isolated vertices contribute 1.
double density(const Graph& h, const StepKernel& w);
// Same sum contracted along the given order over the whole graph at once.
double density(const Graph& h, const StepKernel& w, const EliminationPlan& plan);
double decorated_density(const Decoration& d);

// Direct enumeration of all parts^v(h) assignments; the reference for the
// elimination engine. Throws DensityError above 1e8 assignments.
double density_bruteforce(const Graph& h, const StepKernel& w);
double decorated_density_bruteforce(const Decoration& d);

// |t(h, w)|^(1/e(h)) and t(h, |w|)^(1/e(h)); throw for edgeless h.
double norm_h(const Graph& h, const StepKernel& w);
double norm_rh(const Graph& h, const StepKernel& w);

}  // namespace graphnorm
