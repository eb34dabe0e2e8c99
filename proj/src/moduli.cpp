#include "graphnorm/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "graphnorm/density.hpp"
#include "graphnorm/rng.hpp"

namespace graphnorm {

namespace {

void require_edges(const Graph& h) {
  if (h.edge_count() == 0) throw ModuliError("graph needs at least one edge");
}

void require_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw ModuliError("epsilon must lie in (0, 1), the range covered by the theorem; got " +
                      std::to_string(eps));
}

template <typename Witness>
ModulusEstimate sample_witness(const Graph& h, double epsilon, int n, std::uint64_t seed, Witness witness) {
  require_edges(h);
  require_epsilon(epsilon);
  if (n < 1) throw ModuliError("n must be positive");
  const DiracMixture coin = dirac_d1();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const auto k = static_cast<std::uint64_t>(attempt);
    StepKernel u1 = sample_block_random(n, coin, derive_seed(seed, {1, k}));
    StepKernel u2 = sample_block_random(n, coin, derive_seed(seed, {2, k}));
    if (weak_norm(h, u1) == 0.0 || weak_norm(h, u2) == 0.0) continue;
    ModulusEstimate e = witness(h, epsilon, u1, u2);
    e.n = n;
    e.seed = seed;
    e.attempts = attempt + 1;
    return e;
  }
  throw ModuliError("sampled kernels kept a zero norm after " + std::to_string(kMaxAttempts) + " attempts");
}

struct Normalized {
  StepKernel x;
  StepKernel u;
  double n1;
  double n2;
};

Normalized normalize(const Graph& h, const StepKernel& u1, const StepKernel& u2) {
  require_edges(h);
  if (!u1.same_partition(u2)) throw ModuliError("witness kernels must share one partition");
  const double n1 = weak_norm(h, u1);
  const double n2 = weak_norm(h, u2);
  if (n1 == 0.0 || n2 == 0.0) throw ModuliError("witness kernel has norm 0");
  return {scale(u1, 1.0 / n1), scale(u2, 1.0 / n2), n1, n2};
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

void finish_record(ExperimentRecord& r) {
  r.monotone = true;
  for (std::size_t i = 1; i < r.stats.size(); ++i)
    if (!(r.stats[i].median < r.stats[i - 1].median)) r.monotone = false;
  r.within_tolerance = !r.stats.empty() && r.stats.back().median <= r.tolerance;
}

void require_grid(const std::vector<int>& grid) {
  if (grid.empty()) throw ModuliError("n-grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw ModuliError("n-grid entries must be positive");
    if (i > 0 && grid[i] <= grid[i - 1]) throw ModuliError("n-grid must be strictly increasing");
  }
}

// RFC 4180 quoting for fields holding commas or quotes.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fmt12(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

}  // namespace

std::string to_string(ModulusKind k) {
  return k == ModulusKind::convexity ? "convexity-upper-bound" : "smoothness-lower-bound";
}

ModulusKind parse_modulus_kind(const std::string& s) {
  if (s == "convexity" || s == "convexity-upper-bound") return ModulusKind::convexity;
  if (s == "smoothness" || s == "smoothness-lower-bound") return ModulusKind::smoothness;
  throw ModuliError("kind must be 'convexity' or 'smoothness', got '" + s + "'");
}

double weak_norm(const Graph& h, const StepKernel& w) { return norm_rh(h, w); }

ModulusEstimate convexity_from(const Graph& h, double epsilon, const StepKernel& u1, const StepKernel& u2) {
  const Normalized v = normalize(h, u1, u2);
  ModulusEstimate e;
  e.kind = ModulusKind::convexity;
  e.epsilon = epsilon;
  e.separation = weak_norm(h, subtract(v.x, v.u));
  e.value = 1.0 - weak_norm(h, combine(0.5, v.x, 0.5, v.u));
  e.u1 = u1;
  e.u2 = u2;
  e.norm_u1 = v.n1;
  e.norm_u2 = v.n2;
  return e;
}

ModulusEstimate smoothness_from(const Graph& h, double epsilon, const StepKernel& u1, const StepKernel& u2) {
  const Normalized v = normalize(h, u1, u2);
  ModulusEstimate e;
  e.kind = ModulusKind::smoothness;
  e.epsilon = epsilon;
  e.separation = epsilon;
  e.value = 0.5 * (weak_norm(h, combine(1.0, v.x, epsilon, v.u)) +
                   weak_norm(h, combine(1.0, v.x, -epsilon, v.u)) - 2.0);
  e.u1 = u1;
  e.u2 = u2;
  e.norm_u1 = v.n1;
  e.norm_u2 = v.n2;
  return e;
}

ModulusEstimate convexity_witness(const Graph& h, double epsilon, int n, std::uint64_t seed) {
  return sample_witness(h, epsilon, n, seed, convexity_from);
}

ModulusEstimate smoothness_witness(const Graph& h, double epsilon, int n, std::uint64_t seed) {
  return sample_witness(h, epsilon, n, seed, smoothness_from);
}

double reevaluate(const ModulusEstimate& e, const Graph& h) {
  return e.kind == ModulusKind::convexity ? convexity_from(h, e.epsilon, e.u1, e.u2).value
                                          : smoothness_from(h, e.epsilon, e.u1, e.u2).value;
}

DeviationStats summarize(int n, std::vector<double> samples) {
  if (samples.empty()) throw ModuliError("no samples to summarize");
  DeviationStats s;
  s.n = n;
  s.samples = samples;
  std::sort(samples.begin(), samples.end());
  double total = 0.0;
  for (double x : samples) total += x;
  s.mean = total / samples.size();
  s.median = median_of(samples);
  // Nearest-rank quantile.
  const auto rank = static_cast<std::size_t>(std::ceil(0.9 * samples.size()));
  s.q90 = samples[std::max<std::size_t>(rank, 1) - 1];
  s.max = samples.back();
  return s;
}

DeviationStats concentration_check(const Graph& h, int n, const DiracMixture& d, int trials, std::uint64_t seed) {
  require_edges(h);
  if (trials < 1) throw ModuliError("trials must be positive");
  if (n < 1) throw ModuliError("n must be positive");
  const double target = std::pow(d.mean(), h.edge_count());
  std::vector<double> dev;
  dev.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const StepKernel u =
        sample_block_random(n, d, derive_seed(seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t)}));
    dev.push_back(std::abs(density(h, u) - target));
  }
  return summarize(n, std::move(dev));
}

ExperimentRecord concentration_scan(const Graph& h, const std::vector<int>& n_grid, const DiracMixture& d,
                                    int trials, std::uint64_t seed, double tolerance) {
  require_grid(n_grid);
  ExperimentRecord r;
  r.h = to_edge_list(h);
  r.quantity = "|t(h,U) - mean^e(h)|";
  r.target = std::pow(d.mean(), h.edge_count());
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  for (int n : n_grid) r.stats.push_back(concentration_check(h, n, d, trials, seed));
  finish_record(r);
  return r;
}

ExperimentRecord modulus_trend(const Graph& h, ModulusKind kind, double epsilon, const std::vector<int>& n_grid,
                               const std::vector<std::uint64_t>& seeds, double tolerance) {
  require_grid(n_grid);
  if (seeds.empty()) throw ModuliError("seed list is empty");
  ExperimentRecord r;
  r.h = to_edge_list(h);
  r.n_grid = n_grid;
  r.tolerance = tolerance;
  r.quantity = kind == ModulusKind::convexity ? "midpoint deficiency" : "|witness - eps/2|";
  r.target = 0.0;
  for (int n : n_grid) {
    std::vector<double> v;
    for (std::uint64_t s : seeds) {
      if (kind == ModulusKind::convexity)
        v.push_back(convexity_witness(h, epsilon, n, s).value);
      else
        v.push_back(std::abs(smoothness_witness(h, epsilon, n, s).value - epsilon / 2.0));
    }
    r.stats.push_back(summarize(n, std::move(v)));
  }
  finish_record(r);
  return r;
}

EmbeddingReport lp_embedding_check(const Graph& h, const std::vector<double>& a) {
  require_edges(h);
  if (!is_connected(h))
    throw ModuliError("the embedding identity needs a connected graph; the H + H contrast is reported "
                      "alongside every connected check");
  for (int d : h.degrees())
    if (d == 0) throw ModuliError("graph has isolated vertices");
  if (a.empty()) throw ModuliError("coefficient vector is empty");
  for (double x : a)
    if (x < 0.0) throw ModuliError("coefficients must be non-negative");

  EmbeddingReport r;
  const int v = h.vertex_count();
  const int m = h.edge_count();
  r.gamma = static_cast<double>(v) / m;
  const StepKernel w = special_kernel({r.gamma, a});
  r.density = density(h, w);
  for (double x : a) {
    r.power_sum += std::pow(x, m);
    r.contrast_power_sum += std::pow(x, 2 * m);
  }
  const double scale_ = std::max(std::abs(r.density), std::abs(r.power_sum));
  r.rel_error = scale_ == 0.0 ? 0.0 : std::abs(r.density - r.power_sum) / scale_;
  r.holds = r.rel_error <= 1e-10;
  r.contrast_density = density(disjoint_copies(h, 2), w);
  return r;
}

std::vector<ModulusEstimate> modulus_scan(const Graph& h, ModulusKind kind, const std::vector<double>& eps_grid,
                                          const std::vector<int>& n_grid, const std::vector<std::uint64_t>& seeds) {
  require_grid(n_grid);
  for (double eps : eps_grid) require_epsilon(eps);
  std::vector<ModulusEstimate> out;
  for (double eps : eps_grid)
    for (int n : n_grid)
      for (std::uint64_t s : seeds)
        out.push_back(kind == ModulusKind::convexity ? convexity_witness(h, eps, n, s)
                                                     : smoothness_witness(h, eps, n, s));
  return out;
}

std::string scan_to_csv(const std::string& h_label, const std::vector<ModulusEstimate>& rows) {
  std::ostringstream os;
  os << "h,kind,epsilon,n,seed,value\n";
  for (const auto& e : rows)
    os << csv_field(h_label) << ',' << to_string(e.kind) << ',' << fmt12(e.epsilon) << ',' << e.n << ',' << e.seed << ','
       << fmt12(e.value) << '\n';
  return os.str();
}

nlohmann::json estimate_to_json(const ModulusEstimate& e, bool with_witnesses) {
  nlohmann::json j{{"kind", to_string(e.kind)},
                   {"epsilon", e.epsilon},
                   {"n", e.n},
                   {"seed", e.seed},
                   {"value", e.value},
                   {"separation", e.separation},
                   {"attempts", e.attempts}};
  if (with_witnesses) {
    j["witnesses"] = {{"u1", kernel_to_json(e.u1)},
                      {"u2", kernel_to_json(e.u2)},
                      {"norm_u1", e.norm_u1},
                      {"norm_u2", e.norm_u2}};
  }
  return j;
}

}  // namespace graphnorm
