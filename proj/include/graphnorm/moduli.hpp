#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphnorm/graph.hpp"
#include "graphnorm/step_kernel.hpp"
#include "json.hpp"

namespace graphnorm {

class ModuliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModulusKind { convexity, smoothness };
std::string to_string(ModulusKind k);  // "convexity-upper-bound" / "smoothness-lower-bound"
ModulusKind parse_modulus_kind(const std::string& s);  // accepts "convexity" / "smoothness"

// One-sided witness for a modulus of the norm t(h, |.|)^(1/e(h)).
//
// Both kinds sample U1, U2 from the block-random model with the {0, 1}
// fair-coin distribution on n equal parts and normalize x = U1/||U1||,
// u = U2/||U2||.
//   convexity:  value = 1 - ||(x + y)/2|| with y = u; separation = ||x - y||.
//   smoothness: value = (||x + eps u|| + ||x - eps u|| - 2)/2; separation = eps.
struct ModulusEstimate {
  ModulusKind kind = ModulusKind::convexity;
  double epsilon = 0.0;
  double value = 0.0;
  double separation = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  int attempts = 1;  // resamples needed because a sampled U had norm 0
  StepKernel u1 = constant_kernel(0.0);
  StepKernel u2 = constant_kernel(0.0);
  double norm_u1 = 0.0;
  double norm_u2 = 0.0;
};

// Norm ||w||_{r(h)} = t(h, |w|)^(1/e(h)).
double weak_norm(const Graph& h, const StepKernel& w);

// Seeds for attempt k: derive_seed(seed, {1, k}) and derive_seed(seed, {2, k}).
// Retries up to kMaxAttempts times when a norm vanishes, then throws.
inline constexpr int kMaxAttempts = 16;
ModulusEstimate convexity_witness(const Graph& h, double epsilon, int n, std::uint64_t seed);
ModulusEstimate smoothness_witness(const Graph& h, double epsilon, int n, std::uint64_t seed);

// Same formulas on caller-supplied kernels (shared partition, non-zero norm).
ModulusEstimate convexity_from(const Graph& h, double epsilon, const StepKernel& u1, const StepKernel& u2);
ModulusEstimate smoothness_from(const Graph& h, double epsilon, const StepKernel& u1, const StepKernel& u2);

// Recomputes value from the stored kernels alone.
double reevaluate(const ModulusEstimate& e, const Graph& h);

struct DeviationStats {
  int n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q90 = 0.0;
  double max = 0.0;
  std::vector<double> samples;  // per-trial values in trial order
};

DeviationStats summarize(int n, std::vector<double> samples);

struct ExperimentRecord {
  std::string h;  // edge-list or name used for reporting
  std::string quantity;
  double target = 0.0;
  std::vector<int> n_grid;  // strictly increasing
  std::vector<DeviationStats> stats;
  double tolerance = 0.1;     // absolute bound on the median at the largest n
  bool monotone = false;      // medians strictly decrease along the grid
  bool within_tolerance = false;
  bool pass() const { return monotone && within_tolerance; }
};

// |t(h, U) - mean(d)^e(h)| for U drawn per trial from derive_seed(seed, {n, trial}).
DeviationStats concentration_check(const Graph& h, int n, const DiracMixture& d, int trials, std::uint64_t seed);
// Over a strictly increasing n-grid, with the median trend and tolerance verdict.
ExperimentRecord concentration_scan(const Graph& h, const std::vector<int>& n_grid, const DiracMixture& d,
                                    int trials, std::uint64_t seed, double tolerance);

// Median of a modulus witness over seeds for each n; convexity tracks the
// midpoint deficiency (target 0), smoothness the distance to eps/2.
ExperimentRecord modulus_trend(const Graph& h, ModulusKind kind, double epsilon, const std::vector<int>& n_grid,
                               const std::vector<std::uint64_t>& seeds, double tolerance);

struct EmbeddingReport {
  double gamma = 0.0;       // v(h)/e(h) of the connected graph
  double density = 0.0;     // t(h, W_{gamma, a})
  double power_sum = 0.0;   // sum_i a_i^e(h)
  double rel_error = 0.0;
  bool holds = false;       // rel_error <= 1e-10
  // Contrast on h + h with the same kernel against sum_i a_i^(2 e(h)).
  double contrast_density = 0.0;
  double contrast_power_sum = 0.0;
};

// Throws ModuliError for disconnected h or h with isolated vertices.
EmbeddingReport lp_embedding_check(const Graph& h, const std::vector<double>& a);

// Row-major over eps, then n, then seed. eps outside (0, 1) throws.
std::vector<ModulusEstimate> modulus_scan(const Graph& h, ModulusKind kind, const std::vector<double>& eps_grid,
                                          const std::vector<int>& n_grid, const std::vector<std::uint64_t>& seeds);

// Columns h,kind,epsilon,n,seed,value; numbers with 12 significant digits.
std::string scan_to_csv(const std::string& h_label, const std::vector<ModulusEstimate>& rows);
nlohmann::json estimate_to_json(const ModulusEstimate& e, bool with_witnesses);

}  // namespace graphnorm
