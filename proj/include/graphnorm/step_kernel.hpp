#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

namespace graphnorm {

class KernelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Symmetric step function on a finite partition of a probability space.
// values() is the k x k row-major matrix of block constants; it is symmetric
// exactly, and every kernel is immutable once built.
class StepKernel {
 public:
  // Validates: k >= 1, measures > 0 summing to 1 within 1e-12, the matrix
  // is k x k, finite, and exactly symmetric.
  StepKernel(std::vector<double> measures, std::vector<double> values);

  // Builds a kernel from the upper triangle: block(i, j) is called for
  // i <= j only and mirrored, so the result is symmetric by construction.
  static StepKernel from_upper(std::vector<double> measures,
                               const std::function<double(int, int)>& block);

  int parts() const { return static_cast<int>(measures_.size()); }
  std::span<const double> measures() const { return measures_; }
  std::span<const double> values() const { return values_; }
  double value(int i, int j) const { return values_[static_cast<std::size_t>(i) * parts() + j]; }

  bool same_partition(const StepKernel& other) const { return measures_ == other.measures_; }
  bool is_nonnegative() const;
  // Values in [0, 1].
  bool is_graphon() const;

  friend bool operator==(const StepKernel&, const StepKernel&) = default;

 private:
  std::vector<double> measures_;
  std::vector<double> values_;
};

// Finitely supported distribution on [0, 1].
class DiracMixture {
 public:
  struct Atom {
    double value;
    double probability;
  };

  explicit DiracMixture(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  double mean() const;
  // Inverse-CDF lookup for u in [0, 1).
  double quantile(double u) const;

 private:
  std::vector<Atom> atoms_;
};

DiracMixture dirac(double p);
// 1/2 at 0 and 1.
DiracMixture dirac_d1();
// 1/4, 1/2, 1/4 at 0, 1/2, 1.
DiracMixture dirac_d2();
// Uniform on {0, eps, 1 - eps, 1}; eps in (0, 1).
DiracMixture dirac_d3(double eps);
// Uniform on {0, eps/2, 1/2, (1 + eps)/2}; eps in (0, 1).
DiracMixture dirac_d4(double eps);

StepKernel constant_kernel(double p);
// Constant p on the partition given by measures.
StepKernel constant_kernel_on(std::span<const double> measures, double p);
// 1 on X x X with the measure of X equal to 1/2, 0 elsewhere.
StepKernel half_square_kernel();

struct SpecialKernelSpec {
  double gamma = 1.0;
  std::vector<double> a;  // truncation depth N = a.size()
};

// Dyadic diagonal kernel: part i = 1..N has measure 2^-i and diagonal value
// 2^(i gamma) a_i; the remainder part of measure 2^-N is zero. Off-diagonal
// blocks are zero. For connected F with m edges and gamma = v(F)/e(F),
// t(F, |kernel|) = sum_i |a_i|^m; the dropped tail sum_{i>N} |a_i|^m is the
// truncation error.
StepKernel special_kernel(const SpecialKernelSpec& spec);

// n parts of measure 1/n; block (i, j), i <= j, is d.quantile(u) for a
// uniform u keyed by (seed, i, j) alone, so the kernel does not depend on
// the visiting order.
StepKernel sample_block_random(int n, const DiracMixture& d, std::uint64_t seed);

// Entrywise operations. Binary forms need identical partitions and throw
// otherwise; see common_refinement.
StepKernel add(const StepKernel& a, const StepKernel& b);
StepKernel subtract(const StepKernel& a, const StepKernel& b);
StepKernel scale(const StepKernel& a, double c);
StepKernel abs(const StepKernel& a);
// alpha a + beta b
StepKernel combine(double alpha, const StepKernel& a, double beta, const StepKernel& b);
// c - a, e.g. 1 - U for a graphon U.
StepKernel complement(const StepKernel& a, double c = 1.0);

// Both kernels pulled back to the product partition {(i, j)} with measure
// mu_i * mu'_j, part (i, j) at index i * b.parts() + j. Densities of each
// kernel are unchanged.
std::pair<StepKernel, StepKernel> common_refinement(const StepKernel& a, const StepKernel& b);

// Moves part perm[i] of the input to position i.
StepKernel permute_parts(const StepKernel& a, std::span<const int> perm);

// {"measures": [...], "values": [[...], ...]}; symmetry is checked on load.
nlohmann::json kernel_to_json(const StepKernel& k);
StepKernel kernel_from_json(const nlohmann::json& j);

}  // namespace graphnorm
