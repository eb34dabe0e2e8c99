#include "graphnorm/step_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphnorm/rng.hpp"

namespace graphnorm {

namespace {

constexpr double kMeasureTolerance = 1e-12;

void require_same_partition(const StepKernel& a, const StepKernel& b) {
  if (!a.same_partition(b))
    throw KernelError(
        "kernels live on different partitions; bring them to one with common_refinement first");
}

template <typename F>
StepKernel map_values(const StepKernel& a, F f) {
  std::vector<double> v(a.values().begin(), a.values().end());
  for (double& x : v) x = f(x);
  return StepKernel({a.measures().begin(), a.measures().end()}, std::move(v));
}

template <typename F>
StepKernel zip_values(const StepKernel& a, const StepKernel& b, F f) {
  require_same_partition(a, b);
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(a.values()[i], b.values()[i]);
  return StepKernel({a.measures().begin(), a.measures().end()}, std::move(v));
}

}  // namespace

StepKernel::StepKernel(std::vector<double> measures, std::vector<double> values)
    : measures_(std::move(measures)), values_(std::move(values)) {
  const std::size_t k = measures_.size();
  if (k == 0) throw KernelError("kernel needs at least one part");
  double total = 0.0;
  for (double m : measures_) {
    if (!std::isfinite(m) || m <= 0.0) throw KernelError("part measures must be positive");
    total += m;
  }
  if (std::abs(total - 1.0) > kMeasureTolerance)
    throw KernelError("part measures sum to " + std::to_string(total) + ", not 1");
  if (values_.size() != k * k) throw KernelError("value matrix must be parts x parts");
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const double x = values_[i * k + j];
      if (!std::isfinite(x)) throw KernelError("kernel values must be finite");
      if (j > i && x != values_[j * k + i])
        throw KernelError("value matrix is not symmetric at (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
    }
}

StepKernel StepKernel::from_upper(std::vector<double> measures,
                                  const std::function<double(int, int)>& block) {
  const int k = static_cast<int>(measures.size());
  std::vector<double> v(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      const double x = block(i, j);
      v[static_cast<std::size_t>(i) * k + j] = x;
      v[static_cast<std::size_t>(j) * k + i] = x;
    }
  return StepKernel(std::move(measures), std::move(v));
}

bool StepKernel::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0; });
}

bool StepKernel::is_graphon() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return x >= 0.0 && x <= 1.0; });
}

// ---------------------------------------------------------------------------

DiracMixture::DiracMixture(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw KernelError("distribution needs at least one atom");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (!(a.probability > 0.0)) throw KernelError("atom probabilities must be positive");
    if (!(a.value >= 0.0 && a.value <= 1.0)) throw KernelError("atom values must lie in [0, 1]");
    total += a.probability;
  }
  if (std::abs(total - 1.0) > kMeasureTolerance) throw KernelError("atom probabilities must sum to 1");
}

double DiracMixture::mean() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.value * a.probability;
  return m;
}

double DiracMixture::quantile(double u) const {
  double acc = 0.0;
  for (const Atom& a : atoms_) {
    acc += a.probability;
    if (u < acc) return a.value;
  }
  return atoms_.back().value;
}

DiracMixture dirac(double p) { return DiracMixture({{p, 1.0}}); }

DiracMixture dirac_d1() { return DiracMixture({{0.0, 0.5}, {1.0, 0.5}}); }

DiracMixture dirac_d2() { return DiracMixture({{0.0, 0.25}, {0.5, 0.5}, {1.0, 0.25}}); }

namespace {
void require_open_unit(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw KernelError("epsilon must lie in (0, 1)");
}
}  // namespace

DiracMixture dirac_d3(double eps) {
  require_open_unit(eps);
  return DiracMixture({{0.0, 0.25}, {eps, 0.25}, {1.0 - eps, 0.25}, {1.0, 0.25}});
}

DiracMixture dirac_d4(double eps) {
  require_open_unit(eps);
  return DiracMixture({{0.0, 0.25}, {eps / 2.0, 0.25}, {0.5, 0.25}, {(1.0 + eps) / 2.0, 0.25}});
}

// ---------------------------------------------------------------------------

StepKernel constant_kernel(double p) { return StepKernel({1.0}, {p}); }

StepKernel constant_kernel_on(std::span<const double> measures, double p) {
  return StepKernel({measures.begin(), measures.end()},
                    std::vector<double>(measures.size() * measures.size(), p));
}

StepKernel half_square_kernel() { return StepKernel({0.5, 0.5}, {1.0, 0.0, 0.0, 0.0}); }

StepKernel special_kernel(const SpecialKernelSpec& spec) {
  const int n = static_cast<int>(spec.a.size());
  if (n < 1) throw KernelError("special kernel needs at least one coefficient");
  if (n > 60) throw KernelError("special kernel truncation depth above 60 underflows the dyadic parts");
  if (!(spec.gamma > 0.0) || !std::isfinite(spec.gamma)) throw KernelError("gamma must be positive");
  std::vector<double> measures(n + 1);
  for (int i = 1; i <= n; ++i) measures[i - 1] = std::ldexp(1.0, -i);
  measures[n] = std::ldexp(1.0, -n);
  return StepKernel::from_upper(std::move(measures), [&](int i, int j) {
    if (i != j || i == n) return 0.0;
    const double x = std::exp2((i + 1) * spec.gamma) * spec.a[i];
    if (!std::isfinite(x)) throw KernelError("special kernel value overflows");
    return x;
  });
}

StepKernel sample_block_random(int n, const DiracMixture& d, std::uint64_t seed) {
  if (n < 1) throw KernelError("block-random kernel needs n >= 1");
  std::vector<double> measures(n, 1.0 / n);
  return StepKernel::from_upper(std::move(measures), [&](int i, int j) {
    return d.quantile(to_unit(derive_seed(seed, {static_cast<std::uint64_t>(i),
                                                 static_cast<std::uint64_t>(j)})));
  });
}

StepKernel add(const StepKernel& a, const StepKernel& b) {
  return zip_values(a, b, [](double x, double y) { return x + y; });
}

StepKernel subtract(const StepKernel& a, const StepKernel& b) {
  return zip_values(a, b, [](double x, double y) { return x - y; });
}

StepKernel scale(const StepKernel& a, double c) {
  return map_values(a, [c](double x) { return c * x; });
}

StepKernel abs(const StepKernel& a) {
  return map_values(a, [](double x) { return std::abs(x); });
}

StepKernel combine(double alpha, const StepKernel& a, double beta, const StepKernel& b) {
  return zip_values(a, b, [=](double x, double y) { return alpha * x + beta * y; });
}

StepKernel complement(const StepKernel& a, double c) {
  return map_values(a, [c](double x) { return c - x; });
}

std::pair<StepKernel, StepKernel> common_refinement(const StepKernel& a, const StepKernel& b) {
  const int ka = a.parts();
  const int kb = b.parts();
  std::vector<double> measures;
  measures.reserve(static_cast<std::size_t>(ka) * kb);
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j) measures.push_back(a.measures()[i] * b.measures()[j]);
  auto lifted_a = StepKernel::from_upper(measures, [&](int p, int q) { return a.value(p / kb, q / kb); });
  auto lifted_b = StepKernel::from_upper(measures, [&](int p, int q) { return b.value(p % kb, q % kb); });
  return {std::move(lifted_a), std::move(lifted_b)};
}

StepKernel permute_parts(const StepKernel& a, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != a.parts()) throw KernelError("permutation size mismatch");
  std::vector<double> measures(a.parts());
  for (int i = 0; i < a.parts(); ++i) measures[i] = a.measures()[perm[i]];
  return StepKernel::from_upper(std::move(measures), [&](int i, int j) { return a.value(perm[i], perm[j]); });
}

nlohmann::json kernel_to_json(const StepKernel& k) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < k.parts(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < k.parts(); ++j) row.push_back(k.value(i, j));
    rows.push_back(std::move(row));
  }
  return {{"measures", std::vector<double>(k.measures().begin(), k.measures().end())},
          {"values", std::move(rows)}};
}

StepKernel kernel_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("measures") || !j.contains("values"))
    throw KernelError("kernel JSON needs \"measures\" and \"values\"");
  const auto& jm = j["measures"];
  const auto& jv = j["values"];
  if (!jm.is_array() || !jv.is_array()) throw KernelError("\"measures\" and \"values\" must be arrays");
  std::vector<double> measures;
  for (const auto& x : jm) {
    if (!x.is_number()) throw KernelError("measures must be numbers");
    measures.push_back(x.get<double>());
  }
  const std::size_t k = measures.size();
  if (jv.size() != k) throw KernelError("values must have one row per part");
  std::vector<double> values;
  values.reserve(k * k);
  for (const auto& row : jv) {
    if (!row.is_array() || row.size() != k) throw KernelError("values must be a square matrix");
    for (const auto& x : row) {
      if (!x.is_number()) throw KernelError("values must be numbers");
      values.push_back(x.get<double>());
    }
  }
  return StepKernel(std::move(measures), std::move(values));
}

}  // namespace graphnorm
