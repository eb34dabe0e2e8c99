#include "graphnorm/norming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "graphnorm/rng.hpp"

namespace graphnorm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// In semi mode a right-hand factor this small is treated as zero, and a
// left-hand density this small as indeterminate.
// Relative rounding band applied to every computed density.
constexpr double kRoundoff = 1e-12;

std::string rational_str(const Rational& r) {
  std::ostringstream os;
  os << r.numerator();
  if (r.denominator() != 1) os << "/" << r.denominator();
  return os.str();
}

std::string vertex_list(const std::vector<int>& vs) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < vs.size(); ++i) os << (i ? "," : "") << vs[i];
  os << "}";
  return os.str();
}

bool close_rel(double a, double b, double tol) {
  if (a == b) return true;
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// Host edge indices of a subgraph given by a vertex map local -> host.
std::vector<int> host_edge_indices(const Graph& host, const Graph& sub, const std::vector<int>& to_host) {
  std::vector<int> idx;
  for (const Edge& e : sub.edges()) {
    const int i = host.edge_index(to_host[e.u], to_host[e.v]);
    if (i < 0) throw NormingError("subgraph edge missing from host");
    idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

// `on` on the listed host edges, `off` on the others.
Decoration split_decoration(const Graph& host, const std::vector<int>& edges, const StepKernel& on,
                            const StepKernel& off) {
  std::vector<StepKernel> ks(host.edge_count(), off);
  for (int i : edges) ks[i] = on;
  return Decoration(host, std::move(ks));
}

// Half-square kernel on E(F), constant 1 elsewhere: compares
// 2^(-v(F) e(H)) with 2^(-v(H) e(F)).
Certificate avg_degree_certificate(const Graph& host, const Graph& f, const std::vector<int>& to_host,
                                   std::string note) {
  const StepKernel u = half_square_kernel();
  const StepKernel one = constant_kernel_on(u.measures(), 1.0);
  Certificate c;
  c.kind = CertificateKind::avg_degree_violation;
  c.mode = NormMode::weak;
  c.host = host;
  c.decoration = split_decoration(host, host_edge_indices(host, f, to_host), u, one);
  c.subgraph = f;
  const HolderReport r = holder_check(*c.decoration, NormMode::weak);
  c.lhs = r.lhs;
  c.rhs = r.rhs;
  c.note = std::move(note);
  return c;
}

std::vector<double> random_measures(SplitMix64Stream& rng, int k) {
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) total += (x = 0.2 + rng.uniform());
  for (double& x : w) x /= total;
  return w;
}

double random_value(SplitMix64Stream& rng, NormMode mode) {
  return mode == NormMode::weak ? rng.uniform() : rng.uniform(-1.0, 1.0);
}

StepKernel random_block(SplitMix64Stream& rng, const std::vector<double>& mu, NormMode mode) {
  return StepKernel::from_upper(mu, [&](int, int) { return random_value(rng, mode); });
}

enum Family { kBlock, kIndicator, kSquares, kDyadic, kRankOne, kFamilies };

const char* family_name(int f) {
  switch (f) {
    case kBlock: return "block-random";
    case kIndicator: return "indicator";
    case kSquares: return "half-square-like";
    case kDyadic: return "dyadic-diagonal";
    default: return "rank-one";
  }
}

Decoration random_decoration(const Graph& h, int family, NormMode mode, SplitMix64Stream& rng) {
  const int m = h.edge_count();
  std::vector<StepKernel> ks;
  ks.reserve(m);
  switch (family) {
    case kBlock: {
      const auto mu = random_measures(rng, 2 + rng.below(3));
      for (int e = 0; e < m; ++e) ks.push_back(random_block(rng, mu, mode));
      break;
    }
    case kIndicator: {
      const auto mu = random_measures(rng, 2 + rng.below(2));
      for (int e = 0; e < m; ++e)
        ks.push_back(StepKernel::from_upper(mu, [&](int, int) {
          const int r = rng.below(mode == NormMode::weak ? 2 : 3);
          return static_cast<double>(mode == NormMode::weak ? r : r - 1);
        }));
      break;
    }
    case kSquares: {
      const int k = 2 + rng.below(3);
      const auto mu = random_measures(rng, k);
      for (int e = 0; e < m; ++e) {
        if (rng.below(2) == 0) {
          ks.push_back(constant_kernel_on(mu, 1.0));
          continue;
        }
        std::vector<bool> in(k);
        for (int i = 0; i < k; ++i) in[i] = rng.below(2) == 1;
        in[rng.below(k)] = true;
        const double sign = (mode == NormMode::semi && rng.below(2) == 0) ? -1.0 : 1.0;
        ks.push_back(StepKernel::from_upper(mu, [&](int i, int j) { return in[i] && in[j] ? sign : 0.0; }));
      }
      break;
    }
    case kDyadic: {
      const auto comps = components(remove_isolated_vertices(h));
      const Graph& f = comps[rng.below(static_cast<int>(comps.size()))].graph;
      const double gamma = static_cast<double>(f.vertex_count()) / f.edge_count();
      const int n = 1 + rng.below(3);
      std::vector<double> mu;
      for (int e = 0; e < m; ++e) {
        if (rng.below(3) == 0 && !mu.empty()) {
          ks.push_back(constant_kernel_on(mu, 1.0));
          continue;
        }
        SpecialKernelSpec spec{gamma, std::vector<double>(n)};
        for (double& a : spec.a) {
          const int pick = rng.below(3);
          a = pick == 0 ? 0.0 : pick == 1 ? 1.0 : random_value(rng, mode);
        }
        StepKernel w = special_kernel(spec);
        if (mode == NormMode::weak) w = abs(w);
        if (mu.empty()) mu.assign(w.measures().begin(), w.measures().end());
        ks.push_back(std::move(w));
      }
      break;
    }
    default: {
      const int k = 2 + rng.below(3);
      const auto mu = random_measures(rng, k);
      for (int e = 0; e < m; ++e) {
        std::vector<double> f(k);
        for (double& x : f) x = random_value(rng, mode);
        ks.push_back(StepKernel::from_upper(mu, [&](int i, int j) { return f[i] * f[j]; }));
      }
      break;
    }
  }
  return Decoration(h, std::move(ks));
}

// One symmetric entry of one edge kernel redrawn.
Decoration perturb(const Decoration& d, NormMode mode, SplitMix64Stream& rng) {
  std::vector<StepKernel> ks = d.kernels();
  const int e = rng.below(static_cast<int>(ks.size()));
  const StepKernel& w = ks[e];
  const int k = w.parts();
  const int i = rng.below(k);
  const int j = rng.below(k);
  const double fresh = random_value(rng, mode);
  ks[e] = StepKernel::from_upper({w.measures().begin(), w.measures().end()}, [&](int a, int b) {
    return (a == std::min(i, j) && b == std::max(i, j)) ? fresh : w.value(a, b);
  });
  return Decoration(d.host(), std::move(ks));
}

// Max over components of t(F_i, U) against t(H, U)^(e(F_max)/e(H)).
DominationReport component_domination(const Graph& host, const StepKernel& u) {
  const auto comps = components(host);
  DominationReport r;
  int best_edges = 0;
  bool first = true;
  for (const auto& c : comps) {
    if (c.singleton) continue;
    const double t = density(c.graph, u);
    if (first || t > r.lhs) {
      r.lhs = t;
      best_edges = c.graph.edge_count();
      first = false;
    }
  }
  r.rhs = std::pow(density(host, u), static_cast<double>(best_edges) / host.edge_count());
  r.violated = r.lhs > r.rhs * (1.0 + kValidationMargin);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

HolderReport holder_check(const Decoration& d, NormMode mode) {
  if (mode == NormMode::weak)
    for (const auto& k : d.kernels())
      if (!k.is_nonnegative()) throw NormingError("weak mode needs non-negative kernels");
  const Graph& h = d.host();
  const int e = h.edge_count();
  const double t = decorated_density(d);
  std::vector<double> te;
  te.reserve(e);
  for (const auto& k : d.kernels()) {
    const double x = density(h, k);
    te.push_back(mode == NormMode::semi ? std::abs(x) : x);
  }

  HolderReport r;
  r.mode = mode;
  r.lhs = std::pow(t, e);
  r.rhs = 1.0;
  for (double x : te) r.rhs *= x;

  // The ratio compares a lower bound on the left with an upper bound on the
  // right. Each density carries a rounding band of kRoundoff times the density
  // of the absolute kernels, which bounds the summation error from above. A
  // zero band means every term was exactly 0, so the zero is exact.
  const bool lhs_positive = t > 0.0 || (t < 0.0 && e % 2 == 0);
  double lo_t = 0.0;
  if (lhs_positive) {
    double band = kRoundoff * std::abs(t);
    if (mode == NormMode::semi) {
      std::vector<StepKernel> absolute;
      absolute.reserve(e);
      for (const auto& k : d.kernels()) absolute.push_back(abs(k));
      band = kRoundoff * decorated_density(Decoration(h, std::move(absolute)));
    }
    lo_t = std::max(std::abs(t) - band, 0.0);
  }
  std::vector<double> up;
  up.reserve(e);
  for (int i = 0; i < e; ++i) {
    const double band = kRoundoff * (mode == NormMode::semi ? density(h, abs(d.kernel(i))) : te[i]);
    up.push_back(te[i] + band);
  }
  const bool rhs_zero = std::any_of(up.begin(), up.end(), [](double x) { return x == 0.0; });
  if (rhs_zero) {
    r.ratio = lo_t > 0.0 ? kInf : (lhs_positive || t == 0.0 ? 1.0 : 0.0);
  } else if (lo_t == 0.0) {
    r.ratio = 0.0;
  } else {
    double num = std::pow(lo_t, e);
    double den = 1.0;
    for (double x : up) den *= x;
    if (std::isnormal(num) && std::isnormal(den)) {
      r.ratio = num / den;
    } else {
      double log_ratio = e * std::log(lo_t);
      for (double x : up) log_ratio -= std::log(x);
      r.ratio = std::exp(log_ratio);
    }
  }
  return r;
}

std::string to_string(CertificateKind kind) {
  switch (kind) {
    case CertificateKind::holder_violation: return "holder-violation";
    case CertificateKind::avg_degree_violation: return "avg-degree-violation";
    case CertificateKind::edge_count_mismatch: return "edge-count-mismatch";
    case CertificateKind::component_nonisomorphism: return "component-nonisomorphism";
    case CertificateKind::density_domination_violation: return "density-domination-violation";
  }
  return "unknown";
}

std::string to_string(NormMode mode) { return mode == NormMode::weak ? "weak" : "semi"; }

NormMode parse_mode(const std::string& s) {
  if (s == "weak") return NormMode::weak;
  if (s == "semi") return NormMode::semi;
  throw NormingError("mode must be 'weak' or 'semi', got '" + s + "'");
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
    case CheckStatus::skipped: return "skipped";
  }
  return "unknown";
}

std::string to_string(Overall o) {
  switch (o) {
    case Overall::consistent: return "consistent";
    case Overall::refuted: return "refuted";
    case Overall::inconclusive: return "inconclusive";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Certificates

CertificateCheck validate_certificate(const Certificate& c) {
  CertificateCheck out;
  auto reject = [&](std::string why) {
    out.valid = false;
    out.reason = std::move(why);
    return out;
  };
  try {
    switch (c.kind) {
      case CertificateKind::holder_violation:
      case CertificateKind::avg_degree_violation:
      case CertificateKind::edge_count_mismatch: {
        if (!c.decoration) return reject("missing decoration");
        if (!(c.decoration->host() == c.host)) return reject("decoration host differs from certificate host");
        const HolderReport r = holder_check(*c.decoration, c.mode);
        out.lhs = r.lhs;
        out.rhs = r.rhs;
        out.ratio = r.ratio;
        if (c.kind == CertificateKind::avg_degree_violation) {
          if (!c.subgraph) return reject("missing subgraph");
          if (!find_subgraph_embedding(*c.subgraph, c.host)) return reject("subgraph does not embed in host");
          if (!(edge_vertex_ratio(*c.subgraph) > edge_vertex_ratio(remove_isolated_vertices(c.host))))
            return reject("subgraph does not exceed the host's edge/vertex ratio");
        }
        break;
      }
      case CertificateKind::density_domination_violation: {
        if (!c.subgraph || !c.kernel) return reject("missing subgraph or kernel");
        const DominationReport r = domination_check(*c.subgraph, c.host, *c.kernel);
        out.lhs = r.lhs;
        out.rhs = r.rhs;
        out.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? kInf : 1.0);
        break;
      }
      case CertificateKind::component_nonisomorphism: {
        if (!c.subgraph || !c.other) return reject("missing component pair");
        const auto comps = components(c.host);
        auto is_component = [&](const Graph& g) {
          return std::any_of(comps.begin(), comps.end(),
                             [&](const Component& x) { return are_isomorphic(x.graph, g); });
        };
        if (!is_component(*c.subgraph) || !is_component(*c.other))
          return reject("stored graphs are not components of the host");
        if (are_isomorphic(*c.subgraph, *c.other)) return reject("stored components are isomorphic");
        if (!c.kernel) {
          out.valid = true;
          out.ratio = kInf;
          out.reason = "non-isomorphic components (structural)";
          return out;
        }
        if (!c.kernel->is_nonnegative()) return reject("distinguishing kernel must be non-negative");
        const DominationReport r = component_domination(c.host, *c.kernel);
        out.lhs = r.lhs;
        out.rhs = r.rhs;
        out.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? kInf : 1.0);
        break;
      }
    }
  } catch (const std::exception& ex) {
    return reject(std::string("payload rejected: ") + ex.what());
  }
  if (!(out.ratio > 1.0 + kValidationMargin)) return reject("no violation on re-evaluation");
  if (!close_rel(c.lhs, out.lhs, 1e-9) || !close_rel(c.rhs, out.rhs, 1e-9))
    return reject("recorded sides do not match the re-evaluated ones");
  out.valid = true;
  out.reason = "violation reproduced";
  return out;
}

nlohmann::json certificate_to_json(const Certificate& c) {
  nlohmann::json j;
  j["kind"] = to_string(c.kind);
  j["mode"] = to_string(c.mode);
  j["host"] = graph_to_json(c.host);
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  if (!c.note.empty()) j["note"] = c.note;
  if (c.decoration) {
    nlohmann::json ks = nlohmann::json::array();
    for (const auto& k : c.decoration->kernels()) ks.push_back(kernel_to_json(k));
    j["decoration"] = {{"kernels", std::move(ks)}};
  }
  if (c.subgraph) j["subgraph"] = graph_to_json(*c.subgraph);
  if (c.other) j["other"] = graph_to_json(*c.other);
  if (c.kernel) j["kernel"] = kernel_to_json(*c.kernel);
  return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw NormingError("certificate must be a JSON object");
  for (const char* key : {"kind", "mode", "host", "lhs", "rhs"})
    if (!j.contains(key)) throw NormingError(std::string("certificate lacks \"") + key + "\"");
  Certificate c;
  const std::string kind = j["kind"].get<std::string>();
  bool known = false;
  for (auto k : {CertificateKind::holder_violation, CertificateKind::avg_degree_violation,
                 CertificateKind::edge_count_mismatch, CertificateKind::component_nonisomorphism,
                 CertificateKind::density_domination_violation})
    if (to_string(k) == kind) {
      c.kind = k;
      known = true;
    }
  if (!known) throw NormingError("unknown certificate kind '" + kind + "'");
  c.mode = parse_mode(j["mode"].get<std::string>());
  c.host = graph_from_json(j["host"]);
  if (!j["lhs"].is_number() || !j["rhs"].is_number()) throw NormingError("lhs and rhs must be numbers");
  c.lhs = j["lhs"].get<double>();
  c.rhs = j["rhs"].get<double>();
  if (j.contains("note")) c.note = j["note"].get<std::string>();
  if (j.contains("decoration")) {
    std::vector<StepKernel> ks;
    for (const auto& k : j["decoration"].at("kernels")) ks.push_back(kernel_from_json(k));
    c.decoration = Decoration(c.host, std::move(ks));
  }
  if (j.contains("subgraph")) c.subgraph = graph_from_json(j["subgraph"]);
  if (j.contains("other")) c.other = graph_from_json(j["other"]);
  if (j.contains("kernel")) c.kernel = kernel_from_json(j["kernel"]);
  return c;
}

// ---------------------------------------------------------------------------
// Searches

std::optional<Certificate> holder_search(const Graph& h, NormMode mode, const SearchOptions& opt) {
  if (opt.trials < 1) throw NormingError("holder_search needs at least one trial");
  if (h.edge_count() == 0) return std::nullopt;
  for (int trial = 0; trial < opt.trials; ++trial) {
    SplitMix64Stream rng(derive_seed(opt.seed, {static_cast<std::uint64_t>(trial)}));
    const int family = trial % kFamilies;
    Decoration best = random_decoration(h, family, mode, rng);
    HolderReport report = holder_check(best, mode);
    for (int step = 0; step < opt.climb_steps && !report.violated(kSearchThreshold); ++step) {
      Decoration cand = perturb(best, mode, rng);
      HolderReport r = holder_check(cand, mode);
      if (r.ratio > report.ratio) {
        best = std::move(cand);
        report = r;
      }
    }
    if (report.violated(kSearchThreshold)) {
      Certificate c;
      c.kind = CertificateKind::holder_violation;
      c.mode = mode;
      c.host = h;
      c.decoration = std::move(best);
      c.lhs = report.lhs;
      c.rhs = report.rhs;
      c.note = "trial " + std::to_string(trial) + " (" + family_name(family) + ")";
      return c;
    }
  }
  return std::nullopt;
}

std::optional<StepKernel> distinguishing_kernel_search(const Graph& f1, const Graph& f2, int trials,
                                                       std::uint64_t seed) {
  for (const Graph* f : {&f1, &f2})
    if (f->vertex_count() == 0 || !is_connected(*f))
      throw NormingError("distinguishing search needs connected graphs");
  if (are_isomorphic(f1, f2)) throw NormingError("graphs are isomorphic; no kernel can distinguish them");
  for (int trial = 0; trial < trials; ++trial) {
    StepKernel u = constant_kernel(0.5);
    if (trial > 0) {
      SplitMix64Stream rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
      const auto mu = random_measures(rng, 2 + rng.below(2));
      u = random_block(rng, mu, NormMode::weak);
    }
    if (std::abs(density(f1, u) - density(f2, u)) > 1e-6) return u;
  }
  return std::nullopt;
}

DominationReport domination_check(const Graph& f, const Graph& h, const StepKernel& w) {
  if (!w.is_nonnegative()) throw NormingError("domination check needs a non-negative kernel");
  if (h.edge_count() == 0) throw NormingError("host graph has no edges");
  if (!find_subgraph_embedding(f, h)) throw NormingError("first graph is not a subgraph of the second");
  DominationReport r;
  r.lhs = density(f, w);
  r.rhs = std::pow(density(h, w), static_cast<double>(f.edge_count()) / h.edge_count());
  r.violated = r.lhs > r.rhs * (1.0 + kValidationMargin);
  return r;
}

// ---------------------------------------------------------------------------
// Structural checks

CheckEntry subgraph_avg_degree_check(const Graph& h, int max_subgraph_vertices) {
  if (max_subgraph_vertices < 1) throw NormingError("subgraph cap must be at least 1");
  if (h.vertex_count() == 0) throw NormingError("empty graph");
  const auto deg = h.degrees();
  if (std::any_of(deg.begin(), deg.end(), [](int d) { return d == 0; }))
    throw NormingError("graph has isolated vertices; remove them first");

  const int n = h.vertex_count();
  const int cap = std::min(max_subgraph_vertices, n);
  const Rational host_ratio = edge_vertex_ratio(h);
  Rational best_ratio = host_ratio;
  std::vector<int> best_set;

  std::vector<char> in(n, 0);
  std::vector<int> pick;
  // Combinations of each size in lexicographic order.
  for (int size = 1; size <= cap; ++size) {
    pick.resize(size);
    for (int i = 0; i < size; ++i) pick[i] = i;
    for (;;) {
      for (int v : pick) in[v] = 1;
      int inner = 0;
      for (const Edge& e : h.edges()) inner += in[e.u] && in[e.v];
      for (int v : pick) in[v] = 0;
      const Rational r(inner, size);
      if (r > best_ratio) {
        best_ratio = r;
        best_set = pick;
      }
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  CheckEntry entry;
  entry.name = "subgraph-average-degree";
  const std::string scope = cap >= n ? "all subgraphs"
                                     : "subgraphs on at most " + std::to_string(cap) + " of " +
                                           std::to_string(n) + " vertices (capped search)";
  if (best_set.empty()) {
    entry.status = CheckStatus::pass;
    entry.evidence = "e(F)/v(F) <= e(H)/v(H) = " + rational_str(host_ratio) + " for " + scope;
    return entry;
  }
  std::vector<int> local(n, -1);
  for (int i = 0; i < static_cast<int>(best_set.size()); ++i) local[best_set[i]] = i;
  std::vector<std::pair<int, int>> fe;
  for (const Edge& e : h.edges())
    if (local[e.u] >= 0 && local[e.v] >= 0) fe.emplace_back(local[e.u], local[e.v]);
  const Graph f(static_cast<int>(best_set.size()), fe);
  entry.status = CheckStatus::fail;
  entry.evidence = "subgraph on vertices " + vertex_list(best_set) + " has e(F)/v(F) = " +
                   rational_str(best_ratio) + " > e(H)/v(H) = " + rational_str(host_ratio);
  entry.certificate = avg_degree_certificate(h, f, best_set, entry.evidence);
  return entry;
}

Certificate edge_mismatch_certificate(const Graph& h) {
  const Graph g = remove_isolated_vertices(h);
  const auto comps = components(g);
  if (comps.size() < 2) throw NormingError("edge-count certificate needs at least two components");
  const Rational avg = average_degree(comps.front().graph);
  for (const auto& c : comps)
    if (average_degree(c.graph) != avg)
      throw NormingError("components differ in average degree; use the average-degree certificate");
  std::size_t lightest = 0;
  bool differ = false;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].graph.edge_count() != comps[0].graph.edge_count()) differ = true;
    if (comps[i].graph.edge_count() < comps[lightest].graph.edge_count()) lightest = i;
  }
  if (!differ) throw NormingError("all components have the same number of edges");

  const Graph& f1 = comps[lightest].graph;
  const double gamma = static_cast<double>(f1.vertex_count()) / f1.edge_count();
  const StepKernel w = abs(special_kernel({gamma, {1.0, 1.0}}));
  const StepKernel one = constant_kernel_on(w.measures(), 1.0);

  Certificate c;
  c.kind = CertificateKind::edge_count_mismatch;
  c.mode = NormMode::weak;
  c.host = g;
  c.decoration = split_decoration(g, host_edge_indices(g, f1, comps[lightest].vertices), w, one);
  const HolderReport r = holder_check(*c.decoration, NormMode::weak);
  c.lhs = r.lhs;
  c.rhs = r.rhs;
  std::ostringstream note;
  note << "component on vertices " << vertex_list(comps[lightest].vertices) << " has "
       << f1.edge_count() << " edges, the fewest; gamma = " << f1.vertex_count() << "/"
       << f1.edge_count() << ", coefficients (1, 1)";
  c.note = note.str();
  return c;
}

std::vector<CheckEntry> component_analysis(const Graph& h, const SearchOptions& opt) {
  const Graph g = remove_isolated_vertices(h);
  const auto comps = components(g);
  std::vector<CheckEntry> out(3);
  out[0].name = "component-average-degree";
  out[1].name = "component-edge-count";
  out[2].name = "component-isomorphism";
  if (comps.empty()) {
    for (auto& e : out) {
      e.status = CheckStatus::skipped;
      e.evidence = "no edges";
    }
    return out;
  }

  // Average degree.
  std::size_t densest = 0;
  bool avg_equal = true;
  std::ostringstream avg_list;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Rational a = average_degree(comps[i].graph);
    avg_list << (i ? ", " : "") << rational_str(a);
    if (a != average_degree(comps[0].graph)) avg_equal = false;
    if (a > average_degree(comps[densest].graph)) densest = i;
  }
  if (avg_equal) {
    out[0].status = CheckStatus::pass;
    out[0].evidence = "average degrees " + avg_list.str();
  } else {
    out[0].status = CheckStatus::fail;
    out[0].evidence = "average degrees " + avg_list.str() + " differ; component on " +
                      vertex_list(comps[densest].vertices) + " exceeds e(H)/v(H)";
    out[0].certificate = avg_degree_certificate(g, comps[densest].graph, comps[densest].vertices, out[0].evidence);
  }

  // Edge counts.
  bool edges_equal = true;
  std::ostringstream edge_list;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    edge_list << (i ? ", " : "") << comps[i].graph.edge_count();
    if (comps[i].graph.edge_count() != comps[0].graph.edge_count()) edges_equal = false;
  }
  if (!avg_equal) {
    out[1].status = CheckStatus::skipped;
    out[1].evidence = "edge counts " + edge_list.str() + "; the construction needs equal average degrees";
  } else if (edges_equal) {
    out[1].status = CheckStatus::pass;
    out[1].evidence = "edge counts " + edge_list.str();
  } else {
    out[1].status = CheckStatus::fail;
    out[1].evidence = "edge counts " + edge_list.str() + " differ";
    out[1].certificate = edge_mismatch_certificate(g);
  }

  // Isomorphism.
  if (!avg_equal || !edges_equal) {
    out[2].status = CheckStatus::skipped;
    out[2].evidence = "needs equal average degrees and edge counts";
    return out;
  }
  std::size_t odd_one = 0;
  for (std::size_t i = 1; i < comps.size() && odd_one == 0; ++i)
    if (!are_isomorphic(comps[0].graph, comps[i].graph)) odd_one = i;
  if (odd_one == 0) {
    out[2].status = CheckStatus::pass;
    out[2].evidence = std::to_string(comps.size()) + " pairwise isomorphic component(s)";
    return out;
  }
  out[2].status = CheckStatus::fail;
  out[2].evidence = "components on " + vertex_list(comps[0].vertices) + " and " +
                    vertex_list(comps[odd_one].vertices) + " are not isomorphic";
  Certificate c;
  c.kind = CertificateKind::component_nonisomorphism;
  c.mode = NormMode::weak;
  c.host = g;
  c.subgraph = comps[0].graph;
  c.other = comps[odd_one].graph;
  if (auto u = distinguishing_kernel_search(comps[0].graph, comps[odd_one].graph, std::max(opt.trials, 1), opt.seed)) {
    const DominationReport r = component_domination(g, *u);
    if (r.violated) {
      c.kernel = *u;
      c.lhs = r.lhs;
      c.rhs = r.rhs;
      out[2].evidence += "; a distinguishing kernel breaks t(F, U) <= t(H, U)^(e(F)/e(H))";
    }
  }
  c.note = out[2].evidence;
  out[2].certificate = std::move(c);
  return out;
}

std::vector<CheckEntry> star_or_eulerian_check(const Graph& h) {
  const Graph g = remove_isolated_vertices(h);
  const auto comps = components(g);
  CheckEntry shape;
  shape.name = "star-or-eulerian";
  CheckEntry parity;
  parity.name = "even-edge-count";
  parity.advisory = true;
  if (comps.empty()) {
    shape.status = parity.status = CheckStatus::skipped;
    shape.evidence = parity.evidence = "no edges";
    return {shape, parity};
  }
  bool all_iso = true;
  bool all_shaped = true;
  bool all_even = true;
  std::ostringstream kinds;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const Graph& f = comps[i].graph;
    if (i > 0 && !are_isomorphic(comps[0].graph, f)) all_iso = false;
    const bool star = is_star(f);
    const bool euler = is_eulerian(f);
    if (!star && !euler) all_shaped = false;
    if (f.edge_count() % 2 != 0) all_even = false;
    kinds << (i ? ", " : "") << (star ? "star" : euler ? "eulerian" : "neither");
  }
  shape.status = all_iso && all_shaped ? CheckStatus::pass : CheckStatus::fail;
  shape.evidence = "components: " + kinds.str() + (all_iso ? "; pairwise isomorphic" : "; not pairwise isomorphic");
  parity.status = all_even ? CheckStatus::pass : CheckStatus::fail;
  parity.evidence = all_even ? "every component has an even number of edges"
                             : "a component has an odd number of edges; this rules out norming, not seminorming";
  return {shape, parity};
}

// ---------------------------------------------------------------------------

std::vector<Certificate> Verdict::certificates() const {
  std::vector<Certificate> out;
  for (const auto& c : checks)
    if (c.certificate && c.status == CheckStatus::fail) out.push_back(*c.certificate);
  return out;
}

Verdict full_verdict(const Graph& h, const VerdictOptions& opt) {
  Verdict v;
  v.graph = h;
  v.mode = opt.mode;
  v.checks = component_analysis(h, opt.search);
  const Graph g = remove_isolated_vertices(h);
  if (g.edge_count() == 0) {
    v.checks.push_back({"edges", CheckStatus::inconclusive, "graph has no edges; t(H, .) is constant", false, {}});
    v.overall = Overall::inconclusive;
    return v;
  }
  v.checks.push_back(subgraph_avg_degree_check(g, opt.max_subgraph_vertices));
  if (opt.mode == NormMode::semi)
    for (auto& e : star_or_eulerian_check(g)) v.checks.push_back(std::move(e));

  CheckEntry search;
  search.name = "holder-search";
  if (auto cert = holder_search(g, opt.mode, opt.search)) {
    search.status = CheckStatus::fail;
    search.evidence = "violation found at " + cert->note;
    search.certificate = std::move(cert);
  } else {
    search.status = CheckStatus::pass;
    search.evidence = "no violation in " + std::to_string(opt.search.trials) + " trials (seed " +
                      std::to_string(opt.search.seed) + ")";
  }
  v.checks.push_back(std::move(search));

  bool refuted = false;
  bool open = false;
  for (const auto& c : v.checks) {
    if (c.advisory) continue;
    if (c.status == CheckStatus::fail && c.certificate) refuted = true;
    if ((c.status == CheckStatus::fail && !c.certificate) || c.status == CheckStatus::inconclusive) open = true;
  }
  v.overall = refuted ? Overall::refuted : open ? Overall::inconclusive : Overall::consistent;
  return v;
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : v.checks) {
    nlohmann::json e{{"name", c.name}, {"status", to_string(c.status)}, {"evidence", c.evidence}};
    if (c.advisory) e["advisory"] = true;
    if (c.certificate) e["certificate"] = certificate_to_json(*c.certificate);
    checks.push_back(std::move(e));
  }
  return {{"graph", graph_to_json(v.graph)},
          {"mode", to_string(v.mode)},
          {"overall", to_string(v.overall)},
          {"checks", std::move(checks)}};
}

}  // namespace graphnorm
