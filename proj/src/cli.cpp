#include "graphnorm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "graphnorm/density.hpp"
#include "graphnorm/moduli.hpp"
#include "graphnorm/norming.hpp"
#include "json.hpp"

namespace graphnorm::cli {

namespace {

// Any user-facing input problem; mapped to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool starts_with_brace(const std::string& text) {
  const auto p = text.find_first_not_of(" \t\r\n");
  return p != std::string::npos && text[p] == '{';
}

// A file (edge list, or JSON when it starts with '{'), else a graph name.
Graph load_graph(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) {
    const std::string text = read_file(arg);
    if (starts_with_brace(text)) return graph_from_json(nlohmann::json::parse(text));
    return parse_edge_list(text);
  }
  try {
    return named_graph(arg);
  } catch (const GraphError& e) {
    throw InputError("'" + arg + "' is neither a readable file nor a graph name (" + e.what() + ")");
  }
}

double parse_number(const std::string& s) {
  if (auto slash = s.find('/'); slash != std::string::npos)
    return parse_number(s.substr(0, slash)) / parse_number(s.substr(slash + 1));
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InputError("not a number: '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

// A kernel JSON file, or "const:P", "half-square", "special:GAMMA:A1,A2,...".
StepKernel load_kernel(const std::string& arg) {
  if (std::filesystem::is_regular_file(arg)) return kernel_from_json(nlohmann::json::parse(read_file(arg)));
  if (arg == "half-square") return half_square_kernel();
  if (arg.rfind("const:", 0) == 0) return constant_kernel(parse_number(arg.substr(6)));
  if (arg.rfind("special:", 0) == 0) {
    const auto parts = split(arg.substr(8), ':');
    if (parts.size() != 2) throw InputError("special kernel syntax is special:GAMMA:A1,A2,...");
    SpecialKernelSpec spec{parse_number(parts[0]), {}};
    for (const auto& a : split(parts[1], ',')) spec.a.push_back(parse_number(a));
    return special_kernel(spec);
  }
  throw InputError("'" + arg + "' is neither a readable file nor a builtin kernel "
                   "(const:P, half-square, special:GAMMA:A1,...)");
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw InputError("empty list '" + s + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  for (double x : parse_real_list(s)) {
    if (x != std::floor(x) || x < 1 || x > 1e6) throw InputError("expected positive integers in '" + s + "'");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

// "0-19", "3", or "1,4,9".
std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(s, ',')) {
    const auto dash = item.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo || hi - lo > 100000) throw InputError("bad seed range '" + item + "'");
        for (auto x = lo; x <= hi; ++x) out.push_back(x);
      }
    } catch (const std::logic_error&) {
      throw InputError("bad seed list '" + s + "'");
    }
  }
  if (out.empty()) throw InputError("empty seed list");
  return out;
}

void require_format(const std::string& f, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (f == a) return;
  throw InputError("unsupported --format '" + f + "'");
}

// ---------------------------------------------------------------------------

int cmd_density(const std::string& graph_arg, const std::string& kernel_arg, const std::string& format,
                std::ostream& out) {
  require_format(format, {"text", "json"});
  const Graph h = load_graph(graph_arg);
  const StepKernel w = load_kernel(kernel_arg);
  const double t = density(h, w);
  const int width = elimination_plan(h).width;
  const bool has_edges = h.edge_count() > 0;
  if (format == "json") {
    nlohmann::json j{{"t", fmt(t)}, {"elimination_width", width}};
    j["norm_h"] = has_edges ? nlohmann::json(fmt(norm_h(h, w))) : nlohmann::json(nullptr);
    j["norm_rh"] = has_edges ? nlohmann::json(fmt(norm_rh(h, w))) : nlohmann::json(nullptr);
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "t = " << fmt(t) << '\n';
  if (has_edges) {
    out << "norm_H = " << fmt(norm_h(h, w)) << '\n';
    out << "norm_rH = " << fmt(norm_rh(h, w)) << '\n';
  } else {
    out << "norm_H = undefined (no edges)\n";
    out << "norm_rH = undefined (no edges)\n";
  }
  out << "elimination_width = " << width << '\n';
  return kExitOk;
}

struct CheckArgs {
  std::string graph;
  std::string mode = "weak";
  int budget = 1000;
  std::uint64_t seed = 0;
  int max_subgraph_vertices = 8;
  int climb_steps = 4;
};

int cmd_check(const CheckArgs& a, std::ostream& out) {
  if (a.budget < 1 || a.max_subgraph_vertices < 1 || a.climb_steps < 0)
    throw InputError("budgets must be positive");
  VerdictOptions opt;
  opt.mode = parse_mode(a.mode);
  opt.search.trials = a.budget;
  opt.search.seed = a.seed;
  opt.search.climb_steps = a.climb_steps;
  opt.max_subgraph_vertices = a.max_subgraph_vertices;
  const Verdict v = full_verdict(load_graph(a.graph), opt);
  out << verdict_to_json(v).dump(2) << '\n';
  return v.overall == Overall::refuted ? kExitRefuted : kExitOk;
}

struct ModuliArgs {
  std::string graph;
  std::string kind = "convexity";
  std::string eps_grid;
  std::string n_grid = "16,32,64,128";
  std::string seeds = "0-19";
  std::string format = "csv";
  bool witnesses = false;
};

int cmd_moduli(const ModuliArgs& a, std::ostream& out) {
  require_format(a.format, {"csv", "json", "text"});
  const ModulusKind kind = parse_modulus_kind(a.kind);
  const std::string eps_text = a.eps_grid.empty() ? (kind == ModulusKind::convexity ? "0.5" : "0.25,0.5,0.75")
                                                  : a.eps_grid;
  const auto eps = parse_real_list(eps_text);
  for (double e : eps)
    if (!(e > 0.0 && e < 1.0))
      throw InputError("epsilon " + fmt(e) + " is outside (0, 1), the range where the moduli bounds are stated");
  const Graph h = load_graph(a.graph);
  const auto ns = parse_int_list(a.n_grid);
  const auto seeds = parse_seeds(a.seeds);
  const auto rows = modulus_scan(h, kind, eps, ns, seeds);

  if (a.format == "csv") {
    out << scan_to_csv(a.graph, rows);
    return kExitOk;
  }

  // Medians per (epsilon, n) cell; rows are eps-major, then n, then seed.
  struct Cell {
    double eps;
    int n;
    double value;
    double separation;
  };
  std::vector<Cell> cells;
  const std::size_t per = seeds.size();
  for (std::size_t i = 0; i < rows.size(); i += per) {
    std::vector<double> v;
    std::vector<double> s;
    for (std::size_t j = i; j < i + per; ++j) {
      v.push_back(rows[j].value);
      s.push_back(rows[j].separation);
    }
    cells.push_back({rows[i].epsilon, rows[i].n, summarize(rows[i].n, v).median, summarize(rows[i].n, s).median});
  }

  if (a.format == "json") {
    nlohmann::json j;
    j["graph"] = a.graph;
    j["kind"] = to_string(kind);
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& c : cells)
      summary.push_back({{"epsilon", c.eps}, {"n", c.n}, {"median_value", c.value}, {"median_separation", c.separation}});
    j["summary"] = std::move(summary);
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : rows) records.push_back(estimate_to_json(r, a.witnesses));
    j["records"] = std::move(records);
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  out << "graph " << a.graph << ", " << to_string(kind) << ", medians over " << per << " seeds\n";
  out << std::left << std::setw(10) << "epsilon" << std::setw(8) << "n" << std::setw(20) << "median_value"
      << "median_separation\n";
  for (const auto& c : cells)
    out << std::left << std::setw(10) << fmt(c.eps) << std::setw(8) << c.n << std::setw(20) << fmt(c.value)
        << fmt(c.separation) << '\n';
  return kExitOk;
}

struct ConcentrationArgs {
  std::string graph;
  std::string dist = "d1";
  double epsilon = 0.5;
  std::string n_grid = "16,32,64,128";
  int trials = 20;
  std::uint64_t seed = 0;
  double tolerance = 0.02;
};

DiracMixture pick_distribution(const std::string& name, double eps) {
  if (name == "d1") return dirac_d1();
  if (name == "d2") return dirac_d2();
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("epsilon must lie in (0, 1)");
  if (name == "d3") return dirac_d3(eps);
  if (name == "d4") return dirac_d4(eps);
  throw InputError("distribution must be one of d1, d2, d3, d4");
}

int cmd_concentration(const ConcentrationArgs& a, std::ostream& out) {
  if (a.trials < 1) throw InputError("trials must be positive");
  const DiracMixture d = pick_distribution(a.dist, a.epsilon);
  const Graph h = load_graph(a.graph);
  const auto r = concentration_scan(h, parse_int_list(a.n_grid), d, a.trials, a.seed, a.tolerance);
  nlohmann::json stats = nlohmann::json::array();
  for (const auto& s : r.stats)
    stats.push_back({{"n", s.n}, {"mean", s.mean}, {"median", s.median}, {"q90", s.q90}, {"max", s.max}});
  out << nlohmann::json{{"graph", a.graph},
                        {"distribution", a.dist},
                        {"target", r.target},
                        {"trials", a.trials},
                        {"seed", a.seed},
                        {"tolerance", r.tolerance},
                        {"stats", std::move(stats)},
                        {"monotone", r.monotone},
                        {"within_tolerance", r.within_tolerance},
                        {"pass", r.pass()}}
             .dump(2)
      << '\n';
  return kExitOk;
}

int cmd_embedding(const std::string& graph_arg, const std::string& coeffs, std::ostream& out) {
  const Graph h = load_graph(graph_arg);
  const auto r = lp_embedding_check(h, parse_real_list(coeffs));
  out << "gamma = " << fmt(r.gamma) << '\n'
      << "t(H, W) = " << fmt(r.density) << '\n'
      << "sum a_i^e(H) = " << fmt(r.power_sum) << '\n'
      << "relative error = " << fmt(r.rel_error) << (r.holds ? " (identity holds)" : " (identity fails)") << '\n'
      << "contrast t(H+H, W) = " << fmt(r.contrast_density) << '\n'
      << "contrast sum a_i^(2 e(H)) = " << fmt(r.contrast_power_sum) << '\n';
  return kExitOk;
}

// Accepts a single certificate or a verdict holding certificates.
int cmd_validate(const std::string& path, std::ostream& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  std::vector<nlohmann::json> payloads;
  if (j.is_object() && j.contains("checks")) {
    if (!j["checks"].is_array()) throw InputError("\"checks\" must be an array");
    for (const auto& c : j["checks"])
      if (c.is_object() && c.contains("certificate")) payloads.push_back(c["certificate"]);
    if (payloads.empty()) {
      out << "no certificates to validate\n";
      return kExitOk;
    }
  } else {
    payloads.push_back(j);
  }
  bool all_valid = true;
  for (const auto& p : payloads) {
    // Missing fields are input errors; kernels that no longer pass
    // validation (asymmetric, bad measures) fail the certificate instead.
    Certificate c;
    try {
      c = certificate_from_json(p);
    } catch (const KernelError& e) {
      all_valid = false;
      out << p.value("kind", std::string("certificate")) << ": INVALID (kernel rejected: " << e.what() << ")\n";
      continue;
    } catch (const DensityError& e) {
      all_valid = false;
      out << p.value("kind", std::string("certificate")) << ": INVALID (decoration rejected: " << e.what() << ")\n";
      continue;
    }
    const CertificateCheck r = validate_certificate(c);
    all_valid = all_valid && r.valid;
    out << to_string(c.kind) << ": " << (r.valid ? "valid" : "INVALID") << " (lhs = " << fmt(r.lhs)
        << ", rhs = " << fmt(r.rhs) << ", ratio = " << fmt(r.ratio) << "; " << r.reason << ")\n";
  }
  return all_valid ? kExitOk : kExitRefuted;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph norm toolkit: homomorphism densities, norming checks, and moduli experiments"};
  app.name("graphnorm");
  app.require_subcommand(1);

  std::string graph_arg, kernel_arg, format = "text";
  auto* density_cmd = app.add_subcommand("density", "Print t(H,W), both graph norms and the elimination width");
  density_cmd->add_option("graph", graph_arg, "Edge-list or JSON graph file, or a graph name")->required();
  density_cmd->add_option("kernel", kernel_arg, "Kernel JSON file, const:P, half-square or special:GAMMA:A1,...")
      ->required();
  density_cmd->add_option("--format", format, "text or json");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Run the norming checks and print a verdict as JSON");
  check_cmd->add_option("graph", check.graph, "Graph file or name")->required();
  check_cmd->add_option("--mode", check.mode, "weak or semi");
  check_cmd->add_option("--budget", check.budget, "Hoelder search trials");
  check_cmd->add_option("--seed", check.seed, "Master seed");
  check_cmd->add_option("--max-subgraph-vertices", check.max_subgraph_vertices, "Cap for the subgraph scan");
  check_cmd->add_option("--climb-steps", check.climb_steps, "Hill-climb steps per trial");

  ModuliArgs moduli;
  auto* moduli_cmd = app.add_subcommand("moduli", "Convexity and smoothness witnesses over seeds and grids");
  moduli_cmd->add_option("graph", moduli.graph, "Graph file or name")->required();
  moduli_cmd->add_option("--kind", moduli.kind, "convexity or smoothness");
  moduli_cmd->add_option("--eps-grid", moduli.eps_grid, "Comma-separated epsilons in (0, 1)");
  moduli_cmd->add_option("--n-grid", moduli.n_grid, "Comma-separated, strictly increasing part counts");
  moduli_cmd->add_option("--seeds", moduli.seeds, "Seeds, e.g. 0-19 or 1,5,9");
  moduli_cmd->add_option("--format", moduli.format, "csv, json or text");
  moduli_cmd->add_flag("--witnesses", moduli.witnesses, "Embed witness kernels in JSON output");

  ConcentrationArgs conc;
  auto* conc_cmd = app.add_subcommand("concentration", "Deviation of t(H,U) from mean^e(H) for block-random U");
  conc_cmd->add_option("graph", conc.graph, "Graph file or name")->required();
  conc_cmd->add_option("--dist", conc.dist, "d1, d2, d3 or d4");
  conc_cmd->add_option("--eps", conc.epsilon, "Parameter of d3 and d4");
  conc_cmd->add_option("--n-grid", conc.n_grid, "Comma-separated, strictly increasing part counts");
  conc_cmd->add_option("--trials", conc.trials, "Samples per n");
  conc_cmd->add_option("--seed", conc.seed, "Master seed");
  conc_cmd->add_option("--tolerance", conc.tolerance, "Bound on the median at the largest n");

  std::string coeffs = "1,1";
  auto* embed_cmd = app.add_subcommand("embedding", "Check t(H, W_{v/e,a}) against sum a_i^e(H)");
  embed_cmd->add_option("graph", graph_arg, "Connected graph file or name")->required();
  embed_cmd->add_option("--a", coeffs, "Comma-separated non-negative coefficients");

  std::string cert_path;
  auto* validate_cmd = app.add_subcommand("validate", "Re-evaluate a certificate or every certificate in a verdict");
  validate_cmd->add_option("file", cert_path, "Certificate or verdict JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*density_cmd) return cmd_density(graph_arg, kernel_arg, format, out);
    if (*check_cmd) return cmd_check(check, out);
    if (*moduli_cmd) return cmd_moduli(moduli, out);
    if (*conc_cmd) return cmd_concentration(conc, out);
    if (*embed_cmd) return cmd_embedding(graph_arg, coeffs, out);
    if (*validate_cmd) return cmd_validate(cert_path, out);
  } catch (const std::exception& e) {
    // Every failure reaching here stems from the input: parse errors,
    // validation of graphs, kernels, options and certificate payloads.
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace graphnorm::cli
