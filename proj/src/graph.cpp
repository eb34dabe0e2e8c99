#include "graphnorm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

namespace graphnorm {

Graph::Graph(int vertex_count) : vertex_count_(vertex_count) {
  if (vertex_count < 0) throw GraphError("negative vertex count");
}

Graph::Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges)
    : Graph(vertex_count) {
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0) throw GraphError("negative vertex index");
    if (a >= vertex_count || b >= vertex_count)
      throw GraphError("edge endpoint out of range: " + std::to_string(a) + " " +
                       std::to_string(b));
    if (a == b) throw GraphError("self-loop at vertex " + std::to_string(a));
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end())
    throw GraphError("duplicate edge " + std::to_string(dup->u) + " " +
                     std::to_string(dup->v));
}

int Graph::edge_index(int u, int v) const {
  Edge key{std::min(u, v), std::max(u, v)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return -1;
  return static_cast<int>(it - edges_.begin());
}

bool Graph::has_edge(int u, int v) const { return u != v && edge_index(u, v) >= 0; }

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(vertex_count_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::vector<std::vector<int>> Graph::adjacency() const {
  std::vector<std::vector<int>> adj(vertex_count_);
  for (const Edge& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

// ---------------------------------------------------------------------------
// Text / JSON

namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  long long declared = 0;
  long long max_index = -1;
  std::vector<std::pair<int, int>> edges;
  std::map<std::pair<int, int>, int> seen;  // edge -> first line
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw GraphError("line " + std::to_string(line_no) + ": " + why + " ('" +
                       std::string(line) + "')");
    };
    auto toks = split_ws(line);
    if (toks[0] == "vertices") {
      long long n = 0;
      if (toks.size() != 2 || !parse_int(toks[1], n) || n < 0) fail("malformed vertices header");
      declared = std::max(declared, n);
      continue;
    }
    long long a = 0, b = 0;
    if (toks.size() != 2 || !parse_int(toks[0], a) || !parse_int(toks[1], b))
      fail("expected two integers 'u v'");
    if (a < 0 || b < 0) fail("negative vertex index");
    if (a == b) fail("self-loop");
    if (a > 1'000'000 || b > 1'000'000) fail("vertex index too large");
    auto key = std::make_pair(static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b)));
    if (auto it = seen.find(key); it != seen.end())
      fail("duplicate edge (first on line " + std::to_string(it->second) + ")");
    seen.emplace(key, line_no);
    edges.push_back(key);
    max_index = std::max({max_index, a, b});
  }
  return Graph(static_cast<int>(std::max(declared, max_index + 1)), edges);
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream os;
  os << "vertices " << g.vertex_count() << "\n";
  for (const Edge& e : g.edges()) os << e.u << " " << e.v << "\n";
  return os.str();
}

nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"vertices", g.vertex_count()}, {"edges", edges}};
}

Graph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw GraphError("graph JSON needs \"vertices\" and \"edges\"");
  if (!j["vertices"].is_number_integer()) throw GraphError("\"vertices\" must be an integer");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw GraphError("each edge must be a pair of integers");
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Graph(j["vertices"].get<int>(), edges);
}

// ---------------------------------------------------------------------------
// Constructions

Graph cycle_graph(int n) {
  if (n < 3) throw GraphError("cycle needs at least 3 vertices");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, e);
}

Graph path_graph(int vertices) {
  if (vertices < 1) throw GraphError("path needs at least 1 vertex");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < vertices; ++i) e.emplace_back(i, i + 1);
  return Graph(vertices, e);
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, e);
}

Graph star_graph(int leaves) { return complete_bipartite_graph(1, leaves); }

Graph complete_bipartite_graph(int a, int b) {
  if (a < 1 || b < 1) throw GraphError("complete bipartite sides must be nonempty");
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return Graph(a + b, e);
}

Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<std::pair<int, int>> e;
  for (const Edge& x : a.edges()) e.emplace_back(x.u, x.v);
  const int off = a.vertex_count();
  for (const Edge& x : b.edges()) e.emplace_back(x.u + off, x.v + off);
  return Graph(a.vertex_count() + b.vertex_count(), e);
}

Graph disjoint_copies(const Graph& g, int k) {
  if (k < 1) throw GraphError("need at least one copy");
  Graph out = g;
  for (int i = 1; i < k; ++i) out = disjoint_union(out, g);
  return out;
}

Graph relabel(const Graph& g, std::span<const int> perm) {
  if (static_cast<int>(perm.size()) != g.vertex_count()) throw GraphError("relabel: size mismatch");
  std::vector<std::pair<int, int>> e;
  for (const Edge& x : g.edges()) e.emplace_back(perm[x.u], perm[x.v]);
  return Graph(g.vertex_count(), e);
}

namespace {

Graph named_atom(std::string_view name) {
  auto num = [&](std::string_view s) {
    long long v = 0;
    if (!parse_int(s, v) || v < 0 || v > 64) throw GraphError("bad graph name '" + std::string(name) + "'");
    return static_cast<int>(v);
  };
  if (name == "PAW") return Graph(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  if (name == "NET") return Graph(6, {{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 4}, {2, 5}});
  if (name.size() >= 2) {
    const char c = name[0];
    std::string_view rest = name.substr(1);
    if (c == 'K') {
      if (auto comma = rest.find(','); comma != std::string_view::npos)
        return complete_bipartite_graph(num(rest.substr(0, comma)), num(rest.substr(comma + 1)));
      return complete_graph(num(rest));
    }
    if (c == 'C') return cycle_graph(num(rest));
    if (c == 'P') return path_graph(num(rest));
    if (c == 'E') return Graph(num(rest));
  }
  throw GraphError("unknown graph name '" + std::string(name) + "'");
}

}  // namespace

Graph named_graph(std::string_view name) {
  name = trim(name);
  if (name.empty()) throw GraphError("empty graph name");
  if (auto plus = name.find('+'); plus != std::string_view::npos)
    return disjoint_union(named_graph(name.substr(0, plus)), named_graph(name.substr(plus + 1)));
  if (auto star = name.find('*'); star != std::string_view::npos) {
    long long k = 0;
    if (!parse_int(trim(name.substr(0, star)), k) || k < 1 || k > 64)
      throw GraphError("bad copy count in '" + std::string(name) + "'");
    return disjoint_copies(named_graph(name.substr(star + 1)), static_cast<int>(k));
  }
  return named_atom(name);
}

// ---------------------------------------------------------------------------
// Components

std::vector<Component> components(const Graph& g) {
  const int n = g.vertex_count();
  auto adj = g.adjacency();
  std::vector<int> comp(n, -1);
  std::vector<Component> out;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<int> stack{s};
    std::vector<int> verts;
    comp[s] = id;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      verts.push_back(v);
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = id;
          stack.push_back(w);
        }
    }
    std::sort(verts.begin(), verts.end());
    out.push_back({Graph(), std::move(verts), false});
  }
  for (auto& c : out) {
    std::vector<int> local(n, -1);
    for (int i = 0; i < static_cast<int>(c.vertices.size()); ++i) local[c.vertices[i]] = i;
    std::vector<std::pair<int, int>> e;
    for (const Edge& x : g.edges())
      if (local[x.u] >= 0) e.emplace_back(local[x.u], local[x.v]);
    c.graph = Graph(static_cast<int>(c.vertices.size()), e);
    c.singleton = c.vertices.size() == 1;
  }
  return out;
}

bool is_connected(const Graph& g) { return components(g).size() <= 1; }

// ---------------------------------------------------------------------------
// Isomorphism: colour refinement on both graphs with a shared palette, then
// backtracking restricted to equal colours.

namespace {

// Returns per-vertex colours for g1 and g2 from a shared palette.
std::pair<std::vector<int>, std::vector<int>> refine_colours(const Graph& g1, const Graph& g2) {
  const auto adj1 = g1.adjacency();
  const auto adj2 = g2.adjacency();
  std::vector<int> c1 = g1.degrees();
  std::vector<int> c2 = g2.degrees();
  std::size_t classes = 0;
  for (;;) {
    std::map<std::pair<int, std::vector<int>>, int> palette;
    auto signature = [](const std::vector<std::vector<int>>& adj, const std::vector<int>& c, int v) {
      std::vector<int> nb;
      nb.reserve(adj[v].size());
      for (int w : adj[v]) nb.push_back(c[w]);
      std::sort(nb.begin(), nb.end());
      return std::make_pair(c[v], std::move(nb));
    };
    std::vector<std::pair<int, std::vector<int>>> s1, s2;
    for (int v = 0; v < g1.vertex_count(); ++v) s1.push_back(signature(adj1, c1, v));
    for (int v = 0; v < g2.vertex_count(); ++v) s2.push_back(signature(adj2, c2, v));
    for (const auto& s : s1) palette.emplace(s, 0);
    for (const auto& s : s2) palette.emplace(s, 0);
    int next = 0;
    for (auto& [key, id] : palette) id = next++;
    for (int v = 0; v < g1.vertex_count(); ++v) c1[v] = palette[s1[v]];
    for (int v = 0; v < g2.vertex_count(); ++v) c2[v] = palette[s2[v]];
    if (palette.size() == classes) break;
    classes = palette.size();
  }
  return {c1, c2};
}

class Matcher {
 public:
  Matcher(const Graph& pattern, const Graph& target, std::vector<int> pattern_colour,
          std::vector<int> target_colour, bool induced)
      : pattern_(pattern),
        target_(target),
        padj_(pattern.adjacency()),
        pcol_(std::move(pattern_colour)),
        tcol_(std::move(target_colour)),
        induced_(induced),
        pdeg_(pattern.degrees()),
        tdeg_(target.degrees()),
        map_(pattern.vertex_count(), -1),
        used_(target.vertex_count(), false) {
    order_ = search_order();
  }

  std::optional<std::vector<int>> run() {
    if (extend(0)) return map_;
    return std::nullopt;
  }

 private:
  // Connected-first order: each next vertex has the most already-ordered
  // neighbours, ties broken by degree then label.
  std::vector<int> search_order() const {
    const int n = pattern_.vertex_count();
    std::vector<int> order;
    std::vector<bool> placed(n, false);
    std::vector<int> links(n, 0);
    for (int step = 0; step < n; ++step) {
      int best = -1;
      for (int v = 0; v < n; ++v) {
        if (placed[v]) continue;
        if (best < 0 || links[v] > links[best] ||
            (links[v] == links[best] && padj_[v].size() > padj_[best].size()))
          best = v;
      }
      placed[best] = true;
      order.push_back(best);
      for (int w : padj_[best]) ++links[w];
    }
    return order;
  }

  bool consistent(int v, int image) const {
    if (!pcol_.empty() && pcol_[v] != tcol_[image]) return false;
    if (tdeg_[image] < pdeg_[v]) return false;
    for (int w = 0; w < pattern_.vertex_count(); ++w) {
      const int wi = map_[w];
      if (wi < 0) continue;
      const bool pe = pattern_.has_edge(v, w);
      const bool te = target_.has_edge(image, wi);
      if (pe && !te) return false;
      if (induced_ && te && !pe) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_.size()) return true;
    const int v = order_[depth];
    for (int image = 0; image < target_.vertex_count(); ++image) {
      if (used_[image] || !consistent(v, image)) continue;
      map_[v] = image;
      used_[image] = true;
      if (extend(depth + 1)) return true;
      map_[v] = -1;
      used_[image] = false;
    }
    return false;
  }

  const Graph& pattern_;
  const Graph& target_;
  std::vector<std::vector<int>> padj_;
  std::vector<int> pcol_;
  std::vector<int> tcol_;
  bool induced_;
  std::vector<int> pdeg_;
  std::vector<int> tdeg_;
  std::vector<int> map_;
  std::vector<bool> used_;
  std::vector<int> order_;
};

}  // namespace

std::optional<std::vector<int>> find_isomorphism(const Graph& g1, const Graph& g2) {
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count())
    return std::nullopt;
  auto [c1, c2] = refine_colours(g1, g2);
  auto h1 = c1, h2 = c2;
  std::sort(h1.begin(), h1.end());
  std::sort(h2.begin(), h2.end());
  if (h1 != h2) return std::nullopt;
  return Matcher(g1, g2, std::move(c1), std::move(c2), /*induced=*/true).run();
}

bool are_isomorphic(const Graph& g1, const Graph& g2) { return find_isomorphism(g1, g2).has_value(); }

std::optional<std::vector<int>> find_subgraph_embedding(const Graph& f, const Graph& h) {
  if (f.vertex_count() > h.vertex_count() || f.edge_count() > h.edge_count()) return std::nullopt;
  // No colour classes for embeddings; the matcher still prunes by degree.
  return Matcher(f, h, {}, {}, /*induced=*/false).run();
}

// ---------------------------------------------------------------------------
// Degrees and subgraphs

Rational average_degree(const Graph& g) {
  if (g.vertex_count() == 0) throw GraphError("average degree of the empty graph");
  return Rational(2 * static_cast<std::int64_t>(g.edge_count()), g.vertex_count());
}

Rational edge_vertex_ratio(const Graph& g) {
  if (g.vertex_count() == 0) throw GraphError("edge/vertex ratio of the empty graph");
  return Rational(g.edge_count(), g.vertex_count());
}

void enumerate_subgraphs(const Graph& g, int max_vertices,
                         const std::function<bool(const Subgraph&)>& visit) {
  if (max_vertices < 1) throw GraphError("max_vertices must be at least 1");
  const auto& edges = g.edges();
  const int m = g.edge_count();
  std::vector<int> cover(g.vertex_count(), 0);  // how many chosen edges touch v
  int covered = 0;
  std::vector<int> chosen;
  bool stop = false;

  auto emit = [&]() {
    Subgraph s;
    for (int v = 0; v < g.vertex_count(); ++v)
      if (cover[v] > 0) s.vertices.push_back(v);
    std::vector<int> local(g.vertex_count(), -1);
    for (int i = 0; i < static_cast<int>(s.vertices.size()); ++i) local[s.vertices[i]] = i;
    std::vector<std::pair<int, int>> e;
    for (int idx : chosen) e.emplace_back(local[edges[idx].u], local[edges[idx].v]);
    s.graph = Graph(static_cast<int>(s.vertices.size()), e);
    s.edge_indices = chosen;
    return visit(s);
  };

  auto touch = [&](int v, int delta) {
    if (delta > 0 && cover[v]++ == 0) ++covered;
    if (delta < 0 && --cover[v] == 0) --covered;
  };

  std::function<void(int)> walk = [&](int from) {
    for (int i = from; i < m && !stop; ++i) {
      const int extra = (cover[edges[i].u] == 0) + (cover[edges[i].v] == 0);
      if (covered + extra > max_vertices) continue;
      touch(edges[i].u, +1);
      touch(edges[i].v, +1);
      chosen.push_back(i);
      if (!emit()) stop = true;
      if (!stop) walk(i + 1);
      chosen.pop_back();
      touch(edges[i].u, -1);
      touch(edges[i].v, -1);
    }
  };
  walk(0);
}

std::vector<Subgraph> list_subgraphs(const Graph& g, int max_vertices) {
  std::vector<Subgraph> out;
  enumerate_subgraphs(g, max_vertices, [&](const Subgraph& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

namespace {

void require_connected_no_isolated(const Graph& g, const char* what) {
  const auto deg = g.degrees();
  if (g.vertex_count() == 0 || std::any_of(deg.begin(), deg.end(), [](int d) { return d == 0; }) ||
      !is_connected(g))
    throw GraphError(std::string(what) +
                     " needs a connected graph without isolated vertices; apply it per component");
}

}  // namespace

bool is_star(const Graph& g) {
  require_connected_no_isolated(g, "is_star");
  const int n = g.vertex_count();
  if (g.edge_count() != n - 1) return false;
  const auto deg = g.degrees();
  if (n == 2) return true;  // K_{1,1}
  return std::count(deg.begin(), deg.end(), n - 1) == 1;
}

bool is_eulerian(const Graph& g) {
  require_connected_no_isolated(g, "is_eulerian");
  const auto deg = g.degrees();
  return std::all_of(deg.begin(), deg.end(), [](int d) { return d % 2 == 0; });
}

Graph remove_isolated_vertices(const Graph& g) {
  const auto deg = g.degrees();
  std::vector<int> local(g.vertex_count(), -1);
  int next = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (deg[v] > 0) local[v] = next++;
  std::vector<std::pair<int, int>> e;
  for (const Edge& x : g.edges()) e.emplace_back(local[x.u], local[x.v]);
  return Graph(next, e);
}

}  // namespace graphnorm
