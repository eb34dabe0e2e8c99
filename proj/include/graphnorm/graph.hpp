#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "json.hpp"

namespace graphnorm {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  int u = 0;
  int v = 0;  // u < v always

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Finite simple graph. Edges are normalized to u < v and kept sorted, so two
// graphs on the same labelled vertex set compare equal iff their edge sets do.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int vertex_count);
  // Throws GraphError on self-loops, duplicates or out-of-range endpoints.
  Graph(int vertex_count, const std::vector<std::pair<int, int>>& edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(int u, int v) const;
  // Position of {u, v} in edges(), or -1.
  int edge_index(int u, int v) const;
  std::vector<int> degrees() const;
  std::vector<std::vector<int>> adjacency() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
};

using Rational = boost::rational<std::int64_t>;

// Edge-list text: one "u v" per line, optional "vertices N" header, '#'
// comments and blank lines ignored.
Graph parse_edge_list(std::string_view text);
std::string to_edge_list(const Graph& g);

nlohmann::json graph_to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);

// Small named graphs: "K2", "K3", "C4", "P4" (path on 4 vertices),
// "K1,3" (star), "K2,3", "E3" (edgeless), "PAW" (triangle plus one pendant
// edge), "NET" (triangle with a pendant edge at every vertex). "A+B" is a
// disjoint union, "2*A" two copies.
Graph named_graph(std::string_view name);

Graph cycle_graph(int n);
Graph path_graph(int vertices);
Graph complete_graph(int n);
Graph star_graph(int leaves);
Graph complete_bipartite_graph(int a, int b);
Graph disjoint_union(const Graph& a, const Graph& b);
Graph disjoint_copies(const Graph& g, int k);
// perm[v] is the new label of v.
Graph relabel(const Graph& g, std::span<const int> perm);

struct Component {
  Graph graph;                // relabelled 0..|vertices|-1 in increasing order
  std::vector<int> vertices;  // original labels, sorted
  bool singleton = false;
};

// Ordered by smallest original vertex.
std::vector<Component> components(const Graph& g);
bool is_connected(const Graph& g);

// Witness maps each vertex of g1 to a vertex of g2.
std::optional<std::vector<int>> find_isomorphism(const Graph& g1, const Graph& g2);
bool are_isomorphic(const Graph& g1, const Graph& g2);

// Injective map V(f) -> V(h) carrying edges to edges, if one exists.
std::optional<std::vector<int>> find_subgraph_embedding(const Graph& f, const Graph& h);

// 2 e(g) / v(g); throws on the empty graph.
Rational average_degree(const Graph& g);
// e(g) / v(g), the quantity compared in the subgraph density bound.
Rational edge_vertex_ratio(const Graph& g);

struct Subgraph {
  Graph graph;                    // relabelled, no isolated vertices
  std::vector<int> vertices;      // original labels, sorted
  std::vector<int> edge_indices;  // into the host's edges()
};

// Every nonempty edge subset whose endpoints span at most max_vertices
// vertices, each exactly once, in lexicographic order of the sorted
// edge-index lists ({0}, {0,1}, {0,1,2}, ..., {1}, ...). Returning false from
// the callback stops the walk.
void enumerate_subgraphs(const Graph& g, int max_vertices,
                         const std::function<bool(const Subgraph&)>& visit);
std::vector<Subgraph> list_subgraphs(const Graph& g, int max_vertices);

// Both require a connected graph without isolated vertices.
bool is_star(const Graph& g);
bool is_eulerian(const Graph& g);

Graph remove_isolated_vertices(const Graph& g);

}  // namespace graphnorm
