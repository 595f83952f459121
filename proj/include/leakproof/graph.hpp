#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace leakproof {

using Vertex = int;

/// Undirected edge with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  static Edge of(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Order on vertex ids: integer-looking ids numerically, then other ids lexicographically.
bool vertex_id_less(std::string_view a, std::string_view b);

/// Finite simple undirected graph.
///
/// Vertices are dense indices 0..n-1 sorted by their string ids (see
/// vertex_id_less); every public listing is in that order.
class Graph {
 public:
  Graph() = default;
  /// Vertices labelled "1".."n", no edges.
  explicit Graph(int n);
  /// Throws ParseError on loops, repeated edges, duplicate or unknown ids.
  Graph(std::vector<std::string> labels, const std::vector<std::pair<std::string, std::string>>& edges);

  int vertex_count() const noexcept { return int(labels_.size()); }
  int edge_count() const noexcept { return int(edges_.size()); }

  const std::string& label(Vertex v) const { return labels_[std::size_t(v)]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<Vertex> find(std::string_view label) const;
  Vertex at(std::string_view label) const;  // throws ParseError

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[std::size_t(v)]; }
  int degree(Vertex v) const { return int(adj_[std::size_t(v)].size()); }
  bool has_edge(Vertex a, Vertex b) const;
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Position of b in neighbors(a), or -1.
  int neighbor_slot(Vertex a, Vertex b) const;

  /// Throws ParseError for loops and repeated edges.
  void add_edge(Vertex a, Vertex b);
  void remove_edge(Vertex a, Vertex b);
  Graph with_edge(Vertex a, Vertex b) const;
  Graph without_edge(Vertex a, Vertex b) const;
  /// Same vertices, only the listed edges (which must be edges of this graph).
  Graph spanning_subgraph(const std::vector<Edge>& keep) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.labels_ == b.labels_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<Vertex>> adj_;  // sorted
  std::vector<Edge> edges_;               // sorted
};

/// complete:n, complete_bipartite:a,b, path:n, cycle:n, petersen, k5minus, k33minus
Graph named_graph(std::string_view name);

/// True when every vertex id of h is an id of g and every edge of h is an edge of g.
bool is_subgraph_of(const Graph& h, const Graph& g);

struct Components {
  std::vector<int> id;                     // component index per vertex
  std::vector<std::vector<Vertex>> parts;  // ordered by smallest member
};

Components components(const Graph& g);
std::vector<Edge> bridges(const Graph& g);
Graph spanning_forest(const Graph& g);
bool is_forest(const Graph& g);

struct Contraction {
  Graph quotient;                // vertex label = label of the smallest member
  std::vector<Vertex> vertex_map;  // host vertex -> quotient vertex
};

/// Contracts every component of the spanning forest h. Throws NotSpanning,
/// NotForest or NotSubgraph.
Contraction contract(const Graph& g, const Graph& h);
Contraction contract_edge(const Graph& g, Vertex a, Vertex b);

struct MinorWitness {
  Graph model;
  std::vector<std::vector<Vertex>> branch_sets;  // per model vertex, host vertices
  std::vector<Edge> forest_edges;                // host edges inside branch sets
};

inline constexpr int kDefaultMaxMinorHost = 16;

/// Exact branch-and-bound search for `model` as a minor of `host`. Throws
/// HostTooLarge above max_host vertices.
std::optional<MinorWitness> find_minor(const Graph& host, const Graph& model,
                                       int max_host = kDefaultMaxMinorHost);
bool verify_minor(const Graph& host, const MinorWitness& witness);
/// Given outer (middle is a minor of host) and inner (model is a minor of
/// middle), a witness for model in host.
MinorWitness compose_minors(const Graph& host, const MinorWitness& outer, const MinorWitness& inner);

}  // namespace leakproof
