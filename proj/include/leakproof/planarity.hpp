#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "leakproof/graph.hpp"

namespace leakproof {

/// Cyclic order of the neighbours around every vertex.
class RotationSystem {
 public:
  RotationSystem() = default;
  /// order[v] must be a permutation of graph.neighbors(v); throws GraphMismatch.
  RotationSystem(Graph graph, std::vector<std::vector<Vertex>> order);

  const Graph& graph() const noexcept { return graph_; }
  const std::vector<Vertex>& order(Vertex v) const { return order_[std::size_t(v)]; }
  /// rho(v)(u): the neighbour after u around v.
  Vertex next(Vertex v, Vertex u) const;

 private:
  Graph graph_;
  std::vector<std::vector<Vertex>> order_;
  std::vector<std::vector<int>> position_;  // position_[v][slot of u in neighbors(v)]
};

struct BoundaryWalk {
  std::vector<Vertex> sequence;  // closed: front() == back()

  std::size_t length() const noexcept { return sequence.empty() ? 0 : sequence.size() - 1; }
};

/// Orbits of (u,v) -> (v, rho(v)(u)), started from directed edges in increasing order.
std::vector<BoundaryWalk> faces(const RotationSystem& r);
/// V - E + F == 2 on every component with an edge.
bool euler_planar_check(const RotationSystem& r);

using PlanarityResult = std::variant<RotationSystem, MinorWitness>;

/// Rotation system passing euler_planar_check, or a K5 / K3,3 minor witness.
PlanarityResult test_planarity(const Graph& g);
/// Just the verdict, without building a certificate.
bool is_planar(const Graph& g);

/// Edges traversed in both directions by `walk`. Throws NotPlanarEmbedding.
std::vector<Edge> walk_bridge_check(const RotationSystem& r, const BoundaryWalk& walk);

struct PairEmbedding {
  Edge pair;
  RotationSystem embedding;
};

struct ExtraPlanarResult {
  bool extra_planar = false;
  std::optional<RotationSystem> base;   // embedding of the graph itself
  std::vector<PairEmbedding> added;     // one per non-adjacent pair, when extra-planar
  std::optional<Edge> failing_pair;
  std::optional<MinorWitness> witness;  // witness for graph + failing_pair
};

ExtraPlanarResult extra_planar(const Graph& g);

// The graph the witness lives in: g itself when g is already non-planar, g plus the failing pair otherwise.
Graph witness_host(const Graph& g, const ExtraPlanarResult& result);

}  // namespace leakproof
