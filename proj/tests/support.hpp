#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "leakproof/flow.hpp"
#include "leakproof/graph.hpp"
#include "leakproof/planarity.hpp"

namespace support {

using namespace leakproof;

inline Element random_element(const FiniteGroup& g, std::mt19937_64& rng) {
  return Element(std::uniform_int_distribution<std::size_t>(0, g.order() - 1)(rng));
}

/// Connected planar graph: random spanning tree, then random extra edges kept while planar.
inline Graph random_planar_graph(int n, std::mt19937_64& rng, double extra = 0.6) {
  Graph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(v, int(std::uniform_int_distribution<int>(0, v - 1)(rng)));
  std::vector<std::pair<int, int>> candidates;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!g.has_edge(a, b)) candidates.emplace_back(a, b);
  std::shuffle(candidates.begin(), candidates.end(), rng);
  std::bernoulli_distribution coin(extra);
  for (auto [a, b] : candidates) {
    if (!coin(rng)) continue;
    Graph h = g.with_edge(a, b);
    if (is_planar(h)) g = std::move(h);
  }
  return g;
}

/// Random spanning tree of a connected graph by randomized DFS, optionally forced to use edge (a,b).
inline Graph random_spanning_tree(const Graph& g, std::mt19937_64& rng, std::optional<Edge> force = {}) {
  const int n = g.vertex_count();
  std::vector<int> parent(static_cast<std::size_t>(n), -2);
  std::vector<Edge> keep;
  int start = force ? force->u : int(std::uniform_int_distribution<int>(0, n - 1)(rng));
  std::vector<int> stack{start};
  parent[std::size_t(start)] = -1;
  if (force) {
    parent[std::size_t(force->v)] = force->u;
    keep.push_back(*force);
    stack.push_back(force->v);
  }
  while (!stack.empty()) {
    int v = stack.back();
    std::vector<int> fresh;
    for (int w : g.neighbors(v))
      if (parent[std::size_t(w)] == -2) fresh.push_back(w);
    if (fresh.empty()) {
      stack.pop_back();
      continue;
    }
    int w = fresh[std::uniform_int_distribution<std::size_t>(0, fresh.size() - 1)(rng)];
    parent[std::size_t(w)] = v;
    keep.push_back(Edge::of(v, w));
    stack.push_back(w);
  }
  return g.spanning_subgraph(keep);
}

/// Random values on every edge of g.
inline GroupFlow random_flow(const Graph& g, const GroupPtr& group, std::mt19937_64& rng) {
  GroupFlow f(g, group);
  for (Edge e : g.edges()) f.set(e.u, e.v, random_element(*group, rng));
  return f;
}

/// Values drawn from a fixed subset of the group.
inline GroupFlow random_flow_from(const Graph& g, const GroupPtr& group, const std::vector<Element>& pool,
                                  std::mt19937_64& rng) {
  GroupFlow f(g, group);
  for (Edge e : g.edges()) f.set(e.u, e.v, pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
  return f;
}

}  // namespace support
