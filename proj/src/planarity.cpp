#include "leakproof/planarity.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "leakproof/error.hpp"

namespace leakproof {

RotationSystem::RotationSystem(Graph graph, std::vector<std::vector<Vertex>> order)
    : graph_(std::move(graph)), order_(std::move(order)) {
  const int n = graph_.vertex_count();
  if (int(order_.size()) != n) throw Error(ErrorKind::GraphMismatch, "rotation must list every vertex");
  position_.assign(std::size_t(n), {});
  for (Vertex v = 0; v < n; ++v) {
    const auto& ring = order_[std::size_t(v)];
    auto& pos = position_[std::size_t(v)];
    pos.assign(std::size_t(graph_.degree(v)), -1);
    if (int(ring.size()) != graph_.degree(v))
      throw Error(ErrorKind::GraphMismatch, "rotation at " + graph_.label(v) + " is not a permutation of its neighbours");
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const int slot = graph_.neighbor_slot(v, ring[i]);
      if (slot < 0 || pos[std::size_t(slot)] >= 0)
        throw Error(ErrorKind::GraphMismatch, "rotation at " + graph_.label(v) + " is not a permutation of its neighbours");
      pos[std::size_t(slot)] = int(i);
    }
  }
}

Vertex RotationSystem::next(Vertex v, Vertex u) const {
  const int slot = graph_.neighbor_slot(v, u);
  if (slot < 0) throw Error(ErrorKind::EdgeMissing, "no edge {" + graph_.label(v) + "," + graph_.label(u) + "}");
  const auto& ring = order_[std::size_t(v)];
  const auto i = std::size_t(position_[std::size_t(v)][std::size_t(slot)]);
  return ring[(i + 1) % ring.size()];
}

std::vector<BoundaryWalk> faces(const RotationSystem& r) {
  const Graph& g = r.graph();
  std::vector<std::vector<char>> used(std::size_t(g.vertex_count()));
  for (Vertex v = 0; v < g.vertex_count(); ++v) used[std::size_t(v)].assign(std::size_t(g.degree(v)), 0);
  std::vector<BoundaryWalk> out;
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    for (Vertex v : g.neighbors(u)) {
      if (used[std::size_t(u)][std::size_t(g.neighbor_slot(u, v))]) continue;
      BoundaryWalk walk{{u}};
      Vertex a = u, b = v;
      do {
        used[std::size_t(a)][std::size_t(g.neighbor_slot(a, b))] = 1;
        walk.sequence.push_back(b);
        const Vertex c = r.next(b, a);
        a = b;
        b = c;
      } while (a != u || b != v);
      out.push_back(std::move(walk));
    }
  return out;
}

bool euler_planar_check(const RotationSystem& r) {
  const Graph& g = r.graph();
  const Components comps = components(g);
  const std::size_t k = comps.parts.size();
  std::vector<long> v_count(k, 0), e_count(k, 0), f_count(k, 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) ++v_count[std::size_t(comps.id[std::size_t(v)])];
  for (const Edge& e : g.edges()) ++e_count[std::size_t(comps.id[std::size_t(e.u)])];
  for (const auto& walk : faces(r)) ++f_count[std::size_t(comps.id[std::size_t(walk.sequence.front())])];
  for (std::size_t c = 0; c < k; ++c)
    if (e_count[c] > 0 && v_count[c] - e_count[c] + f_count[c] != 2) return false;
  return true;
}

namespace {

// Biconnected blocks as edge lists (Tarjan with an edge stack).
std::vector<std::vector<Edge>> blocks(const Graph& g) {
  const auto n = std::size_t(g.vertex_count());
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<std::vector<Edge>> out;
  std::vector<Edge> edge_stack;
  int time = 0;
  struct Frame {
    Vertex v;
    Vertex parent;
    std::size_t next;
  };
  for (Vertex root = 0; root < g.vertex_count(); ++root) {
    if (disc[std::size_t(root)] >= 0) continue;
    std::vector<Frame> stack{{root, -1, 0}};
    disc[std::size_t(root)] = low[std::size_t(root)] = time++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& nb = g.neighbors(f.v);
      if (f.next < nb.size()) {
        const Vertex w = nb[f.next++];
        if (w == f.parent) continue;
        if (disc[std::size_t(w)] < 0) {
          edge_stack.push_back(Edge::of(f.v, w));
          disc[std::size_t(w)] = low[std::size_t(w)] = time++;
          stack.push_back({w, f.v, 0});
        } else if (disc[std::size_t(w)] < disc[std::size_t(f.v)]) {
          edge_stack.push_back(Edge::of(f.v, w));
          low[std::size_t(f.v)] = std::min(low[std::size_t(f.v)], disc[std::size_t(w)]);
        }
      } else {
        const Frame done = f;
        stack.pop_back();
        if (done.parent < 0) continue;
        auto& lp = low[std::size_t(done.parent)];
        lp = std::min(lp, low[std::size_t(done.v)]);
        if (low[std::size_t(done.v)] >= disc[std::size_t(done.parent)]) {
          const Edge stop = Edge::of(done.parent, done.v);
          std::vector<Edge> block;
          while (true) {
            const Edge e = edge_stack.back();
            edge_stack.pop_back();
            block.push_back(e);
            if (e == stop) break;
          }
          std::sort(block.begin(), block.end());
          out.push_back(std::move(block));
        }
      }
    }
  }
  return out;
}

// Demoucron-Malgrange-Pertuiset path addition on one biconnected block.
// On success returns the faces of the embedding (local vertex ids).
class BlockEmbedder {
 public:
  explicit BlockEmbedder(const std::vector<Edge>& block) {
    for (const Edge& e : block) {
      local_of(e.u);
      local_of(e.v);
    }
    n_ = int(global_.size());
    adj_.assign(std::size_t(n_), {});
    in_h_edge_.assign(std::size_t(n_ * n_), 0);
    for (const Edge& e : block) {
      const int a = local_.at(e.u), b = local_.at(e.v);
      adj_[std::size_t(a)].push_back(b);
      adj_[std::size_t(b)].push_back(a);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());
    edge_total_ = int(block.size());
  }

  bool run() {
    in_h_vertex_.assign(std::size_t(n_), 0);
    std::fill(in_h_edge_.begin(), in_h_edge_.end(), 0);
    faces_.clear();
    h_edges_ = 0;

    // Initial cycle through the edge {0, adj[0][0]}.
    const int s = 0, t = adj_[0][0];
    std::vector<int> parent(std::size_t(n_), -1);
    std::vector<int> queue{t};
    parent[std::size_t(t)] = t;
    for (std::size_t i = 0; i < queue.size() && parent[std::size_t(s)] < 0; ++i)
      for (int w : adj_[std::size_t(queue[i])]) {
        if (parent[std::size_t(w)] >= 0 || (queue[i] == t && w == s)) continue;
        parent[std::size_t(w)] = queue[i];
        queue.push_back(w);
      }
    if (parent[std::size_t(s)] < 0) throw Error(ErrorKind::InternalInvariant, "block without a cycle");
    std::vector<int> cycle;
    for (int x = s; x != t; x = parent[std::size_t(x)]) cycle.push_back(x);
    cycle.push_back(t);
    for (std::size_t i = 0; i < cycle.size(); ++i) add_to_h(cycle[i], cycle[(i + 1) % cycle.size()]);
    faces_.push_back(cycle);
    faces_.emplace_back(cycle.rbegin(), cycle.rend());

    while (h_edges_ < edge_total_) {
      const auto frags = fragments();
      std::vector<std::vector<char>> face_has(faces_.size(), std::vector<char>(std::size_t(n_), 0));
      for (std::size_t f = 0; f < faces_.size(); ++f)
        for (int x : faces_[f]) face_has[f][std::size_t(x)] = 1;

      int chosen = -1, chosen_face = -1;
      for (std::size_t i = 0; i < frags.size(); ++i) {
        int count = 0, first = -1;
        for (std::size_t f = 0; f < faces_.size(); ++f) {
          bool all = true;
          for (int a : frags[i].attachments)
            if (!face_has[f][std::size_t(a)]) {
              all = false;
              break;
            }
          if (all) {
            if (count == 0) first = int(f);
            ++count;
          }
        }
        if (count == 0) return false;
        if (chosen < 0 || count == 1) {
          chosen = int(i);
          chosen_face = first;
          if (count == 1) break;
        }
      }
      embed_path(fragment_path(frags[std::size_t(chosen)]), std::size_t(chosen_face));
    }
    return true;
  }

  // Rotation at every block vertex in global ids.
  std::map<Vertex, std::vector<Vertex>> rotation() const {
    std::vector<std::map<int, int>> succ(static_cast<std::size_t>(n_));
    for (const auto& face : faces_) {
      const std::size_t len = face.size();
      for (std::size_t i = 0; i < len; ++i)
        succ[std::size_t(face[(i + 1) % len])][face[i]] = face[(i + 2) % len];
    }
    std::map<Vertex, std::vector<Vertex>> out;
    for (int v = 0; v < n_; ++v) {
      const auto& next = succ[std::size_t(v)];
      std::vector<Vertex> ring;
      int u = adj_[std::size_t(v)].front();
      do {
        ring.push_back(global_[std::size_t(u)]);
        u = next.at(u);
      } while (u != adj_[std::size_t(v)].front() && ring.size() <= adj_[std::size_t(v)].size());
      if (ring.size() != adj_[std::size_t(v)].size())
        throw Error(ErrorKind::InternalInvariant, "faces do not close into a rotation");
      out.emplace(global_[std::size_t(v)], std::move(ring));
    }
    return out;
  }

 private:
  struct Fragment {
    std::vector<int> attachments;  // sorted
    std::vector<int> interior;     // empty for a chord
  };

  int local_of(Vertex v) {
    auto [it, inserted] = local_.emplace(v, int(global_.size()));
    if (inserted) global_.push_back(v);
    return it->second;
  }

  void add_to_h(int a, int b) {
    in_h_vertex_[std::size_t(a)] = in_h_vertex_[std::size_t(b)] = 1;
    in_h_edge_[std::size_t(a * n_ + b)] = in_h_edge_[std::size_t(b * n_ + a)] = 1;
    ++h_edges_;
  }

  std::vector<Fragment> fragments() const {
    std::vector<Fragment> out;
    for (int a = 0; a < n_; ++a) {
      if (!in_h_vertex_[std::size_t(a)]) continue;
      for (int b : adj_[std::size_t(a)])
        if (a < b && in_h_vertex_[std::size_t(b)] && !in_h_edge_[std::size_t(a * n_ + b)]) out.push_back({{a, b}, {}});
    }
    std::vector<char> seen(std::size_t(n_), 0);
    for (int s = 0; s < n_; ++s) {
      if (in_h_vertex_[std::size_t(s)] || seen[std::size_t(s)]) continue;
      Fragment frag;
      std::vector<char> attached(std::size_t(n_), 0);
      frag.interior.push_back(s);
      seen[std::size_t(s)] = 1;
      for (std::size_t i = 0; i < frag.interior.size(); ++i)
        for (int w : adj_[std::size_t(frag.interior[i])]) {
          if (in_h_vertex_[std::size_t(w)]) {
            attached[std::size_t(w)] = 1;
          } else if (!seen[std::size_t(w)]) {
            seen[std::size_t(w)] = 1;
            frag.interior.push_back(w);
          }
        }
      for (int x = 0; x < n_; ++x)
        if (attached[std::size_t(x)]) frag.attachments.push_back(x);
      out.push_back(std::move(frag));
    }
    return out;
  }

  // A path through the fragment between two distinct attachment vertices.
  std::vector<int> fragment_path(const Fragment& frag) const {
    if (frag.interior.empty()) return frag.attachments;
    const int a = frag.attachments.front();
    std::vector<char> inside(std::size_t(n_), 0);
    for (int x : frag.interior) inside[std::size_t(x)] = 1;
    std::vector<int> parent(std::size_t(n_), -1);
    std::vector<int> queue;
    for (int w : adj_[std::size_t(a)])
      if (inside[std::size_t(w)]) {
        parent[std::size_t(w)] = a;
        queue.push_back(w);
      }
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const int x = queue[i];
      for (int w : adj_[std::size_t(x)]) {
        if (in_h_vertex_[std::size_t(w)] && w != a) {
          std::vector<int> path{w};
          for (int y = x; y != a; y = parent[std::size_t(y)]) path.push_back(y);
          path.push_back(a);
          std::reverse(path.begin(), path.end());
          return path;
        }
        if (inside[std::size_t(w)] && parent[std::size_t(w)] < 0) {
          parent[std::size_t(w)] = x;
          queue.push_back(w);
        }
      }
    }
    throw Error(ErrorKind::InternalInvariant, "fragment with a single attachment inside a block");
  }

  void embed_path(const std::vector<int>& path, std::size_t face_index) {
    const std::vector<int> face = faces_[face_index];
    const std::size_t len = face.size();
    const std::size_t i = std::size_t(std::find(face.begin(), face.end(), path.front()) - face.begin());
    const std::size_t j = std::size_t(std::find(face.begin(), face.end(), path.back()) - face.begin());
    std::vector<int> first, second;
    for (std::size_t k = i;; k = (k + 1) % len) {
      first.push_back(face[k]);
      if (k == j) break;
    }
    for (std::size_t k = path.size() - 2; k >= 1; --k) first.push_back(path[k]);
    for (std::size_t k = j;; k = (k + 1) % len) {
      second.push_back(face[k]);
      if (k == i) break;
    }
    for (std::size_t k = 1; k + 1 < path.size(); ++k) second.push_back(path[k]);
    faces_[face_index] = std::move(first);
    faces_.push_back(std::move(second));
    for (std::size_t k = 0; k + 1 < path.size(); ++k) add_to_h(path[k], path[k + 1]);
  }

  int n_ = 0;
  int edge_total_ = 0;
  int h_edges_ = 0;
  std::map<Vertex, int> local_;
  std::vector<Vertex> global_;
  std::vector<std::vector<int>> adj_;
  std::vector<char> in_h_vertex_;
  std::vector<char> in_h_edge_;
  std::vector<std::vector<int>> faces_;
};

bool block_is_planar(const std::vector<Edge>& block) {
  if (block.size() < 9) return true;  // fewer edges than K3,3
  BlockEmbedder embedder(block);
  return embedder.run();
}

bool edges_planar(const Graph& g) {
  const long n = g.vertex_count(), m = g.edge_count();
  if (n >= 3 && m > 3 * n - 6) return false;
  for (const auto& block : blocks(g))
    if (!block_is_planar(block)) return false;
  return true;
}

// Shrinks a non-planar graph to a Kuratowski subdivision and reads off its branch sets.
MinorWitness kuratowski_witness(const Graph& g, std::vector<Edge> edges) {
  for (std::size_t i = 0; i < edges.size();) {
    std::vector<Edge> fewer = edges;
    fewer.erase(fewer.begin() + long(i));
    if (!edges_planar(g.spanning_subgraph(fewer))) {
      edges = std::move(fewer);
    } else {
      ++i;
    }
  }
  const Graph s = g.spanning_subgraph(edges);
  std::vector<Vertex> branch;
  for (Vertex v = 0; v < s.vertex_count(); ++v)
    if (s.degree(v) >= 3) branch.push_back(v);
  const bool k5 = branch.size() == 5 && std::all_of(branch.begin(), branch.end(), [&](Vertex v) { return s.degree(v) == 4; });
  const bool k33 = branch.size() == 6 && std::all_of(branch.begin(), branch.end(), [&](Vertex v) { return s.degree(v) == 3; });
  if (!k5 && !k33) throw Error(ErrorKind::InternalInvariant, "minimal non-planar subgraph is not a Kuratowski subdivision");

  std::vector<int> model_of(std::size_t(g.vertex_count()), -1);
  std::vector<std::vector<Vertex>> links(std::size_t(g.vertex_count()));
  struct Path {
    Vertex from, to;
    std::vector<Vertex> interior;
  };
  std::vector<Path> paths;
  std::vector<char> is_branch(std::size_t(g.vertex_count()), 0);
  for (Vertex b : branch) is_branch[std::size_t(b)] = 1;
  for (Vertex b : branch)
    for (Vertex x : s.neighbors(b)) {
      Path p{b, -1, {}};
      Vertex prev = b, cur = x;
      while (!is_branch[std::size_t(cur)]) {
        p.interior.push_back(cur);
        const auto& nb = s.neighbors(cur);
        const Vertex nxt = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = nxt;
      }
      p.to = cur;
      links[std::size_t(b)].push_back(cur);
      if (b < cur) paths.push_back(std::move(p));
    }

  if (k5) {
    for (std::size_t i = 0; i < branch.size(); ++i) model_of[std::size_t(branch[i])] = int(i);
  } else {
    // Two-colour the branch vertices; the side of the smallest one becomes 1,2,3.
    std::vector<int> side(std::size_t(g.vertex_count()), -1);
    side[std::size_t(branch.front())] = 0;
    for (Vertex w : links[std::size_t(branch.front())]) side[std::size_t(w)] = 1;
    int next_label[2] = {0, 3};
    for (Vertex b : branch) {
      if (side[std::size_t(b)] < 0) side[std::size_t(b)] = 0;
      model_of[std::size_t(b)] = next_label[side[std::size_t(b)]]++;
    }
    if (next_label[0] != 3 || next_label[1] != 6)
      throw Error(ErrorKind::InternalInvariant, "K3,3 subdivision is not bipartite on its branch vertices");
  }

  MinorWitness w;
  w.model = named_graph(k5 ? "complete:5" : "complete_bipartite:3,3");
  w.branch_sets.assign(branch.size(), {});
  for (Vertex b : branch) w.branch_sets[std::size_t(model_of[std::size_t(b)])].push_back(b);
  for (const Path& p : paths) {
    auto& set = w.branch_sets[std::size_t(model_of[std::size_t(p.from)])];
    Vertex prev = p.from;
    for (Vertex x : p.interior) {
      set.push_back(x);
      w.forest_edges.push_back(Edge::of(prev, x));
      prev = x;
    }
  }
  for (auto& set : w.branch_sets) std::sort(set.begin(), set.end());
  std::sort(w.forest_edges.begin(), w.forest_edges.end());
  return w;
}

}  // namespace

bool is_planar(const Graph& g) { return edges_planar(g); }

PlanarityResult test_planarity(const Graph& g) {
  const long n = g.vertex_count(), m = g.edge_count();
  std::vector<std::vector<Vertex>> order(static_cast<std::size_t>(n));
  std::optional<std::vector<Edge>> failing;
  if (n >= 3 && m > 3 * n - 6) failing = g.edges();
  if (!failing) {
    for (const auto& block : blocks(g)) {
      if (block.size() == 1) {
        order[std::size_t(block[0].u)].push_back(block[0].v);
        order[std::size_t(block[0].v)].push_back(block[0].u);
        continue;
      }
      BlockEmbedder embedder(block);
      if (!embedder.run()) {
        failing = block;
        break;
      }
      for (auto& [v, ring] : embedder.rotation())
        order[std::size_t(v)].insert(order[std::size_t(v)].end(), ring.begin(), ring.end());
    }
  }
  if (failing) {
    MinorWitness w = kuratowski_witness(g, *failing);
    if (!verify_minor(g, w)) throw Error(ErrorKind::InternalInvariant, "Kuratowski witness failed verification");
    return w;
  }
  RotationSystem r(g, std::move(order));
  if (!euler_planar_check(r)) throw Error(ErrorKind::InternalInvariant, "embedding failed the Euler check");
  return r;
}

std::vector<Edge> walk_bridge_check(const RotationSystem& r, const BoundaryWalk& walk) {
  if (!euler_planar_check(r)) throw Error(ErrorKind::NotPlanarEmbedding, "rotation system is not planar");
  std::set<std::pair<Vertex, Vertex>> directed;
  for (std::size_t i = 0; i + 1 < walk.sequence.size(); ++i) directed.emplace(walk.sequence[i], walk.sequence[i + 1]);
  std::vector<Edge> out;
  for (const auto& [a, b] : directed)
    if (a < b && directed.count({b, a})) out.push_back(Edge{a, b});
  return out;
}

ExtraPlanarResult extra_planar(const Graph& g) {
  ExtraPlanarResult result;
  const PlanarityResult base = test_planarity(g);
  if (const auto* r = std::get_if<RotationSystem>(&base)) result.base = *r;
  for (Vertex u = 0; u < g.vertex_count(); ++u)
    for (Vertex v = u + 1; v < g.vertex_count(); ++v) {
      if (g.has_edge(u, v)) {
        if (result.base) continue;
        result.failing_pair = Edge{u, v};
        result.witness = std::get<MinorWitness>(base);
        return result;
      }
      PlanarityResult plus = test_planarity(g.with_edge(u, v));
      if (auto* w = std::get_if<MinorWitness>(&plus)) {
        result.failing_pair = Edge{u, v};
        result.witness = std::move(*w);
        result.added.clear();
        return result;
      }
      result.added.push_back({Edge{u, v}, std::get<RotationSystem>(std::move(plus))});
    }
  result.extra_planar = true;
  return result;
}

Graph witness_host(const Graph& g, const ExtraPlanarResult& result) {
  if (!result.failing_pair || g.has_edge(result.failing_pair->u, result.failing_pair->v)) return g;
  return g.with_edge(result.failing_pair->u, result.failing_pair->v);
}

}  // namespace leakproof
