#include <algorithm>
#include <numeric>

#include "leakproof/error.hpp"
#include "leakproof/graph.hpp"

namespace leakproof {

namespace {

constexpr int kUnused = -1;
constexpr int kUndecided = -2;

std::vector<std::vector<int>> automorphisms(const Graph& m) {
  const int k = m.vertex_count();
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    bool ok = true;
    for (const Edge& e : m.edges())
      if (!m.has_edge(perm[std::size_t(e.u)], perm[std::size_t(e.v)])) {
        ok = false;
        break;
      }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

class MinorSearch {
 public:
  MinorSearch(const Graph& host, const Graph& model)
      : host_(host), model_(model), k_(model.vertex_count()), n_(host.vertex_count()),
        autos_(automorphisms(model)), assign_(std::size_t(n_), kUndecided) {
    // Process vertices in BFS order from high-degree roots so branch sets grow contiguously.
    std::vector<Vertex> roots(static_cast<std::size_t>(n_));
    std::iota(roots.begin(), roots.end(), 0);
    std::stable_sort(roots.begin(), roots.end(), [&](Vertex a, Vertex b) { return host.degree(a) > host.degree(b); });
    std::vector<char> placed(std::size_t(n_), 0);
    for (Vertex r : roots) {
      if (placed[std::size_t(r)]) continue;
      placed[std::size_t(r)] = 1;
      const std::size_t start = order_.size();
      order_.push_back(r);
      for (std::size_t i = start; i < order_.size(); ++i)
        for (Vertex w : host.neighbors(order_[i]))
          if (!placed[std::size_t(w)]) {
            placed[std::size_t(w)] = 1;
            order_.push_back(w);
          }
    }
  }

  std::optional<MinorWitness> run() {
    if (!search(0)) return std::nullopt;
    MinorWitness w;
    w.model = model_;
    w.branch_sets.assign(std::size_t(k_), {});
    for (Vertex v = 0; v < n_; ++v)
      if (assign_[std::size_t(v)] >= 0) w.branch_sets[std::size_t(assign_[std::size_t(v)])].push_back(v);
    for (const auto& set : w.branch_sets) {
      std::vector<char> in(std::size_t(n_), 0), done(std::size_t(n_), 0);
      for (Vertex v : set) in[std::size_t(v)] = 1;
      std::vector<Vertex> queue{set.front()};
      done[std::size_t(set.front())] = 1;
      for (std::size_t i = 0; i < queue.size(); ++i)
        for (Vertex y : host_.neighbors(queue[i]))
          if (in[std::size_t(y)] && !done[std::size_t(y)]) {
            done[std::size_t(y)] = 1;
            w.forest_edges.push_back(Edge::of(queue[i], y));
            queue.push_back(y);
          }
    }
    std::sort(w.forest_edges.begin(), w.forest_edges.end());
    return w;
  }

 private:
  // Vertices reachable from branch set `label` through itself and undecided vertices.
  std::vector<char> reach(int label, bool& connected) {
    std::vector<char> r(std::size_t(n_), 0);
    std::vector<Vertex> queue;
    int members = 0;
    for (Vertex v = 0; v < n_; ++v)
      if (assign_[std::size_t(v)] == label) {
        ++members;
        if (queue.empty()) {
          queue.push_back(v);
          r[std::size_t(v)] = 1;
        }
      }
    int reached = queue.empty() ? 0 : 1;
    for (std::size_t i = 0; i < queue.size(); ++i)
      for (Vertex w : host_.neighbors(queue[i])) {
        const int a = assign_[std::size_t(w)];
        if (r[std::size_t(w)] || (a != label && a != kUndecided)) continue;
        r[std::size_t(w)] = 1;
        if (a == label) ++reached;
        queue.push_back(w);
      }
    connected = reached == members;
    return r;
  }

  bool feasible(int pos) {
    const int remaining = n_ - pos;
    if (k_ - int(introduced_.size()) > remaining) return false;
    std::vector<std::vector<char>> reaches(static_cast<std::size_t>(k_));
    for (int label : introduced_) {
      bool connected = false;
      reaches[std::size_t(label)] = reach(label, connected);
      if (!connected) return false;
    }
    for (const Edge& e : model_.edges()) {
      const auto& ru = reaches[std::size_t(e.u)];
      const auto& rv = reaches[std::size_t(e.v)];
      if (ru.empty() || rv.empty()) continue;
      bool ok = false;
      for (Vertex x = 0; x < n_ && !ok; ++x) {
        if (!ru[std::size_t(x)]) continue;
        if (rv[std::size_t(x)]) ok = true;
        for (Vertex y : host_.neighbors(x))
          if (rv[std::size_t(y)]) {
            ok = true;
            break;
          }
      }
      if (!ok) return false;
    }
    return true;
  }

  bool complete() const {
    std::vector<char> adjacent(std::size_t(k_ * k_), 0);
    for (const Edge& e : host_.edges()) {
      const int a = assign_[std::size_t(e.u)], b = assign_[std::size_t(e.v)];
      if (a >= 0 && b >= 0 && a != b) adjacent[std::size_t(a * k_ + b)] = adjacent[std::size_t(b * k_ + a)] = 1;
    }
    for (const Edge& e : model_.edges())
      if (!adjacent[std::size_t(e.u * k_ + e.v)]) return false;
    return true;
  }

  // New labels worth trying: one representative per orbit of the stabiliser of the labels in use.
  std::vector<int> fresh_labels() const {
    std::vector<char> used(std::size_t(k_), 0);
    for (int l : introduced_) used[std::size_t(l)] = 1;
    std::vector<const std::vector<int>*> stab;
    for (const auto& perm : autos_) {
      bool fixes = true;
      for (int l : introduced_)
        if (perm[std::size_t(l)] != l) {
          fixes = false;
          break;
        }
      if (fixes) stab.push_back(&perm);
    }
    std::vector<int> out;
    for (int l = 0; l < k_; ++l) {
      if (used[std::size_t(l)]) continue;
      bool minimal = true;
      for (const auto* perm : stab)
        if ((*perm)[std::size_t(l)] < l) {
          minimal = false;
          break;
        }
      if (minimal) out.push_back(l);
    }
    return out;
  }

  bool search(int pos) {
    if (!feasible(pos)) return false;
    if (pos == n_) return int(introduced_.size()) == k_ && complete();
    const Vertex v = order_[std::size_t(pos)];

    for (int label : std::vector<int>(introduced_)) {
      assign_[std::size_t(v)] = label;
      if (search(pos + 1)) return true;
    }
    for (int label : fresh_labels()) {
      assign_[std::size_t(v)] = label;
      introduced_.push_back(label);
      if (search(pos + 1)) return true;
      introduced_.pop_back();
    }
    assign_[std::size_t(v)] = kUnused;
    if (search(pos + 1)) return true;
    assign_[std::size_t(v)] = kUndecided;
    return false;
  }

  const Graph& host_;
  const Graph& model_;
  int k_;
  int n_;
  std::vector<std::vector<int>> autos_;
  std::vector<int> assign_;
  std::vector<Vertex> order_;
  std::vector<int> introduced_;
};

}  // namespace

std::optional<MinorWitness> find_minor(const Graph& host, const Graph& model, int max_host) {
  if (host.vertex_count() > max_host)
    throw Error(ErrorKind::HostTooLarge, "host has " + std::to_string(host.vertex_count()) +
                                             " vertices, limit is " + std::to_string(max_host));
  if (model.vertex_count() == 0) return MinorWitness{model, {}, {}};
  if (model.vertex_count() > host.vertex_count() || model.edge_count() > host.edge_count()) return std::nullopt;
  return MinorSearch(host, model).run();
}

bool verify_minor(const Graph& host, const MinorWitness& w) {
  const int k = w.model.vertex_count();
  if (int(w.branch_sets.size()) != k) return false;
  std::vector<int> owner(std::size_t(host.vertex_count()), -1);
  for (int i = 0; i < k; ++i) {
    if (w.branch_sets[std::size_t(i)].empty()) return false;
    for (Vertex v : w.branch_sets[std::size_t(i)]) {
      if (v < 0 || v >= host.vertex_count() || owner[std::size_t(v)] >= 0) return false;
      owner[std::size_t(v)] = i;
    }
  }
  // Forest edges: host edges inside one branch set, acyclic, spanning each set.
  std::vector<int> parent(std::size_t(host.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[std::size_t(x)] != x) x = parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
    return x;
  };
  for (const Edge& e : w.forest_edges) {
    if (e.u < 0 || e.v >= host.vertex_count() || !host.has_edge(e.u, e.v)) return false;
    if (owner[std::size_t(e.u)] < 0 || owner[std::size_t(e.u)] != owner[std::size_t(e.v)]) return false;
    const int a = root(e.u), b = root(e.v);
    if (a == b) return false;
    parent[std::size_t(a)] = b;
  }
  for (const auto& set : w.branch_sets)
    for (Vertex v : set)
      if (root(v) != root(set.front())) return false;
  for (const Edge& e : w.model.edges()) {
    bool found = false;
    for (Vertex x : w.branch_sets[std::size_t(e.u)]) {
      for (Vertex y : host.neighbors(x))
        if (owner[std::size_t(y)] == e.v) {
          found = true;
          break;
        }
      if (found) break;
    }
    if (!found) return false;
  }
  return true;
}

MinorWitness compose_minors(const Graph& host, const MinorWitness& outer, const MinorWitness& inner) {
  MinorWitness w;
  w.model = inner.model;
  std::vector<int> owner_mid(std::size_t(outer.model.vertex_count()), -1);
  for (std::size_t x = 0; x < inner.branch_sets.size(); ++x) {
    std::vector<Vertex> set;
    for (Vertex h : inner.branch_sets[x]) {
      owner_mid[std::size_t(h)] = int(x);
      const auto& part = outer.branch_sets[std::size_t(h)];
      set.insert(set.end(), part.begin(), part.end());
    }
    std::sort(set.begin(), set.end());
    w.branch_sets.push_back(std::move(set));
  }
  for (const Edge& e : outer.forest_edges) {
    for (std::size_t h = 0; h < outer.branch_sets.size(); ++h) {
      const auto& part = outer.branch_sets[h];
      if (std::find(part.begin(), part.end(), e.u) == part.end()) continue;
      if (owner_mid[h] >= 0) w.forest_edges.push_back(e);
      break;
    }
  }
  for (const Edge& mid : inner.forest_edges) {
    const auto& a = outer.branch_sets[std::size_t(mid.u)];
    const auto& b = outer.branch_sets[std::size_t(mid.v)];
    bool linked = false;
    for (Vertex x : a) {
      for (Vertex y : b)
        if (host.has_edge(x, y)) {
          w.forest_edges.push_back(Edge::of(x, y));
          linked = true;
          break;
        }
      if (linked) break;
    }
    if (!linked) throw Error(ErrorKind::InternalInvariant, "outer witness does not realise a middle edge");
  }
  std::sort(w.forest_edges.begin(), w.forest_edges.end());
  return w;
}

}  // namespace leakproof
