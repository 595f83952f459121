#include "leakproof/flow.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>

#include "leakproof/error.hpp"

namespace leakproof {

GroupFlow::GroupFlow(Graph graph, GroupPtr group) : graph_(std::move(graph)), group_(std::move(group)) {
  incoming_.resize(static_cast<std::size_t>(graph_.vertex_count()));
  for (Vertex v = 0; v < graph_.vertex_count(); ++v)
    incoming_[std::size_t(v)].assign(std::size_t(graph_.degree(v)), group_->identity());
}

Element GroupFlow::operator()(Vertex u, Vertex v) const {
  const int slot = graph_.neighbor_slot(v, u);
  if (slot >= 0) return incoming_[std::size_t(v)][std::size_t(slot)];
  auto it = stray_.find({u, v});
  return it == stray_.end() ? group_->identity() : it->second;
}

void GroupFlow::set(Vertex u, Vertex v, Element x) {
  if (!graph_.has_edge(u, v))
    throw Error(ErrorKind::EdgeMissing, "no edge {" + graph_.label(u) + "," + graph_.label(v) + "}");
  set_raw(u, v, x);
  set_raw(v, u, group_->inv(x));
}

void GroupFlow::set_raw(Vertex u, Vertex v, Element x) {
  const int slot = graph_.neighbor_slot(v, u);
  if (slot >= 0) {
    incoming_[std::size_t(v)][std::size_t(slot)] = x;
  } else if (x == group_->identity()) {
    stray_.erase({u, v});
  } else {
    stray_[{u, v}] = x;
  }
}

std::optional<FlowViolation> validate_flow(const GroupFlow& f) {
  const Graph& g = f.graph();
  const FiniteGroup& grp = f.group();
  for (const Edge& e : g.edges())
    if (f(e.u, e.v) != grp.inv(f(e.v, e.u))) return FlowViolation{FlowViolation::Kind::SkewSymmetry, e.u, e.v};
  for (const auto& [pair, value] : f.off_support()) {
    (void)value;
    return FlowViolation{FlowViolation::Kind::Support, pair.first, pair.second};
  }
  return std::nullopt;
}

namespace {

bool locally_tractable(const GroupFlow& f, Vertex v) {
  const FiniteGroup& grp = f.group();
  const auto& nb = f.graph().neighbors(v);
  for (std::size_t i = 0; i < nb.size(); ++i) {
    const Element a = f(nb[i], v);
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (!grp.commute(a, f(nb[j], v))) return false;
  }
  return true;
}

Element ordered_excess(const GroupFlow& f, Vertex v) {
  Element x = f.group().identity();
  for (Vertex u : f.graph().neighbors(v)) x = f.group().mul(x, f(u, v));
  return x;
}

}  // namespace

Tractability is_tractable(const GroupFlow& f) {
  for (Vertex v = 0; v < f.graph().vertex_count(); ++v)
    if (!locally_tractable(f, v)) return {false, v};
  return {};
}

Element excess(const GroupFlow& f, Vertex v) {
  if (!locally_tractable(f, v))
    throw Error(ErrorKind::NotTractable, "values entering " + f.graph().label(v) + " do not commute");
  return ordered_excess(f, v);
}

Element round_product(const GroupFlow& f, const RotationSystem& r, Vertex v, std::optional<Vertex> start) {
  const auto& ring = r.order(v);
  Element x = f.group().identity();
  if (ring.empty()) return x;
  Vertex u = start.value_or(ring.front());
  for (std::size_t i = 0; i < ring.size(); ++i) {
    x = f.group().mul(x, f(u, v));
    u = r.next(v, u);
  }
  return x;
}

Element round_flow(const GroupFlow& f, const RotationSystem& r, Vertex v) {
  if (!(r.graph() == f.graph())) throw Error(ErrorKind::GraphMismatch, "rotation system is for a different graph");
  return conjugacy_class_id(f.group(), round_product(f, r, v));
}

std::string_view to_string(LeakVerdict::Kind kind) {
  switch (kind) {
    case LeakVerdict::Kind::NotTractable: return "NotTractable";
    case LeakVerdict::Kind::ConservingEverywhere: return "ConservingEverywhere";
    case LeakVerdict::Kind::LeaksAt: return "LeaksAt";
    case LeakVerdict::Kind::MultipleNonConserving: return "MultipleNonConserving";
  }
  return "Unknown";
}

LeakVerdict detect_leak(const GroupFlow& f) {
  LeakVerdict verdict;
  if (const auto t = is_tractable(f); !t) {
    verdict.kind = LeakVerdict::Kind::NotTractable;
    verdict.vertex = t.witness;
    return verdict;
  }
  for (Vertex v = 0; v < f.graph().vertex_count(); ++v)
    if (ordered_excess(f, v) != f.group().identity()) verdict.vertices.push_back(v);
  if (verdict.vertices.empty()) {
    verdict.kind = LeakVerdict::Kind::ConservingEverywhere;
  } else if (verdict.vertices.size() == 1) {
    verdict.kind = LeakVerdict::Kind::LeaksAt;
    verdict.vertex = verdict.vertices.front();
    verdict.value = ordered_excess(f, verdict.vertex);
    verdict.vertices.clear();
  } else {
    verdict.kind = LeakVerdict::Kind::MultipleNonConserving;
  }
  return verdict;
}

std::optional<Element> detect_binary_leak(const GroupFlow& f, Vertex u, Vertex v) {
  if (u == v) throw Error(ErrorKind::ParseError, "binary leak needs two distinct vertices");
  if (!is_tractable(f)) return std::nullopt;
  const FiniteGroup& grp = f.group();
  for (Vertex w = 0; w < f.graph().vertex_count(); ++w)
    if (w != u && w != v && ordered_excess(f, w) != grp.identity()) return std::nullopt;
  const Element value = grp.mul(ordered_excess(f, u), ordered_excess(f, v));
  if (value == grp.identity()) return std::nullopt;
  return value;
}

namespace {

GroupFlow flow_from_words(const Graph& g, const GroupPtr& grp,
                          const std::vector<std::tuple<int, int, const char*>>& entries) {
  GroupFlow f(g, grp);
  for (const auto& [a, b, word] : entries)
    f.set(g.at(std::to_string(a)), g.at(std::to_string(b)), grp->parse_word(word));
  return f;
}

}  // namespace

GroupFlow example_flow_k33() {
  return flow_from_words(named_graph("complete_bipartite:3,3"), es_group(2),
                         {{1, 4, "x1"}, {1, 5, "x2"}, {1, 6, "x1x2"},
                          {2, 4, "x4"}, {2, 5, "x3"}, {2, 6, "x4x3"},
                          {3, 4, "x1x4"}, {3, 5, "x2x3"}, {3, 6, "x1x4x2x3"}});
}

GroupFlow example_flow_k5() {
  return flow_from_words(named_graph("complete:5"), es_group(3),
                         {{1, 2, "x1"}, {1, 3, "x2"}, {1, 4, "x3"}, {1, 5, "x1x2x3"},
                          {2, 3, "x6"}, {2, 4, "x5"}, {2, 5, "x1x6x5"},
                          {3, 4, "x4"}, {3, 5, "x2x6x4"},
                          {4, 5, "x3x5x4"}});
}

GroupFlow example_flow_k33minus() {
  const GroupFlow full = example_flow_k33();
  const Graph& k33 = full.graph();
  const Graph minus = k33.without_edge(k33.at("3"), k33.at("6"));
  GroupFlow f(minus, full.group_ptr());
  for (const Edge& e : minus.edges()) f.set(e.u, e.v, full(e.u, e.v));
  return f;
}

GroupFlow lift_through_subgraph(const Graph& g, const Graph& h, const GroupFlow& f) {
  if (!(f.graph() == h)) throw Error(ErrorKind::GraphMismatch, "flow is not defined on the given subgraph");
  if (!is_subgraph_of(h, g)) throw Error(ErrorKind::NotSubgraph, "not a subgraph of the host");
  GroupFlow out(g, f.group_ptr());
  for (const Edge& e : h.edges()) {
    const Vertex a = g.at(h.label(e.u)), b = g.at(h.label(e.v));
    out.set_raw(a, b, f(e.u, e.v));
    out.set_raw(b, a, f(e.v, e.u));
  }
  return out;
}

GroupFlow uncontract_flow(const Graph& g, Vertex a, Vertex b, const GroupFlow& f) {
  const Contraction c = contract_edge(g, a, b);
  if (!(f.graph() == c.quotient)) throw Error(ErrorKind::GraphMismatch, "flow is not on the contraction of {a,b}");
  if (const auto t = is_tractable(f); !t)
    throw Error(ErrorKind::NotTractable, "flow on the contraction is not tractable at " + c.quotient.label(t.witness));
  const FiniteGroup& grp = f.group();
  const Vertex merged = c.vertex_map[std::size_t(a)];
  auto q = [&](Vertex x) { return c.vertex_map[std::size_t(x)]; };

  GroupFlow out(g, f.group_ptr());
  for (const Edge& e : g.edges()) {
    if (e.u == a || e.u == b || e.v == a || e.v == b) continue;
    out.set_raw(e.u, e.v, f(q(e.u), q(e.v)));
    out.set_raw(e.v, e.u, f(q(e.v), q(e.u)));
  }
  Element across = grp.identity();
  for (Vertex u : g.neighbors(a)) {
    if (u == b) continue;
    const Element x = f(q(u), merged);
    out.set(u, a, x);
    across = grp.mul(across, x);
  }
  for (Vertex v : g.neighbors(b)) {
    if (v == a || g.has_edge(v, a)) continue;
    out.set(v, b, f(q(v), merged));
  }
  out.set(a, b, across);
  return out;
}

namespace {

Vertex image_of(const Graph& from, Vertex v, const Graph& to) { return to.at(from.label(v)); }

}  // namespace

GroupFlow synthesize_leaking_flow(const Graph& g, const MinorWitness& w) {
  if (!verify_minor(g, w)) throw Error(ErrorKind::NotSubgraph, "witness does not certify a minor of the graph");
  const bool k5 = w.model == named_graph("complete:5");
  if (!k5 && !(w.model == named_graph("complete_bipartite:3,3")))
    throw Error(ErrorKind::GraphMismatch, "witness model must be K5 or K3,3");
  const GroupFlow model_flow = k5 ? example_flow_k5() : example_flow_k33();

  // Forest edges plus one connecting edge per model edge.
  std::vector<int> owner(std::size_t(g.vertex_count()), -1);
  for (std::size_t i = 0; i < w.branch_sets.size(); ++i)
    for (Vertex v : w.branch_sets[i]) owner[std::size_t(v)] = int(i);
  std::vector<Edge> keep = w.forest_edges;
  for (const Edge& me : w.model.edges()) {
    bool found = false;
    for (Vertex x : w.branch_sets[std::size_t(me.u)]) {
      for (Vertex y : g.neighbors(x))
        if (owner[std::size_t(y)] == me.v) {
          keep.push_back(Edge::of(x, y));
          found = true;
          break;
        }
      if (found) break;
    }
  }
  const Graph skeleton = g.spanning_subgraph(keep);

  // Contract forest edges leaf first; remember each step for the way back.
  struct Step {
    Graph before;
    Vertex a;
    Vertex b;
  };
  std::vector<Step> steps;
  Graph current = skeleton;
  std::vector<std::pair<std::string, std::string>> forest;
  for (const Edge& e : w.forest_edges) forest.emplace_back(g.label(e.u), g.label(e.v));
  while (!forest.empty()) {
    std::map<std::string, int> degree;
    for (const auto& [x, y] : forest) {
      ++degree[x];
      ++degree[y];
    }
    std::size_t pick = 0;
    bool a_first = true;
    for (std::size_t i = 0; i < forest.size(); ++i) {
      if (degree[forest[i].first] == 1) {
        pick = i;
        a_first = true;
        break;
      }
      if (degree[forest[i].second] == 1) {
        pick = i;
        a_first = false;
        break;
      }
    }
    auto [x, y] = forest[pick];
    if (!a_first) std::swap(x, y);  // x is the leaf
    forest.erase(forest.begin() + long(pick));
    const Vertex a = current.at(x), b = current.at(y);
    Graph next = contract_edge(current, a, b).quotient;
    const std::string merged = vertex_id_less(x, y) ? x : y;
    for (auto& [p, r] : forest) {
      if (p == x || p == y) p = merged;
      if (r == x || r == y) r = merged;
    }
    steps.push_back({std::move(current), a, b});
    current = std::move(next);
  }

  // The fully contracted skeleton: each branch set is named by its smallest member.
  GroupFlow f(current, model_flow.group_ptr());
  auto rep = [&](int model_vertex) {
    const auto& set = w.branch_sets[std::size_t(model_vertex)];
    return current.at(g.label(*std::min_element(set.begin(), set.end(), [&](Vertex p, Vertex r) {
      return vertex_id_less(g.label(p), g.label(r));
    })));
  };
  for (const Edge& me : w.model.edges()) {
    const Vertex mu = image_of(w.model, me.u, model_flow.graph());
    const Vertex mv = image_of(w.model, me.v, model_flow.graph());
    f.set(rep(me.u), rep(me.v), model_flow(mu, mv));
  }
  while (!steps.empty()) {
    Step& s = steps.back();
    f = uncontract_flow(s.before, s.a, s.b, f);
    steps.pop_back();
  }
  GroupFlow lifted = lift_through_subgraph(g, skeleton, f);
  const LeakVerdict verdict = detect_leak(lifted);
  if (verdict.kind != LeakVerdict::Kind::LeaksAt)
    throw Error(ErrorKind::InternalInvariant, "synthesized flow does not leak");
  return lifted;
}

GroupFlow synthesize_leaking_flow(const Graph& g) {
  PlanarityResult r = test_planarity(g);
  if (std::holds_alternative<RotationSystem>(r)) throw Error(ErrorKind::GraphIsPlanar, "planar graphs admit no leak");
  return synthesize_leaking_flow(g, std::get<MinorWitness>(r));
}

GroupFlow conjugate_along_walk(const GroupFlow& f, const RotationSystem& r, Vertex v, Vertex w) {
  const Graph& g = f.graph();
  if (!(r.graph() == g)) throw Error(ErrorKind::GraphMismatch, "rotation system is for a different graph");
  if (!g.has_edge(v, w)) throw Error(ErrorKind::EdgeMissing, "no edge {" + g.label(v) + "," + g.label(w) + "}");
  if (!euler_planar_check(r)) throw Error(ErrorKind::NotPlanarEmbedding, "rotation system is not planar");

  std::set<std::pair<Vertex, Vertex>> walk;
  Vertex a = v, b = w;
  do {
    walk.emplace(a, b);
    const Vertex c = r.next(b, a);
    a = b;
    b = c;
  } while (a != v || b != w);
  if (walk.count({w, v}))
    throw Error(ErrorKind::BridgeEdge, "{" + g.label(v) + "," + g.label(w) + "} is a bridge");

  const FiniteGroup& grp = f.group();
  const Element gamma = f(v, w);
  const Element gamma_inv = grp.inv(gamma);
  GroupFlow out(g, f.group_ptr());
  for (const Edge& e : g.edges())
    for (const auto& [s, t] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
      Element x = f(s, t);
      if (walk.count({t, s})) x = grp.mul(gamma, x);
      if (walk.count({s, t})) x = grp.mul(x, gamma_inv);
      out.set_raw(s, t, x);
    }
  return out;
}

TreeSolveResult solve_tree_flow(const Graph& tree, Vertex root, const GroupFlow& boundary,
                                const std::vector<Element>* targets) {
  const Graph& g = boundary.graph();
  if (tree.labels() != g.labels()) throw Error(ErrorKind::NotSpanning, "tree must span the graph");
  for (const Edge& e : tree.edges())
    if (!g.has_edge(e.u, e.v)) throw Error(ErrorKind::NotSubgraph, "tree edge is not a graph edge");
  if (tree.edge_count() != g.vertex_count() - 1 || !is_forest(tree))
    throw Error(ErrorKind::NotForest, "expected a spanning tree");
  const FiniteGroup& grp = boundary.group();

  std::vector<Vertex> parent(std::size_t(g.vertex_count()), -1);
  std::vector<Vertex> order{root};
  parent[std::size_t(root)] = root;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Vertex c : tree.neighbors(order[i]))
      if (parent[std::size_t(c)] < 0) {
        parent[std::size_t(c)] = order[i];
        order.push_back(c);
      }

  GroupFlow f = boundary;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex c = *it;
    if (c == root) continue;
    const Vertex p = parent[std::size_t(c)];
    Element prefix = grp.identity();
    for (Vertex u : g.neighbors(c))
      if (u != p) prefix = grp.mul(prefix, f(u, c));
    const Element target = targets ? (*targets)[std::size_t(c)] : grp.identity();
    f.set(p, c, grp.mul(grp.inv(prefix), target));
  }
  TreeSolveResult result;
  if (const auto t = is_tractable(f); !t) {
    result.failing_vertex = t.witness;
    return result;
  }
  result.flow = std::move(f);
  return result;
}

}  // namespace leakproof
