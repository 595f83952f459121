#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "leakproof/graph.hpp"
#include "leakproof/group.hpp"
#include "leakproof/planarity.hpp"

namespace leakproof {

/// A map f from ordered vertex pairs to group elements.
///
/// Values on edges live in per-vertex slots; anything written on a non-edge
/// is kept separately so that validate_flow can report it.
class GroupFlow {
 public:
  /// The all-identity flow.
  GroupFlow(Graph graph, GroupPtr group);

  const Graph& graph() const noexcept { return graph_; }
  const FiniteGroup& group() const noexcept { return *group_; }
  const GroupPtr& group_ptr() const noexcept { return group_; }

  /// f(u,v); identity for non-edges that were never written.
  Element operator()(Vertex u, Vertex v) const;
  /// f(u,v) = x and f(v,u) = x^-1. Throws EdgeMissing for non-edges.
  void set(Vertex u, Vertex v, Element x);
  /// Writes f(u,v) only.
  void set_raw(Vertex u, Vertex v, Element x);

  const std::map<std::pair<Vertex, Vertex>, Element>& off_support() const noexcept { return stray_; }

  /// Groups compare by identity, or by spec string when both were built from one.
  friend bool operator==(const GroupFlow& a, const GroupFlow& b) {
    const bool same_group = a.group_ == b.group_ || (!a.group_->spec().empty() && a.group_->spec() == b.group_->spec());
    return same_group && a.graph_ == b.graph_ && a.incoming_ == b.incoming_ && a.stray_ == b.stray_;
  }

 private:
  Graph graph_;
  GroupPtr group_;
  std::vector<std::vector<Element>> incoming_;  // incoming_[v][k] = f(neighbors(v)[k], v)
  std::map<std::pair<Vertex, Vertex>, Element> stray_;
};

struct FlowViolation {
  enum class Kind { SkewSymmetry, Support };
  Kind kind;
  Vertex u;
  Vertex v;
};

std::optional<FlowViolation> validate_flow(const GroupFlow& f);

struct Tractability {
  bool tractable = true;
  Vertex witness = -1;  // first vertex whose incoming values do not commute

  explicit operator bool() const noexcept { return tractable; }
};

Tractability is_tractable(const GroupFlow& f);
/// Product of f(u,v) over the neighbours u of v. Throws NotTractable when
/// the incoming values at v do not commute.
Element excess(const GroupFlow& f, Vertex v);

/// f(u_0,v) f(u_1,v) ... with u_{i+1} = rho(v)(u_i), u_0 = start (or the
/// first entry of the rotation).
Element round_product(const GroupFlow& f, const RotationSystem& r, Vertex v, std::optional<Vertex> start = {});
/// Conjugacy class id of round_product.
Element round_flow(const GroupFlow& f, const RotationSystem& r, Vertex v);

struct LeakVerdict {
  enum class Kind { NotTractable, ConservingEverywhere, LeaksAt, MultipleNonConserving };
  Kind kind = Kind::ConservingEverywhere;
  Vertex vertex = -1;            // NotTractable, LeaksAt
  Element value = 0;             // LeaksAt
  std::vector<Vertex> vertices;  // MultipleNonConserving
};

std::string_view to_string(LeakVerdict::Kind kind);

LeakVerdict detect_leak(const GroupFlow& f);
/// e(u) e(v) when f is tractable and conserving off {u,v} with e(u) e(v) != 1.
std::optional<Element> detect_binary_leak(const GroupFlow& f, Vertex u, Vertex v);

/// Example flows from the text: K3,3 over es:2 (leaks z at 6), K5 over es:3
/// (leaks z at 5), and the K3,3 flow with f(3,6) cleared on K3,3 minus {3,6}.
GroupFlow example_flow_k33();
GroupFlow example_flow_k5();
GroupFlow example_flow_k33minus();

/// Extends a flow on a subgraph h (matched by vertex labels) by the identity.
/// Throws NotSubgraph.
GroupFlow lift_through_subgraph(const Graph& g, const Graph& h, const GroupFlow& f);

/// Inverse of contracting {a,b}: f lives on contract_edge(g,a,b).quotient.
/// Throws EdgeMissing, GraphMismatch, NotTractable.
GroupFlow uncontract_flow(const Graph& g, Vertex a, Vertex b, const GroupFlow& f);

/// A leaking flow for a non-planar graph, built from a Kuratowski witness.
/// Throws GraphIsPlanar.
GroupFlow synthesize_leaking_flow(const Graph& g);
/// The same construction from a given K5 or K3,3 witness.
GroupFlow synthesize_leaking_flow(const Graph& g, const MinorWitness& witness);

/// g(s,t) = c^b(t,s) f(s,t) c^-b(s,t) with c = f(v,w) and b the indicator of
/// the boundary walk through (v,w). Throws NotPlanarEmbedding, GraphMismatch,
/// EdgeMissing, BridgeEdge.
GroupFlow conjugate_along_walk(const GroupFlow& f, const RotationSystem& r, Vertex v, Vertex w);

struct TreeSolveResult {
  std::optional<GroupFlow> flow;
  Vertex failing_vertex = -1;
};

/// Overwrites the tree edges of `boundary` so that every non-root vertex has
/// excess target[v] (identity by default). Children are processed before
/// parents; each product runs over neighbours by ascending id with the parent
/// edge last. Fails when the result is not tractable.
TreeSolveResult solve_tree_flow(const Graph& tree, Vertex root, const GroupFlow& boundary,
                                const std::vector<Element>* targets = nullptr);

}  // namespace leakproof
