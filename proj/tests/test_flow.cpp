#include <random>

#include "doctest.h"
#include "leakproof/error.hpp"
#include "leakproof/flow.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace leakproof;

namespace {

Element w(const GroupFlow& f, const char* word) { return f.group().parse_word(word); }
Vertex at(const GroupFlow& f, const char* label) { return f.graph().at(label); }
Element fv(const GroupFlow& f, const char* a, const char* b) { return f(at(f, a), at(f, b)); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InternalInvariant;
}

void check_uncontract_contract(const Graph& g, Vertex a, Vertex b, const GroupFlow& f) {
  const auto c = contract_edge(g, a, b);
  const GroupFlow u = uncontract_flow(g, a, b, f);
  CHECK(!validate_flow(u));
  REQUIRE(is_tractable(u));
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (v == a || v == b) continue;
    CHECK(excess(u, v) == excess(f, c.vertex_map[std::size_t(v)]));
  }
  CHECK(excess(u, a) == u.group().identity());
  CHECK(excess(u, b) == excess(f, c.vertex_map[std::size_t(a)]));
}

}  // namespace

TEST_SUITE("flows") {
  TEST_CASE("validation") {
    auto g = named_graph("cycle:4");
    GroupFlow id(g, cyclic_group(4));
    CHECK_FALSE(validate_flow(id));

    GroupFlow bad(g, cyclic_group(4));
    bad.set_raw(0, 1, 1);
    bad.set_raw(1, 0, 1);
    auto v = validate_flow(bad);
    REQUIRE(v);
    CHECK(v->kind == FlowViolation::Kind::SkewSymmetry);

    GroupFlow stray(g, cyclic_group(4));
    stray.set_raw(0, 2, 1);
    auto s = validate_flow(stray);
    REQUIRE(s);
    CHECK(s->kind == FlowViolation::Kind::Support);

    CHECK(kind_of([&] { id.set(0, 2, 1); }) == ErrorKind::EdgeMissing);
    CHECK_FALSE(validate_flow(example_flow_k33()));
  }

  TEST_CASE("the example matrices") {
    auto k33 = example_flow_k33();
    CHECK(fv(k33, "1", "4") == w(k33, "x1"));
    CHECK(fv(k33, "2", "5") == w(k33, "x3"));
    CHECK(fv(k33, "3", "6") == w(k33, "x1*x4*x2*x3"));
    CHECK(fv(k33, "6", "3") == w(k33, "x1*x4*x2*x3"));
    auto k5 = example_flow_k5();
    CHECK(fv(k5, "1", "5") == w(k5, "x1*x2*x3"));
    CHECK(fv(k5, "2", "3") == w(k5, "x6"));
    CHECK(k33.group().spec() == "es:2");
    CHECK(k5.group().spec() == "es:3");
    for (const auto* f : {&k33, &k5}) {
      CHECK_FALSE(validate_flow(*f));
      CHECK(is_tractable(*f));
    }
  }

  TEST_CASE("tractability") {
    std::mt19937_64 rng(1);
    auto g = named_graph("complete:5");
    for (int i = 0; i < 20; ++i) CHECK(is_tractable(support::random_flow(g, cyclic_group(6), rng)));

    Graph star({"c", "l1", "l2"}, {{"c", "l1"}, {"c", "l2"}});
    auto s3 = symmetric_group(3);
    GroupFlow f(star, s3);
    f.set(star.at("l1"), star.at("c"), s3->parse_word("(1,2)"));
    f.set(star.at("l2"), star.at("c"), s3->parse_word("(1,3)"));
    auto t = is_tractable(f);
    CHECK_FALSE(t);
    CHECK(t.witness == star.at("c"));
    CHECK(kind_of([&] { excess(f, star.at("c")); }) == ErrorKind::NotTractable);
    CHECK(detect_leak(f).kind == LeakVerdict::Kind::NotTractable);
  }

  TEST_CASE("excess of the examples") {
    auto k33 = example_flow_k33();
    const Element z = w(k33, "z");
    for (const char* v : {"1", "2", "3", "4", "5"}) CHECK(excess(k33, at(k33, v)) == k33.group().identity());
    CHECK(excess(k33, at(k33, "6")) == z);

    auto k5 = example_flow_k5();
    for (const char* v : {"1", "2", "3", "4"}) CHECK(excess(k5, at(k5, v)) == k5.group().identity());
    CHECK(excess(k5, at(k5, "5")) == w(k5, "z"));
  }

  TEST_CASE("leak verdicts") {
    auto v = detect_leak(example_flow_k33());
    CHECK(v.kind == LeakVerdict::Kind::LeaksAt);
    CHECK(v.vertex == 5);
    CHECK(v.value == example_flow_k33().group().parse_word("z"));
    GroupFlow id(named_graph("complete:4"), es_group(2));
    CHECK(detect_leak(id).kind == LeakVerdict::Kind::ConservingEverywhere);

    GroupFlow two(named_graph("path:3"), cyclic_group(3));
    two.set(0, 1, 1);
    auto m = detect_leak(two);
    CHECK(m.kind == LeakVerdict::Kind::MultipleNonConserving);
    CHECK(m.vertices == std::vector<Vertex>{0, 1});

    auto km = example_flow_k33minus();
    CHECK_FALSE(km.graph().has_edge(at(km, "3"), at(km, "6")));
    auto b = detect_binary_leak(km, at(km, "3"), at(km, "6"));
    REQUIRE(b);
    CHECK(*b == w(km, "z"));
    CHECK_FALSE(detect_binary_leak(km, at(km, "1"), at(km, "2")));
  }

  TEST_CASE("round flow") {
    std::mt19937_64 rng(4);
    Graph g({"1", "2", "3", "4", "5"}, {{"1", "2"}, {"1", "3"}, {"1", "4"}});
    auto s3 = symmetric_group(3);
    GroupFlow f(g, s3);
    f.set(1, 0, s3->parse_word("(1,2)"));
    f.set(2, 0, s3->parse_word("(1,3)"));
    f.set(3, 0, s3->parse_word("(2,3)"));
    RotationSystem r(g, {{1, 2, 3}, {0}, {0}, {0}, {}});
    const Element id0 = round_product(f, r, 0, 1), id1 = round_product(f, r, 0, 2), id2 = round_product(f, r, 0, 3);
    CHECK(conjugacy_class_id(*s3, id0) == conjugacy_class_id(*s3, id1));
    CHECK(conjugacy_class_id(*s3, id1) == conjugacy_class_id(*s3, id2));
    CHECK(round_flow(f, r, 0) == conjugacy_class_id(*s3, id0));
    CHECK(round_flow(f, r, 4) == conjugacy_class_id(*s3, s3->identity()));

    for (int trial = 0; trial < 50; ++trial) {
      auto pg = support::random_planar_graph(6, rng);
      auto rot = std::get<RotationSystem>(test_planarity(pg));
      auto rf = support::random_flow(pg, symmetric_group(4), rng);
      for (Vertex v = 0; v < pg.vertex_count(); ++v)
        for (Vertex u : pg.neighbors(v))
          CHECK(conjugacy_class_id(rf.group(), round_product(rf, rot, v, u)) == round_flow(rf, rot, v));
      auto af = support::random_flow(pg, cyclic_group(6), rng);
      for (Vertex v = 0; v < pg.vertex_count(); ++v) CHECK(round_flow(af, rot, v) == conjugacy_class_id(af.group(), excess(af, v)));
    }
  }

  TEST_CASE("lifting through subgraphs") {
    auto k33 = example_flow_k33();
    CHECK(lift_through_subgraph(k33.graph(), k33.graph(), k33) == k33);
    auto k6 = named_graph("complete:6");
    auto lifted = lift_through_subgraph(k6, k33.graph(), k33);
    auto v = detect_leak(lifted);
    CHECK(v.kind == LeakVerdict::Kind::LeaksAt);
    CHECK(k6.label(v.vertex) == "6");
    CHECK(v.value == w(k33, "z"));
    for (Vertex x = 0; x < 6; ++x) CHECK(excess(lifted, x) == excess(k33, x));

    Graph empty({"1", "2", "3", "4", "5", "6"}, {});
    auto blank = lift_through_subgraph(k6, empty, GroupFlow(empty, es_group(2)));
    CHECK(blank == GroupFlow(k6, es_group(2)));
    CHECK(kind_of([&] { lift_through_subgraph(named_graph("cycle:6"), k33.graph(), k33); }) == ErrorKind::NotSubgraph);
  }

  TEST_CASE("uncontraction") {
    auto tri = named_graph("cycle:3");
    auto q = contract_edge(tri, 0, 1).quotient;
    auto c4 = cyclic_group(4);
    GroupFlow f(q, c4);
    f.set(0, 1, 1);
    check_uncontract_contract(tri, 0, 1, f);

    // a has no other neighbour: the new edge value is the empty product
    auto p3 = named_graph("path:3");
    auto pq = contract_edge(p3, 0, 1).quotient;
    GroupFlow pf(pq, c4);
    pf.set(0, 1, 3);
    auto pu = uncontract_flow(p3, 0, 1, pf);
    CHECK(pu(0, 1) == c4->identity());
    check_uncontract_contract(p3, 0, 1, pf);

    std::mt19937_64 rng(8);
    auto es = es_group(2);
    for (int trial = 0; trial < 100; ++trial) {
      auto g = oracle::random_graph(5 + trial % 3, 0.5, rng);
      if (g.edges().empty()) continue;
      const Edge e = g.edges()[std::uniform_int_distribution<std::size_t>(0, g.edges().size() - 1)(rng)];
      auto cq = contract_edge(g, e.u, e.v).quotient;
      auto rf = support::random_flow(cq, cyclic_group(6), rng);
      check_uncontract_contract(g, e.u, e.v, rf);
      check_uncontract_contract(g, e.v, e.u, rf);
    }

    // A leak survives un-contraction of a host edge
    for (int trial = 0; trial < 30; ++trial) {
      Graph host = named_graph("complete_bipartite:3,3");
      // subdivide a random edge: new vertex 7 on the path a-7-b, then contract {a,7}
      const Edge e = host.edges()[std::size_t(trial % 9)];
      std::vector<std::pair<std::string, std::string>> edges;
      for (Edge x : host.edges())
        if (x != e) edges.emplace_back(host.label(x.u), host.label(x.v));
      edges.emplace_back(host.label(e.u), "7");
      edges.emplace_back("7", host.label(e.v));
      Graph sub({"1", "2", "3", "4", "5", "6", "7"}, edges);
      const Vertex a = sub.at(host.label(e.u)), b = sub.at("7");
      auto c = contract_edge(sub, a, b);
      REQUIRE(c.quotient == host);
      auto flow = uncontract_flow(sub, a, b, example_flow_k33());
      auto v = detect_leak(flow);
      REQUIRE(v.kind == LeakVerdict::Kind::LeaksAt);
      CHECK(v.value == w(flow, "z"));
      CHECK(c.vertex_map[std::size_t(v.vertex)] == host.at("6"));
    }

    CHECK(kind_of([&] { uncontract_flow(tri, 0, 1, GroupFlow(tri, c4)); }) == ErrorKind::GraphMismatch);
    CHECK(kind_of([&] { uncontract_flow(p3, 0, 2, pf); }) == ErrorKind::EdgeMissing);
  }

  TEST_CASE("leak synthesis") {
    auto k5 = named_graph("complete:5");
    CHECK(synthesize_leaking_flow(k5) == example_flow_k5());
    for (const char* name : {"complete_bipartite:3,3", "petersen", "complete:6"}) {
      auto f = synthesize_leaking_flow(named_graph(name));
      auto v = detect_leak(f);
      CHECK(v.kind == LeakVerdict::Kind::LeaksAt);
      CHECK(v.value != f.group().identity());
    }
    CHECK(kind_of([] { synthesize_leaking_flow(named_graph("complete:4")); }) == ErrorKind::GraphIsPlanar);
  }

  TEST_CASE("conjugation along a boundary walk") {
    auto tri = named_graph("cycle:3");
    auto c4 = cyclic_group(4);
    RotationSystem r(tri, {{1, 2}, {0, 2}, {0, 1}});
    GroupFlow f(tri, c4);
    f.set(0, 1, 1);
    auto g = conjugate_along_walk(f, r, 0, 1);
    CHECK(g(0, 1) == c4->identity());
    CHECK_FALSE(validate_flow(g));
    for (Vertex v = 0; v < 3; ++v) CHECK(round_flow(g, r, v) == round_flow(f, r, v));

    GroupFlow idf(tri, c4);
    CHECK(conjugate_along_walk(idf, r, 0, 1) == idf);

    std::mt19937_64 rng(2);
    auto k4 = named_graph("complete:4");
    auto rk = std::get<RotationSystem>(test_planarity(k4));
    auto es = es_group(2);
    for (int trial = 0; trial < 30; ++trial) {
      auto rf = support::random_flow(k4, es, rng);
      const Edge e = k4.edges()[std::size_t(trial % 6)];
      auto cg = conjugate_along_walk(rf, rk, e.u, e.v);
      CHECK(cg(e.u, e.v) == es->identity());
      for (Vertex v = 0; v < 4; ++v) CHECK(round_flow(cg, rk, v) == round_flow(rf, rk, v));
    }

    auto p3 = named_graph("path:3");
    RotationSystem rp(p3, {{1}, {0, 2}, {1}});
    GroupFlow pf(p3, c4);
    pf.set(0, 1, 1);
    CHECK(kind_of([&] { conjugate_along_walk(pf, rp, 0, 1); }) == ErrorKind::BridgeEdge);
    CHECK(kind_of([&] { conjugate_along_walk(pf, rp, 0, 2); }) == ErrorKind::EdgeMissing);
    auto k5 = named_graph("complete:5");
    std::vector<std::vector<Vertex>> order;
    for (Vertex v = 0; v < 5; ++v) order.push_back(k5.neighbors(v));
    RotationSystem bad(k5, order);
    GroupFlow kf(k5, c4);
    CHECK(kind_of([&] { conjugate_along_walk(kf, bad, 0, 1); }) == ErrorKind::NotPlanarEmbedding);
    CHECK(kind_of([&] { conjugate_along_walk(pf, rk, 0, 1); }) == ErrorKind::GraphMismatch);
  }

  TEST_CASE("tree solving") {
    auto g = named_graph("cycle:4").with_edge(0, 2);
    auto c4 = cyclic_group(4);
    auto tree = g.spanning_subgraph({Edge::of(0, 1), Edge::of(1, 2), Edge::of(2, 3)});
    GroupFlow boundary(g, c4);
    auto trivial = solve_tree_flow(tree, 0, boundary);
    REQUIRE(trivial.flow);
    CHECK(*trivial.flow == boundary);

    boundary.set(0, 2, 1);
    boundary.set(0, 3, 3);
    auto solved = solve_tree_flow(tree, 0, boundary);
    REQUIRE(solved.flow);
    CHECK((*solved.flow)(0, 2) == 1);
    for (Vertex v = 0; v < 4; ++v) CHECK(excess(*solved.flow, v) == c4->identity());

    std::mt19937_64 rng(6);
    int tractable = 0;
    for (int trial = 0; trial < 200; ++trial) {
      auto pg = support::random_planar_graph(6 + trial % 4, rng);
      auto t = support::random_spanning_tree(pg, rng);
      auto es = es_group(2);
      auto bf = support::random_flow(pg, es, rng);
      const Vertex root = Vertex(trial % pg.vertex_count());
      auto res = solve_tree_flow(t, root, bf);
      if (!res.flow) {
        CHECK(res.failing_vertex >= 0);
        continue;
      }
      ++tractable;
      for (Vertex v = 0; v < pg.vertex_count(); ++v) CHECK(excess(*res.flow, v) == es->identity());
      for (Edge e : pg.edges())
        if (!t.has_edge(e.u, e.v)) CHECK((*res.flow)(e.u, e.v) == bf(e.u, e.v));
    }
    CHECK(tractable > 0);
  }
}
