#include <map>
#include <random>

#include "doctest.h"
#include "leakproof/error.hpp"
#include "leakproof/planarity.hpp"
#include "oracles.hpp"

using namespace leakproof;

namespace {

RotationSystem sorted_rotation(const Graph& g) {
  std::vector<std::vector<Vertex>> order;
  for (Vertex v = 0; v < g.vertex_count(); ++v) order.push_back(g.neighbors(v));
  return RotationSystem(g, order);
}

RotationSystem planar_rotation(const Graph& g) {
  auto r = test_planarity(g);
  REQUIRE(std::holds_alternative<RotationSystem>(r));
  return std::get<RotationSystem>(r);
}

/// Every rotation system of g, by cycling through the cyclic orders at each vertex.
void for_each_rotation(const Graph& g, const std::function<void(const RotationSystem&)>& visit) {
  const int n = g.vertex_count();
  std::vector<std::vector<std::vector<Vertex>>> choices(static_cast<std::size_t>(n));
  for (Vertex v = 0; v < n; ++v) {
    auto nb = g.neighbors(v);
    if (nb.empty()) {
      choices[std::size_t(v)].push_back({});
      continue;
    }
    // fix the first neighbour; permute the rest
    std::vector<Vertex> rest(nb.begin() + 1, nb.end());
    do {
      std::vector<Vertex> order{nb.front()};
      order.insert(order.end(), rest.begin(), rest.end());
      choices[std::size_t(v)].push_back(order);
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  std::vector<std::size_t> pick(static_cast<std::size_t>(n), 0);
  while (true) {
    std::vector<std::vector<Vertex>> order;
    for (Vertex v = 0; v < n; ++v) order.push_back(choices[std::size_t(v)][pick[std::size_t(v)]]);
    visit(RotationSystem(g, order));
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
}

void check_face_decomposition(const RotationSystem& r) {
  const Graph& g = r.graph();
  std::map<std::pair<Vertex, Vertex>, int> seen;
  std::size_t total = 0;
  for (const auto& w : faces(r)) {
    REQUIRE(w.sequence.front() == w.sequence.back());
    total += w.length();
    for (std::size_t i = 0; i + 1 < w.sequence.size(); ++i) {
      const Vertex a = w.sequence[i], b = w.sequence[i + 1];
      CHECK(g.has_edge(a, b));
      ++seen[{a, b}];
      const Vertex c = w.sequence[i + 2 < w.sequence.size() ? i + 2 : 1];
      CHECK(r.next(b, a) == c);
    }
  }
  CHECK(total == 2 * std::size_t(g.edge_count()));
  CHECK(seen.size() == 2 * std::size_t(g.edge_count()));
  for (const auto& [edge, count] : seen) CHECK(count == 1);
}

Graph triangle_with_pendant() { return Graph({"1", "2", "3", "4"}, {{"1", "2"}, {"2", "3"}, {"1", "3"}, {"3", "4"}}); }

}  // namespace

TEST_SUITE("planarity") {
  TEST_CASE("faces of small embeddings") {
    auto edge = named_graph("path:2");
    auto f = faces(sorted_rotation(edge));
    REQUIRE(f.size() == 1);
    CHECK(f[0].length() == 2);

    auto tri = named_graph("cycle:3");
    auto tf = faces(sorted_rotation(tri));
    REQUIRE(tf.size() == 2);
    for (const auto& w : tf) CHECK(w.length() == 3);

    auto k4 = planar_rotation(named_graph("complete:4"));
    auto kf = faces(k4);
    REQUIRE(kf.size() == 4);
    for (const auto& w : kf) CHECK(w.length() == 3);
  }

  TEST_CASE("rotation systems must match the neighbourhoods") {
    auto tri = named_graph("cycle:3");
    try {
      RotationSystem(tri, {{1, 2}, {0, 2}, {0}});
      FAIL("accepted a short rotation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::GraphMismatch);
    }
  }

  TEST_CASE("euler check") {
    CHECK(euler_planar_check(sorted_rotation(named_graph("cycle:3"))));
    CHECK(euler_planar_check(planar_rotation(named_graph("complete:4"))));
    int planar = 0, total = 0;
    for_each_rotation(named_graph("complete:5"), [&](const RotationSystem& r) {
      ++total;
      planar += euler_planar_check(r);
    });
    CHECK(total == 7776);
    CHECK(planar == 0);
    int k4_planar = 0;
    for_each_rotation(named_graph("complete:4"), [&](const RotationSystem& r) { k4_planar += euler_planar_check(r); });
    CHECK(k4_planar > 0);
  }

  TEST_CASE("faces decompose the directed edges") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      auto g = oracle::random_graph(3 + trial % 6, 0.5, rng);
      check_face_decomposition(sorted_rotation(g));
      auto r = test_planarity(g);
      if (auto* rs = std::get_if<RotationSystem>(&r)) check_face_decomposition(*rs);
    }
  }

  TEST_CASE("test_planarity examples") {
    auto k4 = test_planarity(named_graph("complete:4"));
    REQUIRE(std::holds_alternative<RotationSystem>(k4));
    CHECK(faces(std::get<RotationSystem>(k4)).size() == 4);

    auto k5 = named_graph("complete:5");
    auto r5 = test_planarity(k5);
    REQUIRE(std::holds_alternative<MinorWitness>(r5));
    CHECK(std::get<MinorWitness>(r5).model == k5);
    CHECK(verify_minor(k5, std::get<MinorWitness>(r5)));

    auto p = named_graph("petersen");
    auto rp = test_planarity(p);
    REQUIRE(std::holds_alternative<MinorWitness>(rp));
    const auto& w = std::get<MinorWitness>(rp);
    CHECK((w.model == named_graph("complete:5") || w.model == named_graph("complete_bipartite:3,3")));
    CHECK(verify_minor(p, w));
  }

  TEST_CASE("disconnected graphs are planar per component") {
    Graph g({"1", "2", "3", "4", "5", "6", "7"}, {{"1", "2"}, {"2", "3"}, {"1", "3"}, {"5", "6"}});
    auto r = test_planarity(g);
    REQUIRE(std::holds_alternative<RotationSystem>(r));
    CHECK(euler_planar_check(std::get<RotationSystem>(r)));
    CHECK(is_planar(g));
    CHECK_FALSE(is_planar(named_graph("complete_bipartite:3,3")));
  }

  TEST_CASE("walk bridge check") {
    auto p3 = named_graph("path:3");
    auto r = sorted_rotation(p3);
    auto f = faces(r);
    REQUIRE(f.size() == 1);
    auto b = walk_bridge_check(r, f[0]);
    CHECK(b.size() == 2);

    auto tri = sorted_rotation(named_graph("cycle:3"));
    for (const auto& w : faces(tri)) CHECK(walk_bridge_check(tri, w).empty());

    auto tp = triangle_with_pendant();
    auto rt = planar_rotation(tp);
    std::vector<Edge> found;
    for (const auto& w : faces(rt))
      for (Edge e : walk_bridge_check(rt, w)) found.push_back(e);
    REQUIRE(found.size() == 1);
    CHECK(found[0] == Edge::of(tp.at("3"), tp.at("4")));

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      auto g = oracle::random_graph(4 + trial % 5, 0.4, rng);
      auto pr = test_planarity(g);
      if (!std::holds_alternative<RotationSystem>(pr)) continue;
      const auto& rs = std::get<RotationSystem>(pr);
      auto all_bridges = bridges(g);
      std::set<Edge> reported;
      for (const auto& w : faces(rs))
        for (Edge e : walk_bridge_check(rs, w)) {
          CHECK(std::find(all_bridges.begin(), all_bridges.end(), e) != all_bridges.end());
          reported.insert(e);
        }
      CHECK(reported.size() == all_bridges.size());
    }

    auto k5 = named_graph("complete:5");
    auto bad = sorted_rotation(k5);
    try {
      walk_bridge_check(bad, faces(bad)[0]);
      FAIL("accepted a non-planar rotation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotPlanarEmbedding);
    }
  }

  TEST_CASE("extra-planarity examples") {
    CHECK(extra_planar(named_graph("complete:4")).extra_planar);
    auto k5m = named_graph("k5minus");
    auto r = extra_planar(k5m);
    CHECK_FALSE(r.extra_planar);
    REQUIRE(r.failing_pair);
    CHECK(*r.failing_pair == Edge::of(0, 1));
    REQUIRE(r.witness);
    CHECK(verify_minor(k5m.with_edge(0, 1), *r.witness));
    CHECK(witness_host(k5m, r) == k5m.with_edge(0, 1));
    auto k33 = named_graph("complete_bipartite:3,3");
    auto rk = extra_planar(k33);
    CHECK_FALSE(rk.extra_planar);
    REQUIRE(rk.witness);
    CHECK(is_subgraph_of(k33, witness_host(k33, rk)));
    CHECK(verify_minor(witness_host(k33, rk), *rk.witness));
    auto k5 = named_graph("complete:5");
    auto r5 = extra_planar(k5);
    REQUIRE(r5.witness);
    CHECK(witness_host(k5, r5) == k5);
    CHECK(verify_minor(k5, *r5.witness));
    auto p4 = extra_planar(named_graph("path:4"));
    CHECK(p4.extra_planar);
    CHECK(p4.added.size() == 3);
    for (const auto& pe : p4.added) CHECK(euler_planar_check(pe.embedding));
  }

  TEST_CASE("planarity certificates on all graphs with five vertices") {
    for (std::uint64_t mask = 0; mask < 1024; ++mask) {
      auto g = oracle::graph_from_mask(5, mask);
      auto r = test_planarity(g);
      if (auto* rs = std::get_if<RotationSystem>(&r)) {
        CHECK(euler_planar_check(*rs));
        CHECK(mask != 1023);
      } else {
        CHECK(verify_minor(g, std::get<MinorWitness>(r)));
        CHECK(mask == 1023);
      }
    }
  }
}
