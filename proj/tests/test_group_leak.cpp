#include <random>

#include "doctest.h"
#include "leakproof/error.hpp"
#include "leakproof/group_leak.hpp"
#include "leakproof/lattice.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace leakproof;

namespace {

std::vector<std::uint64_t> to_u64(const std::vector<oracle::cpp_int>& v) {
  std::vector<std::uint64_t> out;
  for (const auto& x : v) out.push_back(static_cast<std::uint64_t>(x));
  return out;
}

std::vector<std::uint64_t> oracle_factors(const DeltaPresentation& d) {
  auto smith = oracle::smith_over_z(oracle::textbook_delta_rows(d), d.dim);
  REQUIRE(smith.free_rank == 0);
  return to_u64(smith.factors);
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("membership and coefficients") {
    ModularLattice l(2, 4, true);
    l.add_row({2, 0});
    l.add_row({0, 2});
    CHECK_FALSE(l.contains({1, 0}));
    CHECK(l.contains({2, 2}));
    auto c = l.solve({2, 2});
    REQUIRE(c);
    CHECK(*c == ModularLattice::Vec{1, 1});
    CHECK_FALSE(l.solve({1, 0}));
    CHECK(l.invariant_factors() == std::vector<std::uint64_t>{2, 2});
    CHECK(l.quotient_order() == 4);
  }

  TEST_CASE("matches span enumeration on random small lattices") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
      const std::uint64_t m = std::vector<std::uint64_t>{2, 3, 4, 6, 8, 12}[std::size_t(trial % 6)];
      const std::size_t dim = 1 + std::size_t(trial % 3);
      const std::size_t nrows = 1 + std::size_t(trial % 4);
      ModularLattice l(dim, m, true);
      std::vector<std::vector<std::uint64_t>> rows;
      std::uniform_int_distribution<std::int64_t> entry(-12, 12);
      for (std::size_t r = 0; r < nrows; ++r) {
        std::vector<std::int64_t> row(dim);
        std::vector<std::uint64_t> urow(dim);
        for (std::size_t c = 0; c < dim; ++c) {
          row[c] = entry(rng);
          urow[c] = std::uint64_t(((row[c] % std::int64_t(m)) + std::int64_t(m)) % std::int64_t(m));
        }
        l.add_row(row);
        rows.push_back(urow);
      }
      CHECK(l.is_howell());
      auto span = oracle::span_mod(rows, m, dim);
      std::uint64_t total = 1;
      for (std::size_t c = 0; c < dim; ++c) total *= m;
      CHECK(l.quotient_order() * span.size() == total);
      std::uint64_t prod = 1;
      for (auto f : l.invariant_factors()) prod *= f;
      CHECK(prod == l.quotient_order());

      // canonical representatives: equal exactly on cosets
      std::map<ModularLattice::Vec, std::vector<std::uint64_t>> rep;
      std::vector<std::uint64_t> v(dim, 0);
      for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t t = idx;
        std::vector<std::int64_t> sv(dim);
        for (std::size_t c = 0; c < dim; ++c) {
          v[c] = t % m;
          sv[c] = std::int64_t(v[c]);
          t /= m;
        }
        const bool member = span.count(v) > 0;
        CHECK(l.contains(sv) == member);
        if (member) {
          auto coeff = l.solve(sv);
          REQUIRE(coeff);
          std::vector<std::uint64_t> back(dim, 0);
          for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < dim; ++c) back[c] = (back[c] + (*coeff)[r] * rows[r][c]) % m;
          CHECK(back == v);
        }
        rep.emplace(l.reduce(sv), v);
      }
      CHECK(rep.size() == l.quotient_order());
    }
  }
}

TEST_SUITE("group-leak") {
  TEST_CASE("quaternion delta") {
    auto d = build_delta(quaternion_group());
    CHECK(delta_invariant_factors(d) == std::vector<std::uint64_t>{2, 2, 4});
    CHECK(oracle_factors(d) == std::vector<std::uint64_t>{2, 2, 4});
    CHECK(d.lattice.quotient_order() == 16);
    CHECK(is_leakproof_group(d).leakproof);
  }

  TEST_CASE("the textbook rows give the same quotient") {
    for (const char* spec : {"sym:3", "dihedral:4", "sym:4", "alt:4", "es:1", "es:2", "centprod:quaternion,dihedral:4",
                             "product:cyclic:2,quaternion", "dihedral:6", "product:sym:3,cyclic:2"}) {
      INFO(spec);
      auto d = build_delta(standard_group(spec));
      CHECK(delta_invariant_factors(d) == oracle_factors(d));
      for (const auto& row : pairwise_relation_rows(d)) CHECK(d.lattice.contains(row));
    }
  }

  TEST_CASE("symmetric group of degree three") {
    auto d = build_delta(symmetric_group(3));
    for (Element x = 0; x < 6; ++x)
      if (x != d.group->identity()) CHECK_FALSE(phi_is_zero(d, x));
    CHECK(is_binary_leakproof_group(d).injective);
  }

  TEST_CASE("extraspecial groups leak the centre") {
    for (int n : {2, 3}) {
      auto g = es_group(n);
      auto d = build_delta(g, {kDefaultMaxGroupOrder, true});
      CHECK(phi_is_zero(d, g->parse_word("z")));
      auto v = is_leakproof_group(d);
      CHECK_FALSE(v.leakproof);
      REQUIRE(v.witness);
      CHECK(*v.witness == g->parse_word("z"));
      auto b = is_binary_leakproof_group(d);
      CHECK_FALSE(b.injective);
      REQUIRE(b.collision);
      CHECK(b.collision->first == g->identity());
      CHECK(b.collision->second == g->parse_word("z"));

      auto f = witness_flow_from_kernel(d, *v.witness);
      auto lv = detect_leak(f);
      CHECK(lv.kind == LeakVerdict::Kind::LeaksAt);
      CHECK(lv.value == g->parse_word("z"));
      CHECK(f.graph().vertex_count() == int(d.subgroups.size()));
      for (Vertex i = 0; i < f.graph().vertex_count(); ++i)
        for (Vertex h = 0; h < f.graph().vertex_count(); ++h) CHECK(d.subgroups[std::size_t(i)].contains(f(h, i)));
    }
  }

  TEST_CASE("verdicts on small groups") {
    for (const char* spec : {"cyclic:1", "cyclic:12", "product:cyclic:2,cyclic:2", "quaternion", "dihedral:4", "sym:4"})
      CHECK(is_leakproof_group(standard_group(spec)).leakproof);
    CHECK_FALSE(is_leakproof_group(standard_group("centprod:quaternion,dihedral:4")).leakproof);
    try {
      is_leakproof_group(symmetric_group(5), 100);
      FAIL("no size check");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TooLarge);
    }
  }

  TEST_CASE("kernel witnesses refuse elements outside the kernel") {
    auto d = build_delta(quaternion_group(), {kDefaultMaxGroupOrder, true});
    for (Element x = 0; x < 8; ++x) {
      try {
        witness_flow_from_kernel(d, x);
        FAIL("built a witness for a non-kernel element");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotInKernel);
      }
    }
  }

  TEST_CASE("phi is additive on commuting pairs") {
    for (const char* spec : {"sym:4", "es:2", "dihedral:6", "centprod:quaternion,dihedral:4"}) {
      auto d = build_delta(standard_group(spec));
      const FiniteGroup& g = *d.group;
      for (std::size_t h = 0; h < d.subgroups.size(); ++h)
        for (Element a : d.subgroups[h].members)
          for (Element b : d.subgroups[h].members) {
            auto pa = phi(d, a), pb = phi(d, b), pab = phi(d, g.mul(a, b));
            std::vector<std::int64_t> sum(d.dim);
            for (std::size_t c = 0; c < d.dim; ++c) sum[c] = std::int64_t((pa[c] + pb[c]) % d.modulus);
            CHECK(d.lattice.reduce(sum) == pab);
            CHECK(phi_via(d, a, h) == pa);
          }
    }
  }

  TEST_CASE("stored relation rows match their origins") {
    for (const char* spec : {"sym:4", "es:2", "quaternion"}) {
      auto d = build_delta(standard_group(spec));
      REQUIRE(d.relations.size() == d.origins.size());
      for (std::size_t r = 0; r < d.relations.size(); ++r) {
        const auto& o = d.origins[r];
        if (o.kind == RelationOrigin::Kind::Order) {
          // order rows hold the cyclic order, which divides the modulus
          CHECK(d.modulus % std::uint64_t(d.relations[r][o.coordinate]) == 0);
          continue;
        }
        auto a = embed_element(d, o.second, o.element), b = embed_element(d, o.first, o.element);
        for (std::size_t c = 0; c < d.dim; ++c) {
          const std::int64_t m = std::int64_t(d.modulus);
          CHECK(((a[c] - b[c]) % m + m) % m == ((d.relations[r][c] % m) + m) % m);
        }
      }
    }
  }

  TEST_CASE("bounded flow search agrees with the verdict on small groups") {
    std::mt19937_64 rng(21);
    for (const char* spec : {"sym:3", "quaternion", "dihedral:4", "alt:4", "sym:4", "dihedral:6", "product:sym:3,cyclic:2"}) {
      auto d = build_delta(standard_group(spec));
      const bool leakproof = is_leakproof_group(d).leakproof;
      const int k = int(d.subgroups.size());
      Graph complete(k);
      for (Vertex a = 0; a < k; ++a)
        for (Vertex b = a + 1; b < k; ++b) complete.add_edge(a, b);
      bool leak_found = false;
      for (int trial = 0; trial < 300 && !leak_found; ++trial) {
        GroupFlow f(complete, d.group);
        for (Vertex a = 0; a < k; ++a)
          for (Vertex b = a + 1; b < k; ++b) {
            const auto common = intersection(d.subgroups[std::size_t(a)], d.subgroups[std::size_t(b)]);
            if (trial % 3 == 0 && rng() % 2) continue;
            f.set(a, b, common.members[std::size_t(rng() % common.members.size())]);
          }
        leak_found = detect_leak(f).kind == LeakVerdict::Kind::LeaksAt;
      }
      INFO(spec);
      CHECK(leakproof);
      CHECK_FALSE(leak_found);
    }
  }
}
