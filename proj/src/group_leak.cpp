#include "leakproof/group_leak.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "leakproof/error.hpp"

namespace leakproof {

DeltaPresentation build_delta(const GroupPtr& g, const DeltaOptions& options) {
  if (g->order() > options.max_order)
    throw Error(ErrorKind::TooLarge, "group of order " + std::to_string(g->order()) + " exceeds the bound " +
                                         std::to_string(options.max_order));
  DeltaPresentation d;
  d.group = g;
  d.subgroups = maximal_abelian_subgroups(g);
  for (const auto& h : d.subgroups) {
    d.offset.push_back(d.dim);
    d.bases.push_back(abelian_basis(h));
    d.dim += d.bases.back().gens.size();
    for (std::size_t order : d.bases.back().orders) d.modulus = std::lcm(d.modulus, std::uint64_t(order));
  }

  std::vector<std::vector<std::size_t>> containing(g->order());
  for (std::size_t i = 0; i < d.subgroups.size(); ++i)
    for (Element x : d.subgroups[i].members) containing[x].push_back(i);
  d.home.resize(g->order());
  for (Element x = 0; x < g->order(); ++x) {
    if (containing[x].empty()) throw Error(ErrorKind::InternalInvariant, "element outside every maximal abelian subgroup");
    d.home[x] = containing[x].front();
  }

  for (std::size_t i = 0; i < d.subgroups.size(); ++i)
    for (std::size_t j = 0; j < d.bases[i].orders.size(); ++j) {
      std::vector<std::int64_t> row(d.dim, 0);
      row[d.offset[i] + j] = std::int64_t(d.bases[i].orders[j]);
      d.relations.push_back(std::move(row));
      d.origins.push_back({RelationOrigin::Kind::Order, d.offset[i] + j, i, i, g->identity()});
    }

  // One star of relations per cyclic subgroup, keyed by its smallest generator.
  for (Element x = 0; x < g->order(); ++x) {
    if (x == g->identity() || containing[x].size() < 2) continue;
    const std::size_t n = g->element_order(x);
    bool smallest = true;
    for (std::size_t k = 2; k < n && smallest; ++k)
      if (std::gcd(k, n) == 1 && g->pow(x, static_cast<long long>(k)) < x) smallest = false;
    if (!smallest) continue;
    const std::size_t h0 = containing[x].front();
    const auto base_row = embed_element(d, h0, x);
    for (std::size_t t = 1; t < containing[x].size(); ++t) {
      const std::size_t h = containing[x][t];
      auto row = embed_element(d, h, x);
      for (std::size_t c = 0; c < d.dim; ++c) row[c] -= base_row[c];
      d.relations.push_back(std::move(row));
      d.origins.push_back({RelationOrigin::Kind::Pair, 0, h0, h, x});
    }
  }

  d.lattice = ModularLattice(d.dim, d.modulus, options.track_coefficients);
  for (const auto& row : d.relations) d.lattice.add_row(row);
  return d;
}

std::vector<std::int64_t> embed_element(const DeltaPresentation& d, std::size_t subgroup, Element g) {
  std::vector<std::int64_t> v(d.dim, 0);
  const auto& log = discrete_log(d.bases[subgroup], g);
  for (std::size_t j = 0; j < log.size(); ++j) v[d.offset[subgroup] + j] = std::int64_t(log[j]);
  return v;
}

ModularLattice::Vec phi_via(const DeltaPresentation& d, Element gamma, std::size_t subgroup) {
  return d.lattice.reduce(embed_element(d, subgroup, gamma));
}

ModularLattice::Vec phi(const DeltaPresentation& d, Element gamma) { return phi_via(d, gamma, d.home[gamma]); }

bool phi_is_zero(const DeltaPresentation& d, Element gamma) {
  const auto v = phi(d, gamma);
  return std::all_of(v.begin(), v.end(), [](std::uint64_t x) { return x == 0; });
}

std::vector<std::vector<std::int64_t>> pairwise_relation_rows(const DeltaPresentation& d) {
  std::vector<std::vector<std::int64_t>> rows;
  for (std::size_t i = 0; i < d.subgroups.size(); ++i)
    for (std::size_t j = i + 1; j < d.subgroups.size(); ++j) {
      const Subgroup common = intersection(d.subgroups[i], d.subgroups[j]);
      if (common.order() < 2) continue;
      for (Element x : abelian_basis(common).gens) {
        auto row = embed_element(d, i, x);
        const auto other = embed_element(d, j, x);
        for (std::size_t c = 0; c < d.dim; ++c) row[c] -= other[c];
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

std::vector<std::uint64_t> delta_invariant_factors(const DeltaPresentation& d) { return d.lattice.invariant_factors(); }

GroupLeakVerdict is_leakproof_group(const DeltaPresentation& d) {
  const FiniteGroup& g = *d.group;
  for (Element x = 0; x < g.order(); ++x)
    if (x != g.identity() && phi_is_zero(d, x)) return {false, x};
  return {};
}

GroupLeakVerdict is_leakproof_group(const GroupPtr& g, std::size_t max_order) {
  return is_leakproof_group(build_delta(g, {max_order, false}));
}

BinaryLeakVerdict is_binary_leakproof_group(const DeltaPresentation& d) {
  std::map<ModularLattice::Vec, Element> seen;
  for (Element x = 0; x < d.group->order(); ++x) {
    auto [it, inserted] = seen.emplace(phi(d, x), x);
    if (!inserted) return {false, std::pair{it->second, x}};
  }
  return {};
}

BinaryLeakVerdict is_binary_leakproof_group(const GroupPtr& g, std::size_t max_order) {
  return is_binary_leakproof_group(build_delta(g, {max_order, false}));
}

GroupFlow witness_flow_from_kernel(const DeltaPresentation& d, Element gamma) {
  if (!d.lattice.tracks_coefficients()) {
    const DeltaPresentation tracked = build_delta(d.group, {d.group->order(), true});
    return witness_flow_from_kernel(tracked, gamma);
  }
  const FiniteGroup& g = *d.group;
  if (gamma >= g.order()) throw Error(ErrorKind::NotMember, "element out of range");
  if (gamma == g.identity()) throw Error(ErrorKind::NotInKernel, "the identity does not leak");
  const auto coeff = d.lattice.solve(embed_element(d, d.home[gamma], gamma));
  if (!coeff) throw Error(ErrorKind::NotInKernel, g.name(gamma) + " does not map to zero in Delta");

  // x[(H,I)] in the intersection of H and I; (e2 - e1)(x) equals gamma placed at its home.
  std::map<std::pair<std::size_t, std::size_t>, Element> x;
  for (std::size_t r = 0; r < d.origins.size(); ++r) {
    const auto& o = d.origins[r];
    if (o.kind != RelationOrigin::Kind::Pair || (*coeff)[r] == 0) continue;
    auto [it, inserted] = x.emplace(std::pair{o.first, o.second}, g.identity());
    it->second = g.mul(it->second, g.pow(o.element, static_cast<long long>((*coeff)[r] % g.element_order(o.element))));
  }
  const int k = int(d.subgroups.size());
  Graph complete(k);
  for (Vertex a = 0; a < k; ++a)
    for (Vertex b = a + 1; b < k; ++b) complete.add_edge(a, b);
  auto value = [&](std::size_t h, std::size_t i) {
    auto it = x.find({h, i});
    return it == x.end() ? g.identity() : it->second;
  };
  GroupFlow f(complete, d.group);
  for (Vertex a = 0; a < k; ++a)
    for (Vertex b = a + 1; b < k; ++b)
      f.set(a, b, g.mul(value(std::size_t(a), std::size_t(b)), g.inv(value(std::size_t(b), std::size_t(a)))));

  const LeakVerdict verdict = detect_leak(f);
  if (verdict.kind != LeakVerdict::Kind::LeaksAt || verdict.vertex != Vertex(d.home[gamma]) || verdict.value != gamma)
    throw Error(ErrorKind::InternalInvariant, "kernel witness flow does not leak " + g.name(gamma));
  return f;
}

}  // namespace leakproof
