#include <algorithm>
#include <set>

#include "leakproof/error.hpp"
#include "leakproof/group.hpp"

namespace leakproof {

namespace {

std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> primes;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    primes.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

bool is_power_of(std::size_t n, std::size_t p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

// Closure of an abelian subgroup h under one extra element c commuting with it.
std::vector<Element> adjoin_commuting(const FiniteGroup& g, const std::vector<Element>& h, Element c,
                                      std::vector<char>& mark) {
  std::vector<Element> out = h;
  for (Element x : h) mark[x] = 1;
  Element power = c;
  while (!mark[power]) {
    for (Element x : h) {
      const Element y = g.mul(x, power);
      if (!mark[y]) {
        mark[y] = 1;
        out.push_back(y);
      }
    }
    power = g.mul(power, c);
  }
  for (Element x : out) mark[x] = 0;
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool Subgroup::contains(Element g) const { return std::binary_search(members.begin(), members.end(), g); }

Subgroup whole_group(const GroupPtr& g) {
  Subgroup h{g, {}};
  h.members.resize(g->order());
  for (Element x = 0; x < g->order(); ++x) h.members[x] = x;
  return h;
}

Subgroup generated_subgroup(const GroupPtr& g, std::span<const Element> gens) {
  std::vector<char> seen(g->order(), 0);
  std::vector<Element> members{g->identity()};
  seen[g->identity()] = 1;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (Element s : gens) {
      const Element y = g->mul(members[i], s);
      if (!seen[y]) {
        seen[y] = 1;
        members.push_back(y);
      }
    }
  std::sort(members.begin(), members.end());
  return Subgroup{g, std::move(members)};
}

Subgroup centralizer(const GroupPtr& g, std::span<const Element> set) {
  Subgroup c{g, {}};
  for (Element x = 0; x < g->order(); ++x) {
    bool commutes = true;
    for (Element s : set) {
      if (!g->commute(x, s)) {
        commutes = false;
        break;
      }
    }
    if (commutes) c.members.push_back(x);
  }
  return c;
}

Subgroup center(const GroupPtr& g) { return centralizer(g, whole_group(g).members); }

Subgroup intersection(const Subgroup& a, const Subgroup& b) {
  Subgroup c{a.parent, {}};
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(c.members));
  return c;
}

bool is_subgroup(const GroupPtr& g, std::span<const Element> members) {
  std::vector<char> in(g->order(), 0);
  for (Element x : members) in[x] = 1;
  if (!in[g->identity()]) return false;
  for (Element x : members) {
    if (!in[g->inv(x)]) return false;
    for (Element y : members)
      if (!in[g->mul(x, y)]) return false;
  }
  return true;
}

bool is_abelian(const Subgroup& h) {
  const auto& g = *h.parent;
  for (std::size_t i = 0; i < h.members.size(); ++i)
    for (std::size_t j = i + 1; j < h.members.size(); ++j)
      if (!g.commute(h.members[i], h.members[j])) return false;
  return true;
}

// Abelian-closure ascent: from an abelian H, adjoin elements of C(H) \ H until
// H = C(H). Branching over every candidate (with memoisation) makes the search
// reach every self-centralising abelian subgroup, not just one per start.
std::vector<Subgroup> maximal_abelian_subgroups(const GroupPtr& g) {
  std::set<std::vector<Element>> visited;
  std::set<std::vector<Element>> found;
  std::vector<std::pair<std::vector<Element>, std::vector<Element>>> stack;  // (members, generators)
  std::vector<char> mark(g->order(), 0);

  for (Element x = 0; x < g->order(); ++x) {
    auto cyclic = generated_subgroup(g, std::span<const Element>(&x, 1)).members;
    if (visited.insert(cyclic).second) stack.emplace_back(std::move(cyclic), std::vector<Element>{x});
  }

  while (!stack.empty()) {
    auto [members, gens] = std::move(stack.back());
    stack.pop_back();
    const Subgroup c = centralizer(g, gens);
    if (c.members == members) {
      found.insert(members);
      continue;
    }
    for (Element cand : c.members) {
      if (std::binary_search(members.begin(), members.end(), cand)) continue;
      auto bigger = adjoin_commuting(*g, members, cand, mark);
      if (!visited.insert(bigger).second) continue;
      auto more = gens;
      more.push_back(cand);
      stack.emplace_back(std::move(bigger), std::move(more));
    }
  }

  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (const auto& m : found) out.push_back(Subgroup{g, m});
  return out;
}

AbelianBasis abelian_basis(const Subgroup& h) {
  if (!is_abelian(h)) throw Error(ErrorKind::NotAbelian, "abelian_basis needs an abelian subgroup");
  const FiniteGroup& g = *h.parent;
  AbelianBasis basis{h, {}, {}, {}};

  // Primary components: a basis of each Sylow part, largest orders first.
  std::vector<std::vector<std::pair<Element, std::size_t>>> primary;
  for (std::size_t p : prime_factors(h.order())) {
    std::vector<Element> part;
    for (Element x : h.members)
      if (is_power_of(g.element_order(x), p)) part.push_back(x);

    std::vector<std::pair<Element, std::size_t>> chosen;
    std::unordered_map<Element, std::vector<std::size_t>> span{{g.identity(), {}}};
    while (span.size() < part.size()) {
      // Element of largest order modulo the current span.
      Element best = g.identity();
      std::size_t best_order = 1;
      for (Element x : part) {
        std::size_t k = 1;
        Element y = x;
        while (!span.contains(y)) {
          y = g.pow(y, static_cast<long long>(p));
          k *= p;
        }
        if (k > best_order) {
          best_order = k;
          best = x;
        }
      }
      // best^best_order lies in the span; shift best so that its own order is best_order.
      const auto& coeff = span.at(g.pow(best, static_cast<long long>(best_order)));
      Element shifted = best;
      for (std::size_t i = 0; i < coeff.size(); ++i) {
        if (coeff[i] % best_order != 0)
          throw Error(ErrorKind::InternalInvariant, "basis extraction lost divisibility");
        shifted = g.mul(shifted, g.pow(chosen[i].first, -static_cast<long long>(coeff[i] / best_order)));
      }
      std::unordered_map<Element, std::vector<std::size_t>> next;
      for (const auto& [elem, vec] : span) {
        Element y = elem;
        for (std::size_t k = 0; k < best_order; ++k) {
          auto extended = vec;
          extended.push_back(k);
          next.emplace(y, std::move(extended));
          y = g.mul(y, shifted);
        }
      }
      span = std::move(next);
      chosen.emplace_back(shifted, best_order);
    }
    std::sort(chosen.begin(), chosen.end(), [](auto& a, auto& b) { return a.second > b.second; });
    primary.push_back(std::move(chosen));
  }

  // Invariant factors: the j-th largest factor multiplies the j-th basis element of every prime.
  std::size_t rank = 0;
  for (const auto& part : primary) rank = std::max(rank, part.size());
  for (std::size_t j = 0; j < rank; ++j) {
    Element gen = g.identity();
    std::size_t order = 1;
    for (const auto& part : primary) {
      if (j >= part.size()) continue;
      gen = g.mul(gen, part[j].first);
      order *= part[j].second;
    }
    basis.gens.push_back(gen);
    basis.orders.push_back(order);
  }
  std::reverse(basis.gens.begin(), basis.gens.end());
  std::reverse(basis.orders.begin(), basis.orders.end());

  // Enumerate prod gens_i^a_i; this also checks that the map is bijective.
  std::vector<std::size_t> a(basis.gens.size(), 0);
  std::size_t total = 1;
  for (std::size_t d : basis.orders) total *= d;
  for (std::size_t count = 0; count < total; ++count) {
    Element x = g.identity();
    for (std::size_t i = 0; i < a.size(); ++i) x = g.mul(x, g.pow(basis.gens[i], static_cast<long long>(a[i])));
    if (!h.contains(x) || !basis.logs.emplace(x, a).second)
      throw Error(ErrorKind::InternalInvariant, "abelian basis is not a bijection");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (++a[i] < basis.orders[i]) break;
      a[i] = 0;
    }
  }
  if (basis.logs.size() != h.order())
    throw Error(ErrorKind::InternalInvariant, "abelian basis does not cover the subgroup");
  return basis;
}

const std::vector<std::size_t>& discrete_log(const AbelianBasis& basis, Element g) {
  auto it = basis.logs.find(g);
  if (it == basis.logs.end())
    throw Error(ErrorKind::NotMember, "element " + basis.subgroup.parent->name(g) + " is not in the subgroup");
  return it->second;
}

Element conjugacy_class_id(const FiniteGroup& g, Element x) {
  Element best = x;
  for (Element h = 0; h < g.order(); ++h) best = std::min(best, g.conj(h, x));
  return best;
}

std::vector<Element> conjugacy_class_ids(const FiniteGroup& g) {
  const Element unset = Element(g.order());
  std::vector<Element> ids(g.order(), unset);
  for (Element x = 0; x < g.order(); ++x) {
    if (ids[x] != unset) continue;
    // x is the smallest unassigned index, hence the smallest member of its class.
    for (Element h = 0; h < g.order(); ++h) ids[g.conj(h, x)] = x;
  }
  return ids;
}

InvariantProfile invariant_profile(const GroupPtr& g) {
  InvariantProfile p;
  p.order = g->order();
  p.exponent = g->exponent();
  p.center_order = center(g).order();
  p.abelian = g->is_abelian();
  const auto ids = conjugacy_class_ids(*g);
  p.class_count = std::set<Element>(ids.begin(), ids.end()).size();
  for (Element x = 0; x < g->order(); ++x) ++p.element_orders[g->element_order(x)];
  return p;
}

}  // namespace leakproof
