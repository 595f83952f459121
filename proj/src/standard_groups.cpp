#include <algorithm>
#include <bit>
#include <charconv>
#include <map>
#include <numeric>

#include "leakproof/error.hpp"
#include "leakproof/group.hpp"

namespace leakproof {

namespace {

void check_size(std::size_t order, std::size_t max_order, std::string_view what) {
  if (order > max_order)
    throw Error(ErrorKind::TooLarge, std::string(what) + " has order " + std::to_string(order) +
                                         ", above the bound " + std::to_string(max_order));
}

template <class Mul>
std::vector<Element> build_table(std::size_t n, Mul&& mul) {
  std::vector<Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = mul(Element(a), Element(b));
  return table;
}

std::shared_ptr<FiniteGroup> make_group(std::vector<Element> table, std::size_t n,
                                        std::vector<std::string> names, std::string spec) {
  return std::make_shared<FiniteGroup>(std::move(table), n, std::move(names), std::move(spec));
}

std::string power_name(const std::string& base, std::size_t k) {
  if (k == 0) return "1";
  if (k == 1) return base;
  return base + "^" + std::to_string(k);
}

using Permutation = std::vector<int>;  // 0-based images

std::string cycle_notation(const Permutation& p) {
  std::string out;
  std::vector<char> seen(p.size(), 0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i] || p[i] == int(i)) continue;
    out += "(";
    std::size_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = 1;
      if (!first) out += ",";
      out += std::to_string(j + 1);
      first = false;
      j = std::size_t(p[j]);
    }
    out += ")";
  }
  return out.empty() ? "1" : out;
}

bool is_even(const Permutation& p) {
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0;
}

// Permutations in lexicographic order (identity first), optionally only even ones.
GroupPtr permutation_group(int n, bool even_only, std::size_t max_order, std::string spec) {
  if (n < 1) throw Error(ErrorKind::ParseError, "degree must be positive");
  std::size_t full = 1;
  for (int i = 2; i <= n; ++i) {
    full *= std::size_t(i);
    if (full > 100 * max_order) break;
  }
  const std::size_t order = (even_only && n >= 2) ? full / 2 : full;
  check_size(order, max_order, spec);

  std::vector<Permutation> perms;
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  do {
    if (!even_only || is_even(p)) perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  // Lexicographic rank of a permutation -> element index.
  auto rank = [n](const Permutation& q) {
    std::size_t r = 0;
    for (int i = 0; i < n; ++i) {
      std::size_t smaller = 0;
      for (int j = i + 1; j < n; ++j) smaller += q[std::size_t(j)] < q[std::size_t(i)];
      r = r * std::size_t(n - i) + smaller;
    }
    return r;
  };
  std::vector<Element> index(full, 0);
  for (std::size_t i = 0; i < perms.size(); ++i) index[rank(perms[i])] = Element(i);

  // (s * t)(x) = s(t(x))
  const std::size_t m = perms.size();
  std::vector<Element> table(m * m);
  Permutation prod(static_cast<std::size_t>(n));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      for (int x = 0; x < n; ++x) prod[std::size_t(x)] = perms[a][std::size_t(perms[b][std::size_t(x)])];
      table[a * m + b] = index[rank(prod)];
    }
  std::vector<std::string> names;
  names.reserve(m);
  for (const auto& q : perms) names.push_back(cycle_notation(q));
  return make_group(std::move(table), m, std::move(names), std::move(spec));
}

std::size_t parse_count(std::string_view text, std::string_view spec) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw Error(ErrorKind::ParseError, "expected a number in group spec '" + std::string(spec) + "'");
  return value;
}

}  // namespace

EsElement es_multiply(const EsElement& a, const EsElement& b) noexcept {
  const bool cross = std::popcount(a.v & b.u) % 2 == 1;
  return EsElement{bool(a.eps ^ b.eps ^ cross), a.u ^ b.u, a.v ^ b.v};
}

Element es_index(const EsElement& x, int n) noexcept {
  return Element(x.eps) | (x.u << 1) | (x.v << (1 + n));
}

EsElement es_element(Element index, int n) noexcept {
  const std::uint32_t mask = (1u << n) - 1;
  return EsElement{bool(index & 1u), (index >> 1) & mask, (index >> (1 + n)) & mask};
}

GroupPtr es_group(int n, std::size_t max_order) {
  if (n < 1) throw Error(ErrorKind::ParseError, "es:n needs n >= 1");
  if (n > 15) throw Error(ErrorKind::TooLarge, "es:" + std::to_string(n) + " is far above any table bound");
  const std::size_t order = std::size_t(1) << (2 * n + 1);
  check_size(order, max_order, "es:" + std::to_string(n));

  auto table = build_table(order, [n](Element a, Element b) {
    return es_index(es_multiply(es_element(a, n), es_element(b, n)), n);
  });

  // Reduced word z^eps x1^u1 .. xn^un x(n+1)^v1 .. x(2n)^vn.
  std::vector<std::string> names(order);
  for (Element idx = 0; idx < order; ++idx) {
    const EsElement x = es_element(idx, n);
    std::vector<std::string> factors;
    if (x.eps) factors.emplace_back("z");
    for (int i = 0; i < n; ++i)
      if (x.u >> i & 1u) factors.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i)
      if (x.v >> i & 1u) factors.push_back("x" + std::to_string(n + i + 1));
    std::string word;
    for (const auto& f : factors) word += (word.empty() ? "" : "*") + f;
    names[idx] = word.empty() ? "1" : word;
  }
  auto g = make_group(std::move(table), order, std::move(names), "es:" + std::to_string(n));
  g->set_central_involution(es_index(EsElement{true, 0, 0}, n));
  return g;
}

GroupPtr cyclic_group(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::ParseError, "cyclic:n needs n >= 1");
  auto table = build_table(n, [n](Element a, Element b) { return Element((a + b) % n); });
  std::vector<std::string> names(n);
  for (std::size_t k = 0; k < n; ++k) names[k] = power_name("a", k);
  auto g = make_group(std::move(table), n, std::move(names), "cyclic:" + std::to_string(n));
  if (n % 2 == 0) g->set_central_involution(Element(n / 2));
  return g;
}

GroupPtr dihedral_group(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::ParseError, "dihedral:n needs n >= 1");
  // index i + n*j stands for r^i s^j; s r s = r^-1
  const std::size_t order = 2 * n;
  auto table = build_table(order, [n](Element a, Element b) {
    const std::size_t i = a % n, j = a / n, k = b % n, l = b / n;
    const std::size_t rot = j == 0 ? (i + k) % n : (i + n - k) % n;
    return Element(rot + n * ((j + l) % 2));
  });
  std::vector<std::string> names(order);
  for (std::size_t i = 0; i < n; ++i) {
    names[i] = power_name("r", i);
    names[i + n] = i == 0 ? "s" : power_name("r", i) + "*s";
  }
  auto g = make_group(std::move(table), order, std::move(names), "dihedral:" + std::to_string(n));
  if (n % 2 == 0) g->set_central_involution(Element(n / 2));
  return g;
}

GroupPtr quaternion_group() {
  // index 2*u + sign, units u: 1, i, j, k
  static constexpr int unit_product[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int unit_sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  auto table = build_table(8, [](Element a, Element b) {
    const int ua = int(a) / 2, ub = int(b) / 2;
    const int sign = (int(a) % 2 + int(b) % 2 + unit_sign[ua][ub]) % 2;
    return Element(2 * unit_product[ua][ub] + sign);
  });
  std::vector<std::string> names{"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
  auto g = make_group(std::move(table), 8, std::move(names), "quaternion");
  g->set_central_involution(1);
  return g;
}

GroupPtr symmetric_group(int n, std::size_t max_order) {
  return permutation_group(n, false, max_order, "sym:" + std::to_string(n));
}

GroupPtr alternating_group(int n, std::size_t max_order) {
  return permutation_group(n, true, max_order, "alt:" + std::to_string(n));
}

GroupPtr direct_product(const FiniteGroup& a, const FiniteGroup& b, std::size_t max_order) {
  const std::size_t na = a.order(), nb = b.order();
  check_size(na * nb, max_order, "product");
  // index x*nb + y stands for (x, y)
  auto table = build_table(na * nb, [&](Element p, Element q) {
    return Element(a.mul(p / nb, q / nb) * nb + b.mul(p % nb, q % nb));
  });
  std::vector<std::string> names(na * nb);
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) {
      const bool unit = Element(x) == a.identity() && Element(y) == b.identity();
      names[x * nb + y] = unit ? "1" : "(" + a.name(Element(x)) + "," + b.name(Element(y)) + ")";
    }
  auto g = make_group(std::move(table), na * nb, std::move(names),
                      "product:" + a.spec() + "," + b.spec());
  if (a.central_involution())
    g->set_central_involution(Element(*a.central_involution() * nb + b.identity()));
  else if (b.central_involution())
    g->set_central_involution(Element(a.identity() * nb + *b.central_involution()));
  return g;
}

GroupPtr central_product(const FiniteGroup& a, const FiniteGroup& b, std::size_t max_order) {
  if (!a.central_involution() || !b.central_involution())
    throw Error(ErrorKind::CentreMismatch,
                "central product needs a designated central involution in both factors");
  const std::size_t na = a.order(), nb = b.order();
  check_size(na * nb / 2, max_order, "centprod");
  const Element za = *a.central_involution(), zb = *b.central_involution();
  auto pair_index = [nb](Element x, Element y) { return std::size_t(x) * nb + y; };
  auto partner = [&](std::size_t p) {
    return pair_index(a.mul(Element(p / nb), za), b.mul(Element(p % nb), zb));
  };
  // Each coset {p, p*(za,zb)} is represented by its smaller index.
  std::vector<Element> coset(na * nb);
  std::vector<std::size_t> reps;
  for (std::size_t p = 0; p < na * nb; ++p) {
    const std::size_t q = partner(p);
    if (p <= q) {
      coset[p] = Element(reps.size());
      reps.push_back(p);
    } else {
      coset[p] = coset[q];
    }
  }
  const std::size_t order = reps.size();
  auto table = build_table(order, [&](Element x, Element y) {
    const std::size_t p = reps[x], q = reps[y];
    return coset[pair_index(a.mul(Element(p / nb), Element(q / nb)), b.mul(Element(p % nb), Element(q % nb)))];
  });
  std::vector<std::string> names(order);
  for (std::size_t i = 0; i < order; ++i) {
    const Element x = Element(reps[i] / nb), y = Element(reps[i] % nb);
    const bool unit = coset[pair_index(x, y)] == coset[pair_index(a.identity(), b.identity())];
    names[i] = unit ? "1" : "(" + a.name(x) + "," + b.name(y) + ")";
  }
  auto g = make_group(std::move(table), order, std::move(names),
                      "centprod:" + a.spec() + "," + b.spec());
  g->set_central_involution(coset[pair_index(za, b.identity())]);
  return g;
}

GroupPtr standard_group(std::string_view spec, std::size_t max_order) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  auto need_arg = [&] {
    if (colon == std::string_view::npos)
      throw Error(ErrorKind::ParseError, "group spec '" + std::string(spec) + "' needs an argument");
  };

  if (head == "quaternion") {
    if (colon != std::string_view::npos) throw Error(ErrorKind::ParseError, "quaternion takes no argument");
    return quaternion_group();
  }
  if (head == "cyclic") {
    need_arg();
    const std::size_t n = parse_count(rest, spec);
    check_size(n, max_order, spec);
    return cyclic_group(n);
  }
  if (head == "dihedral") {
    need_arg();
    const std::size_t n = parse_count(rest, spec);
    check_size(2 * n, max_order, spec);
    return dihedral_group(n);
  }
  if (head == "sym") {
    need_arg();
    return symmetric_group(int(parse_count(rest, spec)), max_order);
  }
  if (head == "alt") {
    need_arg();
    return alternating_group(int(parse_count(rest, spec)), max_order);
  }
  if (head == "es") {
    need_arg();
    return es_group(int(parse_count(rest, spec)), max_order);
  }
  if (head == "cayley") {
    need_arg();
    auto g = read_cayley_file(std::string(rest));
    check_size(g->order(), max_order, spec);
    return g;
  }
  if (head == "product" || head == "centprod") {
    need_arg();
    // Nested specs contain commas too: take the first split where both halves parse.
    for (std::size_t comma = rest.find(','); comma != std::string_view::npos;
         comma = rest.find(',', comma + 1)) {
      GroupPtr left, right;
      try {
        left = standard_group(rest.substr(0, comma), max_order);
        right = standard_group(rest.substr(comma + 1), max_order);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::ParseError) throw;
        continue;
      }
      GroupPtr g = head == "product" ? direct_product(*left, *right, max_order)
                                     : central_product(*left, *right, max_order);
      std::const_pointer_cast<FiniteGroup>(g)->set_spec(std::string(spec));
      return g;
    }
    throw Error(ErrorKind::ParseError, "cannot split '" + std::string(spec) + "' into two group specs");
  }
  throw Error(ErrorKind::ParseError, "unknown group spec '" + std::string(spec) + "'");
}

}  // namespace leakproof
