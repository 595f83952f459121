#include "leakproof/group.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "leakproof/error.hpp"

namespace leakproof {

namespace {

constexpr std::size_t kExhaustiveAssociativityBound = 200;

std::string triple_text(const std::vector<std::string>& names, Element a, Element b, Element c) {
  return "(" + names[a] + ", " + names[b] + ", " + names[c] + ")";
}

// Light's test: associativity holds iff x(gy) = (xg)y for every x, y and every
// g in a generating set.
std::vector<Element> greedy_generators(const std::vector<Element>& table, std::size_t n,
                                       Element identity) {
  std::vector<Element> gens;
  std::vector<char> reached(n, 0);
  reached[identity] = 1;
  std::vector<Element> all{identity};
  for (Element candidate = 0; candidate < n; ++candidate) {
    if (reached[candidate]) continue;
    gens.push_back(candidate);
    // Recompute the closure of right multiplication by the generators.
    std::fill(reached.begin(), reached.end(), 0);
    reached[identity] = 1;
    all.assign(1, identity);
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (Element g : gens) {
        Element next = table[std::size_t(all[i]) * n + g];
        if (!reached[next]) {
          reached[next] = 1;
          all.push_back(next);
        }
      }
    }
  }
  return gens;
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotAssociative: return "NotAssociative";
    case ErrorKind::NoIdentity: return "NoIdentity";
    case ErrorKind::NoInverse: return "NoInverse";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::CentreMismatch: return "CentreMismatch";
    case ErrorKind::NotAbelian: return "NotAbelian";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::NotSpanning: return "NotSpanning";
    case ErrorKind::NotForest: return "NotForest";
    case ErrorKind::NotSubgraph: return "NotSubgraph";
    case ErrorKind::HostTooLarge: return "HostTooLarge";
    case ErrorKind::NotPlanarEmbedding: return "NotPlanarEmbedding";
    case ErrorKind::GraphMismatch: return "GraphMismatch";
    case ErrorKind::EdgeMissing: return "EdgeMissing";
    case ErrorKind::NotTractable: return "NotTractable";
    case ErrorKind::BridgeEdge: return "BridgeEdge";
    case ErrorKind::GraphIsPlanar: return "GraphIsPlanar";
    case ErrorKind::NotInKernel: return "NotInKernel";
    case ErrorKind::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

FiniteGroup::FiniteGroup(std::vector<Element> table, std::size_t order,
                         std::vector<std::string> names, std::string spec)
    : order_(order), table_(std::move(table)), names_(std::move(names)), spec_(std::move(spec)) {
  const std::size_t n = order_;
  if (n == 0) throw Error(ErrorKind::ParseError, "group must have at least one element");
  if (table_.size() != n * n) throw Error(ErrorKind::ParseError, "table is not square");
  for (Element x : table_) {
    if (x >= n) throw Error(ErrorKind::ParseError, "table entry " + std::to_string(x) + " out of range");
  }
  if (names_.empty()) {
    names_.resize(n);
    for (std::size_t i = 0; i < n; ++i) names_[i] = "g" + std::to_string(i);
  }
  if (names_.size() != n) throw Error(ErrorKind::ParseError, "expected " + std::to_string(n) + " names");

  auto name_of = [&](Element a) { return names_[a]; };

  bool found_identity = false;
  for (Element e = 0; e < n && !found_identity; ++e) {
    bool ok = true;
    for (Element x = 0; x < n && ok; ++x) ok = mul(e, x) == x && mul(x, e) == x;
    if (ok) {
      identity_ = e;
      found_identity = true;
    }
  }
  if (!found_identity) throw Error(ErrorKind::NoIdentity, "no two-sided identity element");

  inverse_.assign(n, 0);
  for (Element a = 0; a < n; ++a) {
    bool found = false;
    for (Element b = 0; b < n; ++b) {
      if (mul(a, b) == identity_ && mul(b, a) == identity_) {
        inverse_[a] = b;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorKind::NoInverse, "element " + name_of(a) + " has no inverse");
  }

  if (n <= kExhaustiveAssociativityBound) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) {
        const Element ab = mul(a, b);
        for (Element c = 0; c < n; ++c) {
          if (mul(ab, c) != mul(a, mul(b, c)))
            throw Error(ErrorKind::NotAssociative, "triple " + triple_text(names_, a, b, c));
        }
      }
  } else {
    for (Element g : greedy_generators(table_, n, identity_))
      for (Element x = 0; x < n; ++x) {
        const Element xg = mul(x, g);
        for (Element y = 0; y < n; ++y) {
          if (mul(x, mul(g, y)) != mul(xg, y))
            throw Error(ErrorKind::NotAssociative, "triple " + triple_text(names_, x, g, y));
        }
      }
  }

  for (Element a = 0; a < n; ++a) {
    auto [it, inserted] = by_name_.emplace(names_[a], a);
    if (!inserted) throw Error(ErrorKind::DuplicateName, "name '" + names_[a] + "' is used twice");
  }

  orders_.assign(n, 1);
  for (Element a = 0; a < n; ++a) {
    Element x = a;
    std::size_t k = 1;
    while (x != identity_) {
      x = mul(x, a);
      ++k;
    }
    orders_[a] = k;
    exponent_ = std::lcm(exponent_, k);
  }
}

Element FiniteGroup::pow(Element a, long long k) const {
  const long long ord = static_cast<long long>(orders_[a]);
  k %= ord;
  if (k < 0) k += ord;
  Element result = identity_;
  Element base = a;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

bool FiniteGroup::is_abelian() const {
  for (Element a = 0; a < order_; ++a)
    for (Element b = a + 1; b < order_; ++b)
      if (!commute(a, b)) return false;
  return true;
}

std::optional<Element> FiniteGroup::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void FiniteGroup::set_central_involution(Element z) {
  if (z >= order_ || orders_[z] != 2) throw Error(ErrorKind::CentreMismatch, "not an involution");
  for (Element g = 0; g < order_; ++g)
    if (!commute(g, z)) throw Error(ErrorKind::CentreMismatch, name(z) + " is not central");
  central_involution_ = z;
}

Element FiniteGroup::parse_word(std::string_view word) const {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  word = trim(word);
  if (word.empty()) throw Error(ErrorKind::ParseError, "empty group word");
  if (auto whole = find(word)) return *whole;
  if (word == "1") return identity_;

  // Splits a token into a concatenation of element names, longest match first.
  auto parse_token = [&](std::string_view token) -> Element {
    if (auto direct = find(token)) return *direct;
    if (token == "1") return identity_;
    std::size_t longest = 0;
    for (const auto& nm : names_) longest = std::max(longest, nm.size());
    const std::size_t len = token.size();
    // best[i]: word value of token[i..] if it decomposes
    std::vector<std::optional<Element>> best(len + 1);
    best[len] = identity_;
    for (std::size_t i = len; i-- > 0;) {
      for (std::size_t l = std::min(longest, len - i); l >= 1; --l) {
        if (!best[i + l]) continue;
        if (auto head = find(token.substr(i, l))) {
          best[i] = mul(*head, *best[i + l]);
          break;
        }
      }
    }
    if (!best[0]) throw Error(ErrorKind::ParseError, "unknown group word '" + std::string(token) + "'");
    return *best[0];
  };

  Element result = identity_;
  std::size_t start = 0;
  while (start <= word.size()) {
    std::size_t star = word.find('*', start);
    if (star == std::string_view::npos) star = word.size();
    std::string_view token = trim(word.substr(start, star - start));
    if (token.empty()) throw Error(ErrorKind::ParseError, "empty factor in '" + std::string(word) + "'");
    result = mul(result, parse_token(token));
    start = star + 1;
  }
  return result;
}

GroupPtr group_from_cayley(const std::vector<std::vector<Element>>& table,
                           std::vector<std::string> names) {
  const std::size_t n = table.size();
  std::vector<Element> flat;
  flat.reserve(n * n);
  for (const auto& row : table) {
    if (row.size() != n) throw Error(ErrorKind::ParseError, "table is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return std::make_shared<FiniteGroup>(std::move(flat), n, std::move(names));
}

GroupPtr read_cayley_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open Cayley file '" + path + "'");
  std::size_t n = 0;
  if (!(in >> n) || n == 0) throw Error(ErrorKind::ParseError, path + ": line 1 must hold the order");
  std::vector<std::string> names(n);
  for (auto& nm : names)
    if (!(in >> nm)) throw Error(ErrorKind::ParseError, path + ": expected " + std::to_string(n) + " names");
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      long long x = -1;
      if (!(in >> x) || x < 0)
        throw Error(ErrorKind::ParseError, path + ": bad entry at row " + std::to_string(r) +
                                               ", column " + std::to_string(c));
      table[r][c] = static_cast<Element>(x);
    }
  auto g = group_from_cayley(table, std::move(names));
  std::const_pointer_cast<FiniteGroup>(g)->set_spec("cayley:" + path);
  return g;
}

}  // namespace leakproof
