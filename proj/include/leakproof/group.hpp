#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace leakproof {

using Element = std::uint32_t;

inline constexpr std::size_t kDefaultMaxGroupOrder = 5040;

/// A finite group stored as a dense multiplication table.
///
/// Elements are the indices 0..order()-1. Every constructor in this library
/// places the identity at index 0, but callers must not rely on that for
/// groups read from Cayley files; use identity().
class FiniteGroup {
 public:
  /// Validates the table and builds the inverse table. Prefer group_from_cayley.
  FiniteGroup(std::vector<Element> table, std::size_t order, std::vector<std::string> names,
              std::string spec = {});

  std::size_t order() const noexcept { return order_; }
  Element identity() const noexcept { return identity_; }

  Element mul(Element a, Element b) const noexcept { return table_[std::size_t(a) * order_ + b]; }
  Element inv(Element a) const noexcept { return inverse_[a]; }
  Element pow(Element a, long long k) const;
  /// h * g * h^-1
  Element conj(Element h, Element g) const noexcept { return mul(mul(h, g), inv(h)); }
  bool commute(Element a, Element b) const noexcept { return mul(a, b) == mul(b, a); }

  std::size_t element_order(Element a) const noexcept { return orders_[a]; }
  std::size_t exponent() const noexcept { return exponent_; }
  bool is_abelian() const;

  const std::string& name(Element a) const { return names_[a]; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::optional<Element> find(std::string_view name) const;

  /// Parses a word such as "1", "x1*x4" or the concatenated form "x1x4x2x3".
  /// Factors are multiplied left to right.
  Element parse_word(std::string_view word) const;

  /// The group-spec string this group was built from, if any.
  const std::string& spec() const noexcept { return spec_; }
  void set_spec(std::string spec) { spec_ = std::move(spec); }

  /// A designated central involution (z for es:n, -1 for the quaternions, ...).
  /// Central products identify these.
  std::optional<Element> central_involution() const noexcept { return central_involution_; }
  void set_central_involution(Element z);

  std::span<const Element> table() const noexcept { return table_; }

 private:
  std::size_t order_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
  std::vector<std::size_t> orders_;
  std::size_t exponent_ = 1;
  Element identity_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, Element> by_name_;
  std::string spec_;
  std::optional<Element> central_involution_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Builds a group from a square table; row g, column h holds g*h.
/// Empty names are replaced by "g<i>" (identity: "1").
GroupPtr group_from_cayley(const std::vector<std::vector<Element>>& table,
                           std::vector<std::string> names = {});

/// Element of ES_n in coordinates z^eps x_1^u_1 .. x_n^u_n x_{n+1}^v_1 .. x_{2n}^v_n.
struct EsElement {
  bool eps = false;
  std::uint32_t u = 0;  // bit i-1 holds the exponent of x_i
  std::uint32_t v = 0;  // bit i-1 holds the exponent of x_{n+i}

  friend bool operator==(const EsElement&, const EsElement&) = default;
};

/// (e1,u1,v1)(e2,u2,v2) = (e1 + e2 + <v1,u2>, u1 + u2, v1 + v2) over GF(2).
EsElement es_multiply(const EsElement& a, const EsElement& b) noexcept;
Element es_index(const EsElement& x, int n) noexcept;
EsElement es_element(Element index, int n) noexcept;

GroupPtr es_group(int n, std::size_t max_order = kDefaultMaxGroupOrder);
GroupPtr cyclic_group(std::size_t n);
/// Symmetries of the n-gon, order 2n.
GroupPtr dihedral_group(std::size_t n);
GroupPtr quaternion_group();
GroupPtr symmetric_group(int n, std::size_t max_order = kDefaultMaxGroupOrder);
GroupPtr alternating_group(int n, std::size_t max_order = kDefaultMaxGroupOrder);
GroupPtr direct_product(const FiniteGroup& a, const FiniteGroup& b,
                        std::size_t max_order = kDefaultMaxGroupOrder);
/// (A x B) / <(zA, zB)> for the designated central involutions zA, zB.
GroupPtr central_product(const FiniteGroup& a, const FiniteGroup& b,
                         std::size_t max_order = kDefaultMaxGroupOrder);

/// cyclic:n | dihedral:n | quaternion | sym:n | alt:n | es:n | product:A,B |
/// centprod:A,B | cayley:path
GroupPtr standard_group(std::string_view spec, std::size_t max_order = kDefaultMaxGroupOrder);

/// Cayley file: order, then the element names, then order rows of indices.
GroupPtr read_cayley_file(const std::string& path);

struct Subgroup {
  GroupPtr parent;
  std::vector<Element> members;  // sorted

  std::size_t order() const noexcept { return members.size(); }
  bool contains(Element g) const;

  friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members == b.members; }
  friend bool operator<(const Subgroup& a, const Subgroup& b) { return a.members < b.members; }
};

Subgroup whole_group(const GroupPtr& g);
Subgroup generated_subgroup(const GroupPtr& g, std::span<const Element> gens);
Subgroup centralizer(const GroupPtr& g, std::span<const Element> set);
Subgroup center(const GroupPtr& g);
Subgroup intersection(const Subgroup& a, const Subgroup& b);
bool is_subgroup(const GroupPtr& g, std::span<const Element> members);
bool is_abelian(const Subgroup& h);

/// All subgroups H with H abelian and H equal to its own centralizer, sorted.
std::vector<Subgroup> maximal_abelian_subgroups(const GroupPtr& g);

struct AbelianBasis {
  Subgroup subgroup;
  std::vector<Element> gens;
  std::vector<std::size_t> orders;  // d_1 | d_2 | ... | d_k
  std::unordered_map<Element, std::vector<std::size_t>> logs;
};

/// Invariant-factor basis of an abelian subgroup. Throws NotAbelian.
AbelianBasis abelian_basis(const Subgroup& h);
/// Exponent vector a with prod gens_i^a_i == g, 0 <= a_i < d_i. Throws NotMember.
const std::vector<std::size_t>& discrete_log(const AbelianBasis& basis, Element g);

/// Minimum element index in the conjugacy class of g.
Element conjugacy_class_id(const FiniteGroup& g, Element x);
/// Class id of every element, computed in a single pass.
std::vector<Element> conjugacy_class_ids(const FiniteGroup& g);

/// Isomorphism invariants used to compare constructions.
struct InvariantProfile {
  std::size_t order = 0;
  std::size_t exponent = 0;
  std::size_t center_order = 0;
  std::size_t class_count = 0;
  bool abelian = false;
  std::map<std::size_t, std::size_t> element_orders;  // order -> count

  friend bool operator==(const InvariantProfile&, const InvariantProfile&) = default;
};

InvariantProfile invariant_profile(const GroupPtr& g);

}  // namespace leakproof
