#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "leakproof/flow.hpp"
#include "leakproof/group.hpp"
#include "leakproof/lattice.hpp"

namespace leakproof {

/// Where a relation row of Delta comes from.
struct RelationOrigin {
  enum class Kind { Order, Pair };
  Kind kind = Kind::Order;
  std::size_t coordinate = 0;  // Order: the coordinate d * e_i refers to
  std::size_t first = 0;       // Pair: subgroup indices and the shared element
  std::size_t second = 0;
  Element element = 0;
};

/// ⊕_{H in V(G)} H modulo the identifications of common elements.
///
/// Coordinates are the concatenated abelian bases of the maximal abelian
/// subgroups; relations are the order rows d_i e_i and, for every element g
/// generating a cyclic subgroup, log_H(g) - log_{H0}(g) for each maximal
/// abelian H containing g, where H0 is the first such subgroup.
struct DeltaPresentation {
  GroupPtr group;
  std::vector<Subgroup> subgroups;
  std::vector<AbelianBasis> bases;
  std::vector<std::size_t> offset;  // first coordinate of each subgroup's basis
  std::size_t dim = 0;
  std::uint64_t modulus = 1;
  std::vector<std::vector<std::int64_t>> relations;
  std::vector<RelationOrigin> origins;
  ModularLattice lattice{0, 1};
  std::vector<std::size_t> home;  // per element: index of the first subgroup containing it
};

struct DeltaOptions {
  std::size_t max_order = kDefaultMaxGroupOrder;
  bool track_coefficients = false;  // needed by witness_flow_from_kernel
};

DeltaPresentation build_delta(const GroupPtr& g, const DeltaOptions& options = {});

/// Coordinates of g inside subgroup `subgroup` (which must contain it), as a global vector.
std::vector<std::int64_t> embed_element(const DeltaPresentation& d, std::size_t subgroup, Element g);
/// Canonical representative of the image of gamma in Delta.
ModularLattice::Vec phi(const DeltaPresentation& d, Element gamma);
/// Same, computed through a chosen containing subgroup.
ModularLattice::Vec phi_via(const DeltaPresentation& d, Element gamma, std::size_t subgroup);
bool phi_is_zero(const DeltaPresentation& d, Element gamma);

/// For every pair of distinct subgroups and every basis generator g of their
/// intersection, log_{H1}(g) - log_{H2}(g). All of these lie in the relation span.
std::vector<std::vector<std::int64_t>> pairwise_relation_rows(const DeltaPresentation& d);

std::vector<std::uint64_t> delta_invariant_factors(const DeltaPresentation& d);

struct GroupLeakVerdict {
  bool leakproof = true;
  std::optional<Element> witness;  // smallest-index gamma != 1 with phi(gamma) == 0
};

GroupLeakVerdict is_leakproof_group(const DeltaPresentation& d);
GroupLeakVerdict is_leakproof_group(const GroupPtr& g, std::size_t max_order = kDefaultMaxGroupOrder);

struct BinaryLeakVerdict {
  bool injective = true;
  std::optional<std::pair<Element, Element>> collision;
};

BinaryLeakVerdict is_binary_leakproof_group(const DeltaPresentation& d);
BinaryLeakVerdict is_binary_leakproof_group(const GroupPtr& g, std::size_t max_order = kDefaultMaxGroupOrder);

/// Flow on the complete graph over V(G) (vertex i+1 is subgroup i) leaking
/// gamma at its home subgroup. Needs a presentation built with coefficient
/// tracking. Throws NotInKernel.
GroupFlow witness_flow_from_kernel(const DeltaPresentation& d, Element gamma);

}  // namespace leakproof
