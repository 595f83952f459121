#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace leakproof {

/// Row span of integer vectors over Z/m, kept in Howell form separately modulo
/// each prime power of m. Supports canonical coset representatives,
/// membership, solving for row coefficients and the invariant factors of
/// (Z/m)^dim / span.
class ModularLattice {
 public:
  using Vec = std::vector<std::uint64_t>;

  ModularLattice(std::size_t dim, std::uint64_t modulus, bool track_coefficients = false);

  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t modulus() const noexcept { return modulus_; }
  std::size_t row_count() const noexcept { return row_count_; }
  bool tracks_coefficients() const noexcept { return track_; }

  /// Adds a row (entries taken mod m) and returns its index.
  std::size_t add_row(const std::vector<std::int64_t>& row);

  /// Canonical representative of v + span, entries in [0, m).
  Vec reduce(const std::vector<std::int64_t>& v) const;
  bool contains(const std::vector<std::int64_t>& v) const;
  /// Coefficients c (one per added row, mod m) with sum c_i row_i == v mod m.
  /// Requires coefficient tracking.
  std::optional<Vec> solve(const std::vector<std::int64_t>& v) const;

  /// Invariant factors d_1 | d_2 | ... (all > 1) of (Z/m)^dim / span.
  std::vector<std::uint64_t> invariant_factors() const;
  /// Order of (Z/m)^dim / span; saturates at UINT64_MAX.
  std::uint64_t quotient_order() const;

  /// Every stored pivot row r with leading p^s satisfies p^(a-s) r in span of later rows.
  bool is_howell() const;

 private:
  struct Row {
    std::vector<std::uint32_t> v;
    std::vector<std::uint32_t> coeff;
  };

  // Row span modulo q = p^a.
  struct Local {
    std::uint32_t p = 0;
    std::uint32_t a = 0;
    std::uint32_t q = 0;
    std::vector<int> pivot;  // column -> index into rows, or -1
    std::vector<Row> rows;
  };

  void insert(Local& loc, Row row) const;
  void reduce_local(const Local& loc, std::vector<std::uint32_t>& v, std::vector<std::uint32_t>* coeff) const;
  std::vector<std::uint32_t> local_exponents(const Local& loc) const;

  std::size_t dim_;
  std::uint64_t modulus_;
  bool track_;
  std::size_t row_count_ = 0;
  std::vector<Local> locals_;
};

}  // namespace leakproof
