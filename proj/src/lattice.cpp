#include "leakproof/lattice.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace leakproof {

namespace {

std::uint64_t inverse_mod(std::uint64_t x, std::uint64_t q) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = std::int64_t(q), new_r = std::int64_t(x % q);
  while (new_r != 0) {
    const std::int64_t k = r / new_r;
    t -= k * new_t;
    std::swap(t, new_t);
    r -= k * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::logic_error("not a unit");
  return std::uint64_t(t < 0 ? t + std::int64_t(q) : t);
}

std::uint32_t mod_of(std::int64_t x, std::uint64_t q) {
  const std::int64_t r = x % std::int64_t(q);
  return std::uint32_t(r < 0 ? r + std::int64_t(q) : r);
}

}  // namespace

ModularLattice::ModularLattice(std::size_t dim, std::uint64_t modulus, bool track_coefficients)
    : dim_(dim), modulus_(modulus), track_(track_coefficients) {
  if (modulus == 0) throw std::invalid_argument("modulus must be positive");
  if (modulus > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("modulus too large");
  std::uint64_t n = modulus;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    Local loc;
    loc.p = std::uint32_t(p);
    loc.q = 1;
    while (n % p == 0) {
      n /= p;
      loc.q *= std::uint32_t(p);
      ++loc.a;
    }
    locals_.push_back(std::move(loc));
  }
  if (n > 1) locals_.push_back(Local{std::uint32_t(n), 1, std::uint32_t(n), {}, {}});
  for (auto& loc : locals_) loc.pivot.assign(dim_, -1);
}

std::size_t ModularLattice::add_row(const std::vector<std::int64_t>& row) {
  if (row.size() != dim_) throw std::invalid_argument("row has the wrong length");
  const std::size_t index = row_count_++;
  for (auto& loc : locals_) {
    Row r;
    r.v.resize(dim_);
    for (std::size_t c = 0; c < dim_; ++c) r.v[c] = mod_of(row[c], loc.q);
    if (track_) {
      r.coeff.assign(row_count_, 0);
      r.coeff[index] = 1;
    }
    insert(loc, std::move(r));
  }
  return index;
}

void ModularLattice::insert(Local& loc, Row first) const {
  const std::uint64_t q = loc.q;
  auto valuation = [&](std::uint64_t x) {
    std::uint32_t s = 0;
    while (x % loc.p == 0 && s < loc.a) {
      x /= loc.p;
      ++s;
    }
    return s;
  };
  auto power = [&](std::uint32_t s) {
    std::uint64_t x = 1;
    for (std::uint32_t i = 0; i < s; ++i) x *= loc.p;
    return x;
  };
  auto axpy = [&](Row& target, std::uint64_t f, const Row& source) {
    // target -= f * source
    if (f == 0) return;
    const std::uint64_t neg = (q - f % q) % q;
    for (std::size_t c = 0; c < dim_; ++c)
      if (source.v[c]) target.v[c] = std::uint32_t((target.v[c] + neg * source.v[c]) % q);
    if (track_) {
      if (target.coeff.size() < source.coeff.size()) target.coeff.resize(source.coeff.size(), 0);
      for (std::size_t i = 0; i < source.coeff.size(); ++i)
        if (source.coeff[i]) target.coeff[i] = std::uint32_t((target.coeff[i] + neg * source.coeff[i]) % q);
    }
  };
  auto scale = [&](Row& r, std::uint64_t f) {
    for (auto& x : r.v) x = std::uint32_t((x * f) % q);
    for (auto& x : r.coeff) x = std::uint32_t((x * f) % q);
  };
  // Normalises r so its entry at c is p^s, installs it as the pivot and queues its annihilator multiple.
  std::deque<Row> queue;
  auto install = [&](Row r, std::size_t c) -> const Row& {
    const std::uint32_t s = valuation(r.v[c]);
    const std::uint64_t unit = r.v[c] / power(s);
    scale(r, inverse_mod(unit, q));
    if (s > 0) {
      Row ann = r;
      scale(ann, power(loc.a - s));
      queue.push_back(std::move(ann));
    }
    if (loc.pivot[c] >= 0) {
      std::swap(loc.rows[std::size_t(loc.pivot[c])], r);
    } else {
      loc.pivot[c] = int(loc.rows.size());
      loc.rows.push_back(std::move(r));
    }
    return loc.rows[std::size_t(loc.pivot[c])];
  };

  queue.push_back(std::move(first));
  while (!queue.empty()) {
    Row v = std::move(queue.front());
    queue.pop_front();
    for (std::size_t c = 0; c < dim_; ++c) {
      if (v.v[c] == 0) continue;
      if (loc.pivot[c] < 0) {
        install(std::move(v), c);
        break;
      }
      const Row& r = loc.rows[std::size_t(loc.pivot[c])];
      const std::uint64_t lead = r.v[c];
      if (valuation(v.v[c]) >= valuation(lead)) {
        axpy(v, v.v[c] / lead, r);
        continue;
      }
      // v has the smaller valuation: it becomes the pivot and the old pivot row is reduced further.
      Row old = loc.rows[std::size_t(loc.pivot[c])];
      const Row& fresh = install(std::move(v), c);
      axpy(old, old.v[c] / fresh.v[c], fresh);
      v = std::move(old);
    }
  }
}

void ModularLattice::reduce_local(const Local& loc, std::vector<std::uint32_t>& v,
                                  std::vector<std::uint32_t>* coeff) const {
  const std::uint64_t q = loc.q;
  for (std::size_t c = 0; c < dim_; ++c) {
    if (v[c] == 0 || loc.pivot[c] < 0) continue;
    const Row& r = loc.rows[std::size_t(loc.pivot[c])];
    const std::uint64_t f = v[c] / r.v[c];
    if (f == 0) continue;
    const std::uint64_t neg = q - f;
    for (std::size_t k = c; k < dim_; ++k)
      if (r.v[k]) v[k] = std::uint32_t((v[k] + neg * r.v[k]) % q);
    if (coeff)
      for (std::size_t i = 0; i < r.coeff.size(); ++i)
        if (r.coeff[i]) (*coeff)[i] = std::uint32_t(((*coeff)[i] + f * r.coeff[i]) % q);
  }
}

ModularLattice::Vec ModularLattice::reduce(const std::vector<std::int64_t>& v) const {
  if (v.size() != dim_) throw std::invalid_argument("vector has the wrong length");
  Vec out(dim_, 0);
  for (const auto& loc : locals_) {
    std::vector<std::uint32_t> w(dim_);
    for (std::size_t c = 0; c < dim_; ++c) w[c] = mod_of(v[c], loc.q);
    reduce_local(loc, w, nullptr);
    // Chinese remaindering: out += w * M * (M^-1 mod q) with M = m / q.
    const std::uint64_t big = modulus_ / loc.q;
    const std::uint64_t lift = big * inverse_mod(big % loc.q, loc.q) % modulus_;
    for (std::size_t c = 0; c < dim_; ++c) out[c] = (out[c] + w[c] * lift) % modulus_;
  }
  return out;
}

bool ModularLattice::contains(const std::vector<std::int64_t>& v) const {
  const Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](std::uint64_t x) { return x == 0; });
}

std::optional<ModularLattice::Vec> ModularLattice::solve(const std::vector<std::int64_t>& v) const {
  if (!track_) throw std::logic_error("solve needs coefficient tracking");
  if (v.size() != dim_) throw std::invalid_argument("vector has the wrong length");
  Vec out(row_count_, 0);
  for (const auto& loc : locals_) {
    std::vector<std::uint32_t> w(dim_), coeff(row_count_, 0);
    for (std::size_t c = 0; c < dim_; ++c) w[c] = mod_of(v[c], loc.q);
    reduce_local(loc, w, &coeff);
    if (std::any_of(w.begin(), w.end(), [](std::uint32_t x) { return x != 0; })) return std::nullopt;
    const std::uint64_t big = modulus_ / loc.q;
    const std::uint64_t lift = big * inverse_mod(big % loc.q, loc.q) % modulus_;
    for (std::size_t i = 0; i < row_count_; ++i) out[i] = (out[i] + coeff[i] * lift) % modulus_;
  }
  return out;
}

std::vector<std::uint32_t> ModularLattice::local_exponents(const Local& loc) const {
  const std::uint64_t q = loc.q;
  auto valuation = [&](std::uint64_t x) {
    std::uint32_t s = 0;
    while (x % loc.p == 0 && s < loc.a) {
      x /= loc.p;
      ++s;
    }
    return s;
  };
  std::vector<std::vector<std::uint32_t>> m;
  for (const auto& r : loc.rows) m.push_back(r.v);
  const std::size_t k = m.size();
  std::vector<std::uint32_t> exps;  // exponent of p in each cyclic factor of the quotient
  std::size_t rank = 0;
  for (std::size_t step = 0; step < std::min(k, dim_); ++step) {
    std::uint32_t best = loc.a;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = step; i < k && best > 0; ++i)
      for (std::size_t j = step; j < dim_; ++j) {
        if (m[i][j] == 0) continue;
        const std::uint32_t s = valuation(m[i][j]);
        if (s < best) {
          best = s;
          bi = i;
          bj = j;
          if (s == 0) break;
        }
      }
    if (best == loc.a) break;
    std::swap(m[step], m[bi]);
    if (bj != step)
      for (auto& row : m) std::swap(row[step], row[bj]);
    std::uint64_t pp = 1;
    for (std::uint32_t i = 0; i < best; ++i) pp *= loc.p;
    const std::uint64_t unit_inv = inverse_mod(m[step][step] / pp, q);
    for (auto& x : m[step]) x = std::uint32_t((x * unit_inv) % q);
    for (std::size_t i = step + 1; i < k; ++i) {
      const std::uint64_t f = m[i][step] / pp;
      if (f == 0) continue;
      const std::uint64_t neg = q - f % q;
      for (std::size_t j = step; j < dim_; ++j)
        if (m[step][j]) m[i][j] = std::uint32_t((m[i][j] + neg * m[step][j]) % q);
    }
    // Column operations clear the rest of the pivot row without touching other rows.
    for (std::size_t j = step + 1; j < dim_; ++j) m[step][j] = 0;
    exps.push_back(best);
    ++rank;
  }
  for (std::size_t j = rank; j < dim_; ++j) exps.push_back(loc.a);
  // exps holds valuations of diagonal entries; a diagonal entry p^s leaves a factor Z/p^s.
  std::vector<std::uint32_t> out;
  for (std::uint32_t s : exps)
    if (s > 0) out.push_back(s);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<std::uint64_t> ModularLattice::invariant_factors() const {
  std::vector<std::vector<std::uint32_t>> per_prime;
  std::size_t longest = 0;
  for (const auto& loc : locals_) {
    per_prime.push_back(local_exponents(loc));
    longest = std::max(longest, per_prime.back().size());
  }
  std::vector<std::uint64_t> out(longest, 1);
  for (std::size_t i = 0; i < locals_.size(); ++i)
    for (std::size_t j = 0; j < per_prime[i].size(); ++j)
      for (std::uint32_t e = 0; e < per_prime[i][j]; ++e) out[j] *= locals_[i].p;
  std::reverse(out.begin(), out.end());
  return out;
}

std::uint64_t ModularLattice::quotient_order() const {
  std::uint64_t order = 1;
  for (std::uint64_t d : invariant_factors()) {
    if (order > std::numeric_limits<std::uint64_t>::max() / d) return std::numeric_limits<std::uint64_t>::max();
    order *= d;
  }
  return order;
}

bool ModularLattice::is_howell() const {
  for (const auto& loc : locals_)
    for (std::size_t c = 0; c < dim_; ++c) {
      if (loc.pivot[c] < 0) continue;
      const Row& r = loc.rows[std::size_t(loc.pivot[c])];
      std::uint64_t pp = 1;
      while (r.v[c] % (pp * loc.p) == 0 && pp * loc.p <= loc.q) pp *= loc.p;
      if (r.v[c] != pp) return false;  // leading entries are normalised to prime powers
      std::vector<std::uint32_t> w(dim_);
      const std::uint64_t ann = loc.q / pp;
      for (std::size_t k = 0; k < dim_; ++k) w[k] = std::uint32_t((r.v[k] * ann) % loc.q);
      reduce_local(loc, w, nullptr);
      if (std::any_of(w.begin(), w.end(), [](std::uint32_t x) { return x != 0; })) return false;
      for (std::size_t k = 0; k < c; ++k)
        if (r.v[k]) return false;  // echelon shape
    }
  return true;
}

}  // namespace leakproof
