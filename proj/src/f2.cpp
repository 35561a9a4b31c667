#include "arithreg/f2.hpp"

#include <algorithm>
#include <functional>

#include "arithreg/errors.hpp"

namespace arithreg::f2 {

namespace {

int top_bit(Vec v) { return 63 - std::countl_zero(v); }

void check_dim(int n) {
  if (n < 0 || n > 63) throw DomainError("F2 ambient dimension must lie in [0, 63]");
}

}  // namespace

int rank(std::span<const Vec> rows) {
  std::vector<Vec> basis;
  for (Vec v : rows) {
    for (Vec b : basis) v = std::min(v, v ^ b);
    if (v) {
      basis.push_back(v);
      std::sort(basis.begin(), basis.end(), std::greater<>());
    }
  }
  return static_cast<int>(basis.size());
}

Subgroup::Subgroup(int ambient_dim, std::span<const Vec> generators) : n_(ambient_dim) {
  check_dim(n_);
  const Vec mask = n_ == 64 ? ~Vec{0} : (Vec{1} << n_) - 1;
  for (Vec v : generators) {
    if (v & ~mask) throw DomainError("generator outside F2^" + std::to_string(n_));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if ((v >> pivots_[i]) & 1) v ^= basis_[i];
    }
    if (!v) continue;
    const int p = top_bit(v);
    for (auto& row : basis_) {
      if ((row >> p) & 1) row ^= v;
    }
    basis_.push_back(v);
    pivots_.push_back(p);
  }
  std::vector<std::size_t> order(basis_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pivots_[a] > pivots_[b]; });
  std::vector<Vec> rows;
  std::vector<int> piv;
  for (auto i : order) {
    rows.push_back(basis_[i]);
    piv.push_back(pivots_[i]);
  }
  basis_ = std::move(rows);
  pivots_ = std::move(piv);
}

Subgroup Subgroup::full(int n) {
  check_dim(n);
  std::vector<Vec> gens;
  for (int b = n - 1; b >= 0; --b) gens.push_back(Vec{1} << b);
  return Subgroup(n, gens);
}

Subgroup Subgroup::trivial(int n) { return Subgroup(n, std::span<const Vec>{}); }

bool Subgroup::contains(const Subgroup& other) const {
  if (other.n_ != n_) return false;
  return std::all_of(other.basis_.begin(), other.basis_.end(), [&](Vec v) { return contains(v); });
}

Vec Subgroup::reduce(Vec x) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if ((x >> pivots_[i]) & 1) x ^= basis_[i];
  }
  return x;
}

std::vector<Vec> Subgroup::coset_reps() const {
  std::vector<int> free_bits;
  for (int b = 0; b < n_; ++b) {
    if (std::find(pivots_.begin(), pivots_.end(), b) == pivots_.end()) free_bits.push_back(b);
  }
  const std::size_t count = std::size_t{1} << free_bits.size();
  std::vector<Vec> reps(count);
  for (std::size_t c = 0; c < count; ++c) {
    Vec v = 0;
    for (std::size_t k = 0; k < free_bits.size(); ++k) {
      if ((c >> k) & 1) v |= Vec{1} << free_bits[k];
    }
    reps[c] = v;
  }
  return reps;
}

Vec Subgroup::element(std::uint64_t local) const {
  const int t = dim();
  Vec x = 0;
  for (int j = 0; j < t; ++j) {
    if ((local >> (t - 1 - j)) & 1) x ^= basis_[static_cast<std::size_t>(j)];
  }
  return x;
}

std::vector<Vec> Subgroup::elements() const {
  const int t = dim();
  std::vector<Vec> out(size());
  for (std::size_t a = 1; a < out.size(); ++a) {
    const int low = std::countr_zero(a);
    out[a] = out[a & (a - 1)] ^ basis_[static_cast<std::size_t>(t - 1 - low)];
  }
  return out;
}

std::uint64_t Subgroup::local_coords(Vec x) const {
  const int t = dim();
  std::uint64_t a = 0;
  for (int j = 0; j < t; ++j) {
    if ((x >> pivots_[static_cast<std::size_t>(j)]) & 1) a |= std::uint64_t{1} << (t - 1 - j);
  }
  return a;
}

std::uint64_t Subgroup::restrict_character(Vec xi) const {
  const int t = dim();
  std::uint64_t eta = 0;
  for (int j = 0; j < t; ++j) {
    if (dot(basis_[static_cast<std::size_t>(j)], xi)) eta |= std::uint64_t{1} << (t - 1 - j);
  }
  return eta;
}

Vec Subgroup::lift_character(std::uint64_t eta) const {
  const int t = dim();
  Vec xi = 0;
  for (int j = 0; j < t; ++j) {
    if ((eta >> (t - 1 - j)) & 1) xi |= Vec{1} << pivots_[static_cast<std::size_t>(j)];
  }
  return xi;
}

Subgroup Subgroup::annihilator_within(std::span<const std::uint64_t> local_chars) const {
  const Subgroup local = annihilator(local_chars, dim());
  std::vector<Vec> gens;
  gens.reserve(local.basis().size());
  for (Vec a : local.basis()) gens.push_back(element(a));
  return Subgroup(n_, gens);
}

Subgroup Subgroup::intersect(const Subgroup& other) const {
  if (other.n_ != n_) throw DomainError("subgroups live in different ambient spaces");
  std::vector<Vec> dual = annihilator(*this).basis();
  const Subgroup other_dual = annihilator(other);
  const auto& more = other_dual.basis();
  dual.insert(dual.end(), more.begin(), more.end());
  return annihilator(dual, n_);
}

Subgroup annihilator(std::span<const Vec> chars, int n) {
  const Subgroup rows(n, chars);
  const auto& piv = rows.pivots();
  std::vector<Vec> gens;
  for (int f = n - 1; f >= 0; --f) {
    if (std::find(piv.begin(), piv.end(), f) != piv.end()) continue;
    Vec v = Vec{1} << f;
    for (std::size_t i = 0; i < rows.basis().size(); ++i) {
      if ((rows.basis()[i] >> f) & 1) v |= Vec{1} << piv[i];
    }
    gens.push_back(v);
  }
  return Subgroup(n, gens);
}

std::vector<Vec> coset_reps(const Subgroup& h) { return h.coset_reps(); }

std::vector<Subgroup> all_subgroups(int n, int dim) {
  check_dim(n);
  std::vector<Subgroup> out;
  if (dim < 0 || dim > n) return out;
  std::vector<int> piv(static_cast<std::size_t>(dim));
  std::vector<Vec> rows(static_cast<std::size_t>(dim));
  // Pivot sets in decreasing order, then every filling of the free entries.
  std::function<void(int, int)> choose_pivots;
  std::function<void(int)> fill;
  fill = [&](int row) {
    if (row == dim) {
      out.emplace_back(n, rows);
      return;
    }
    const int p = piv[static_cast<std::size_t>(row)];
    std::vector<int> slots;
    for (int b = 0; b < p; ++b) {
      if (std::find(piv.begin(), piv.end(), b) == piv.end()) slots.push_back(b);
    }
    const std::size_t combos = std::size_t{1} << slots.size();
    for (std::size_t c = 0; c < combos; ++c) {
      Vec v = Vec{1} << p;
      for (std::size_t k = 0; k < slots.size(); ++k) {
        if ((c >> k) & 1) v |= Vec{1} << slots[k];
      }
      rows[static_cast<std::size_t>(row)] = v;
      fill(row + 1);
    }
  };
  choose_pivots = [&](int row, int below) {
    if (row == dim) {
      fill(0);
      return;
    }
    for (int p = below - 1; p >= dim - row - 1; --p) {
      piv[static_cast<std::size_t>(row)] = p;
      choose_pivots(row + 1, p);
    }
  };
  choose_pivots(0, n);
  return out;
}

std::string format_vec(Vec v, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int j = 0; j < n; ++j) {
    if ((v >> (n - 1 - j)) & 1) s[static_cast<std::size_t>(j)] = '1';
  }
  return s;
}

}  // namespace arithreg::f2
