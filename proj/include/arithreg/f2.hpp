#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace arithreg::f2 {

/// A vector of F2^n packed into the low n bits; coordinate 0 is bit n-1.
/// This is the same integer as the element's index in GroupSpec::elementary2(n).
using Vec = std::uint64_t;

inline int dot(Vec a, Vec b) { return std::popcount(a & b) & 1; }

/// Rank of a list of vectors.
int rank(std::span<const Vec> rows);

/// A subgroup of F2^n stored by a reduced row echelon basis.
///
/// Basis rows are sorted by decreasing pivot (leading bit) and every pivot
/// column is zero in all other rows. Local coordinates: a t-bit integer a
/// names the element sum of basis[j] over j with bit (t-1-j) of a set, so for
/// H = F2^n the local coordinates coincide with the global ones.
class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(int ambient_dim, std::span<const Vec> generators);

  static Subgroup full(int n);
  static Subgroup trivial(int n);

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  std::size_t size() const { return std::size_t{1} << basis_.size(); }
  const std::vector<Vec>& basis() const { return basis_; }
  /// Pivot bit of each basis row.
  const std::vector<int>& pivots() const { return pivots_; }

  bool contains(Vec x) const { return reduce(x) == 0; }
  bool contains(const Subgroup& other) const;
  /// Lexicographically least element of the coset x + H.
  Vec reduce(Vec x) const;
  /// One representative per coset, each the least of its coset, ascending.
  std::vector<Vec> coset_reps() const;

  /// Element with local coordinates a.
  Vec element(std::uint64_t local) const;
  /// All elements, position a holding element(a).
  std::vector<Vec> elements() const;
  /// Local coordinates of x in H; x must lie in H.
  std::uint64_t local_coords(Vec x) const;
  /// The character x -> (-1)^<x, xi> restricted to H, in local coordinates.
  std::uint64_t restrict_character(Vec xi) const;
  /// A global vector whose restriction to H is the local character eta.
  Vec lift_character(std::uint64_t eta) const;
  /// {x in H : <x, eta_i> = 0 for all i}, eta_i given as local characters of H.
  Subgroup annihilator_within(std::span<const std::uint64_t> local_chars) const;
  Subgroup intersect(const Subgroup& other) const;

  bool operator==(const Subgroup& other) const { return n_ == other.n_ && basis_ == other.basis_; }

 private:
  int n_ = 0;
  std::vector<Vec> basis_;
  std::vector<int> pivots_;
};

/// {x in F2^n : <x, eta_i> = 0 for all i}.
Subgroup annihilator(std::span<const Vec> chars, int n);
inline Subgroup annihilator(const Subgroup& h) { return annihilator(h.basis(), h.ambient_dim()); }
std::vector<Vec> coset_reps(const Subgroup& h);

/// Every subgroup of F2^n of the given dimension.
std::vector<Subgroup> all_subgroups(int n, int dim);

/// Bit string, coordinate 0 first.
std::string format_vec(Vec v, int n);

}  // namespace arithreg::f2
