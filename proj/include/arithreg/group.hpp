#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arithreg {

/// An element of a product of cyclic groups, as residues per factor.
struct GroupElement {
  std::vector<std::uint64_t> coords;
  bool operator==(const GroupElement&) const = default;
  auto operator<=>(const GroupElement&) const = default;
};

/// A character, by its frequency vector; evaluates as exp(2*pi*i * sum c_j x_j / m_j).
struct Character {
  std::vector<std::uint64_t> freqs;
  bool operator==(const Character&) const = default;
  auto operator<=>(const Character&) const = default;
};

/// Largest group order the enumerating algorithms accept.
/// Defaults to 2^24; ARITHREG_MAX_N overrides it.
std::size_t max_enumerable_order();

/// Z/m_1 x ... x Z/m_r.
///
/// Elements and characters are both indexed in row-major order over their
/// coordinates (the last factor varies fastest), so index order coincides
/// with lexicographic order on coordinate tuples. On (Z/2)^n the index of a
/// vector is the bitmask whose most significant of n bits is coordinate 0.
class GroupSpec {
 public:
  GroupSpec() : GroupSpec(std::vector<std::uint64_t>{1}) {}
  explicit GroupSpec(std::vector<std::uint64_t> factors);

  /// Parses "2^10", "5x5x3", "2^3x7".
  static GroupSpec parse(std::string_view text);
  /// (Z/2)^n.
  static GroupSpec elementary2(int n);
  static GroupSpec cyclic(std::uint64_t n);

  const std::vector<std::uint64_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  std::size_t order() const { return order_; }
  bool is_cyclic() const { return factors_.size() == 1; }
  bool is_elementary2() const { return elementary2_; }
  /// Dimension n when the group is (Z/2)^n.
  int f2_dim() const;
  std::string to_string() const;

  /// Throws ResourceError when the group is too large to enumerate.
  void require_enumerable() const;

  bool operator==(const GroupSpec& other) const { return factors_ == other.factors_; }

  GroupElement element(std::size_t index) const;
  std::size_t index_of(const GroupElement& x) const;
  Character character(std::size_t index) const;
  std::size_t index_of(const Character& gamma) const;
  GroupElement identity() const;

  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const;
  GroupElement scalar_mul(std::int64_t k, const GroupElement& a) const;

  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t neg(std::size_t a) const;
  std::size_t sub(std::size_t a, std::size_t b) const;
  std::size_t scalar_mul(std::int64_t k, std::size_t a) const;

  /// Common denominator L of all character phases (lcm of the factors).
  std::uint64_t phase_denominator() const { return lcm_; }
  /// t in [0, L) with gamma(x) = exp(2*pi*i*t/L).
  std::uint64_t phase(std::size_t gamma, std::size_t x) const;
  std::complex<double> char_eval(std::size_t gamma, std::size_t x) const;
  std::complex<double> char_eval(const Character& gamma, const GroupElement& x) const;
  /// |arg gamma(x)| / 2pi with arg in (-pi, pi]; lies in [0, 1/2].
  double arg_norm(std::size_t gamma, std::size_t x) const;

  void check_member(const GroupElement& x) const;
  void check_member(const Character& gamma) const;

  std::string format(const GroupElement& x) const;
  std::string format(const Character& gamma) const;
  std::string format_element(std::size_t index) const { return format(element(index)); }
  GroupElement parse_element(std::string_view text) const;
  Character parse_character(std::string_view text) const;

 private:
  std::vector<std::uint64_t> factors_;
  std::vector<std::uint64_t> strides_;
  std::vector<std::uint64_t> phase_scale_;  // L / m_j
  std::size_t order_ = 1;
  std::uint64_t lcm_ = 1;
  bool elementary2_ = false;
};

GroupSpec make_group(std::vector<std::uint64_t> factors);

/// sup over gamma in Gamma of |arg gamma(x)|/2pi; 0 for empty Gamma.
double char_arg_norm(const GroupSpec& g, std::span<const std::size_t> gammas, std::size_t x);
double char_arg_norm(const GroupSpec& g, std::span<const Character> gammas, const GroupElement& x);

}  // namespace arithreg
