#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "arithreg/group.hpp"

namespace arithreg {

/// A real-valued function on a finite abelian group, indexed by element index.
class DenseFn {
 public:
  DenseFn() = default;
  explicit DenseFn(GroupSpec group, double fill = 0.0);
  DenseFn(GroupSpec group, std::vector<double> values);

  static DenseFn delta(const GroupSpec& group, std::size_t at = 0);
  static DenseFn indicator(const GroupSpec& group, std::span<const std::size_t> members);

  const GroupSpec& group() const { return group_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double sum() const;
  double l1() const;
  double l2_squared() const;
  double sup() const;
  /// Indices where the value is nonzero, ascending.
  std::vector<std::size_t> support() const;
  /// x -> f(x + shift).
  DenseFn translate(std::size_t shift) const;
  /// x -> f(-x).
  DenseFn reflect() const;
  bool is_indicator() const;

 private:
  GroupSpec group_;
  std::vector<double> values_;
};

/// Complex values indexed by character index.
class Spectrum {
 public:
  Spectrum() = default;
  Spectrum(GroupSpec group, std::vector<std::complex<double>> values)
      : group_(std::move(group)), values_(std::move(values)) {}

  const GroupSpec& group() const { return group_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<std::complex<double>>& values() const { return values_; }
  std::vector<std::complex<double>>& values() { return values_; }
  std::complex<double> operator[](std::size_t i) const { return values_[i]; }

  double energy() const;
  /// |sum |F|^2 - N sum f^2| / max(N sum f^2, tiny).
  double parseval_defect(const DenseFn& f) const;

 private:
  GroupSpec group_;
  std::vector<std::complex<double>> values_;
};

/// F(gamma) = sum_x f(x) gamma(x); no normalization.
Spectrum dft(const DenseFn& f);
Spectrum dft_complex(const GroupSpec& group, std::span<const std::complex<double>> values);

struct InverseResult {
  DenseFn fn;
  double max_imag = 0.0;
};
/// f(x) = N^{-1} sum_gamma F(gamma) conj(gamma(x)), real part kept.
InverseResult idft(const Spectrum& spectrum);

/// (f * g)(x) = sum_y f(y) g(x - y), computed spectrally.
DenseFn convolve(const DenseFn& f, const DenseFn& g);
/// The same convolution by the defining sum, skipping zero entries of f.
DenseFn convolve_direct(const DenseFn& f, const DenseFn& g);
/// Direct sum when the work is small, spectral otherwise.
DenseFn convolve_auto(const DenseFn& f, const DenseFn& g);

/// sum over x_1 + ... + x_k = 0 of prod f_i(x_i), as N^{-1} sum_gamma prod F_i(gamma).
double zero_sum_count(std::span<const DenseFn> fs);

std::uint64_t default_brute_force_budget();
/// The literal nested sum; refuses when N^{k-1} exceeds the budget.
double brute_force_zero_sum(std::span<const DenseFn> fs, std::uint64_t budget = default_brute_force_budget());

/// In-place unnormalized Walsh-Hadamard transform of a length-2^t array.
template <typename T>
void walsh_hadamard(std::span<T> a) {
  for (std::size_t len = 1; len < a.size(); len <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += len << 1) {
      for (std::size_t j = i; j < i + len; ++j) {
        const T u = a[j];
        const T v = a[j + len];
        a[j] = u + v;
        a[j + len] = u - v;
      }
    }
  }
}

void require_same_group(const DenseFn& a, const DenseFn& b);

}  // namespace arithreg
