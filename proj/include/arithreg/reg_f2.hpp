#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "arithreg/f2.hpp"
#include "arithreg/harmonic.hpp"

namespace arithreg {

/// Coefficients of x -> A(g + x) on H, indexed by local character of H.
/// Entry 0 is |A ∩ (H + g)|.
std::vector<double> local_fourier(const DenseFn& a, const f2::Subgroup& h, f2::Vec g);

/// Largest nontrivial |coefficient| and the least local character attaining it.
struct LocalPeak {
  double magnitude = 0.0;
  std::uint64_t character = 0;
};
LocalPeak local_peak(const std::vector<double>& coefs);

bool is_regular_value_f2(const DenseFn& a, const f2::Subgroup& h, f2::Vec g, double eps);

struct SubgroupRegularity {
  bool regular = false;
  /// Elements g of G that fail, counted coset by coset.
  std::size_t irregular_count = 0;
  /// Representatives of the failing cosets, ascending.
  std::vector<f2::Vec> irregular_cosets;
};
SubgroupRegularity is_regular_subgroup_f2(const DenseFn& a, const f2::Subgroup& h, double eps);

/// N^{-1} sum_g (|A ∩ (H + g)| / |H|)^2.
double index_f2(const DenseFn& a, const f2::Subgroup& h);

struct RefineStepF2 {
  f2::Subgroup next;
  /// Witness characters lifted to F2^n, deduplicated, in selection order.
  std::vector<f2::Vec> witnesses;
  std::size_t irregular_count = 0;
  double index_before = 0.0;
  double index_after = 0.0;
};
/// One refinement: annihilate, inside H, the peak characters of up to max(1, |G/H|/2)
/// irregular cosets taken by decreasing peak. Throws PreconditionError on a regular H.
RefineStepF2 refine_step_f2(const DenseFn& a, const f2::Subgroup& h, double eps);

struct F2RegReport {
  f2::Subgroup subgroup;
  double epsilon = 0.0;
  std::size_t irregular_values = 0;
  int iterations = 0;
  std::vector<double> index_trace;
  std::vector<int> dims;
  std::vector<std::size_t> irregular_counts;
  std::vector<std::vector<f2::Vec>> witnesses;
};
/// Iterates refine_step_f2 from H = G until H is eps-regular for A; eps in (0, 1/2).
F2RegReport regularize_f2(const DenseFn& a, double eps);

/// Triples x_i in H with A(g_i + x_i) = 1 and x_1 + x_2 + x_3 = 0, from the local spectra.
double local_triangle_count(const DenseFn& a, const f2::Subgroup& h, f2::Vec g1, f2::Vec g2, f2::Vec g3);

struct ReducedSetF2 {
  DenseFn set;
  std::size_t removed = 0;
  std::size_t removed_irregular = 0;
  std::size_t removed_sparse = 0;
  /// 3 eps^{1/3} N.
  double removal_bound = 0.0;
};
/// Deletes A ∩ (H + g) when the coset is irregular or |A ∩ (H + g)| <= (2 eps)^{1/3} |H|.
/// H must be eps-regular for A.
ReducedSetF2 reduced_set_f2(const DenseFn& a, const f2::Subgroup& h, double eps);

/// Ordered triples (x, y, z) in A^3 with x + y + z = 0, by a double loop over A.
std::uint64_t count_triangles_f2(const DenseFn& a);

struct TriangleRemovalF2 {
  F2RegReport regularity;
  ReducedSetF2 reduced;
  double triangles_before = 0.0;
  double spectral_triangles_after = 0.0;
  std::uint64_t exact_triangles_after = 0;
  bool triangle_free = false;
  /// Triangles of A against eps |H|^2; below it the reduced set is triangle-free.
  double coupling_threshold = 0.0;
  bool coupling_holds = false;
  bool removal_within_bound = false;
};
TriangleRemovalF2 remove_triangles_f2(const DenseFn& a, double eps);

}  // namespace arithreg
