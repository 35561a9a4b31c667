#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arithreg/f2.hpp"
#include "arithreg/harmonic.hpp"
#include "arithreg/reg_general.hpp"

namespace arithreg {

/// A subset of {1, ..., N}.
class IntegerSet {
 public:
  IntegerSet() = default;
  /// Sorts and deduplicates; throws DomainError for members outside [1, N].
  IntegerSet(std::uint64_t n_max, std::vector<std::int64_t> members);
  /// One integer per line; blank lines and lines starting with '#' are skipped.
  static IntegerSet parse(std::string_view text, std::uint64_t n_max);

  std::uint64_t n_max() const { return n_max_; }
  const std::vector<std::int64_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(std::int64_t x) const;
  double density() const;
  /// Indicator of the residues mod m.
  DenseFn to_cyclic(std::uint64_t m) const;

 private:
  std::uint64_t n_max_ = 0;
  std::vector<std::int64_t> members_;
};

/// y -> sum of a(x) over k x = y.
DenseFn dilate(const DenseFn& a, std::int64_t k);

/// #{x : x, x+d, x+2d in A} in the group.
std::uint64_t ap3_count(const DenseFn& a, std::size_t d);
std::uint64_t ap3_count(const DenseFn& a, const GroupElement& d);
/// Progressions of integers inside [1, N].
std::uint64_t ap3_count(const IntegerSet& a, std::int64_t d);
/// ap3_count(a, d) for every d, by element index.
std::vector<std::uint64_t> ap3_table(const DenseFn& a);
/// T(A, -2A, A) with -2A taken as a pushforward, which equals the sum of the table.
double ap3_total_spectral(const DenseFn& a);

struct NuReport {
  DenseFn nu;
  double total = 0.0;
  /// T(psi1^{1/2}, psi2, psi1^{1/2}).
  double spectral_total = 0.0;
  double identity_defect = 0.0;
  double min_value = 0.0;
  /// total <= 1 + 8 eps, with the smoothing premise recorded.
  InequalityReport bound;
};
/// nu(d) = sum_y psi1^{1/2}(y) psi2(2(y+d)) psi1^{1/2}(y+2d). Throws DomainError for even N.
NuReport nu_weight(const RegPair& pair);

struct ProgressionWeightReport {
  /// sum_d P(A;d) nu(d).
  double weighted = 0.0;
  double weighted_nonzero = 0.0;
  /// sum_x T(A^{+x} psi1^{1/2}, A2^{+x2} psi2, A^{+x} psi1^{1/2}); equals `weighted`.
  double local_sum = 0.0;
  double identity_defect = 0.0;
  /// sum alpha1^2 alpha2 >= (sum alpha1 alpha2)^2 / sum alpha2 >= alpha^3 N.
  double main_term = 0.0;
  double cs_middle = 0.0;
  double cube_term = 0.0;
  bool chain_holds = false;
  /// (A2 * psi2)(-2x) against (A * half psi2)(x).
  double half_cutoff_defect = 0.0;
  /// weighted >= main_term - 34 eps N; asserted only when `asserted`.
  double lower_bound = 0.0;
  bool lower_bound_holds = false;
  bool asserted = false;
  bool degenerate = false;
  double psi1_mass_at_zero = 0.0;
  double psi2_mass_at_zero = 0.0;
};
/// The weighted progression count of a set against a pair regular for (A, -2A, A).
/// Throws InternalError when the asserted lower bound fails.
ProgressionWeightReport progression_weight(const DenseFn& a, const RegPair& pair, bool pair_regular);

/// The sets (A, -2A, A).
std::vector<DenseFn> progression_triple(const DenseFn& a);

struct BhkOptions {
  /// Also run the regularity-driven weighted path.
  bool regularity_path = false;
  RegularizeOptions regularize;
};

struct RegularityPath {
  RegularizeResult regularity;
  NuReport nu;
  ProgressionWeightReport weight;
  /// sum over |d| >= eps N of nu(d), against 2 eps; interval case only.
  std::optional<double> far_mass;
};

struct BhkGroupResult {
  std::size_t d = 0;
  std::uint64_t count = 0;
  double alpha = 0.0;
  /// (alpha^3 - eps) N.
  double bound = 0.0;
  bool bound_ok = false;
  std::optional<RegularityPath> path;
};
/// Exhaustive search for the d != 0 with the most progressions, least index on ties.
BhkGroupResult bhk_witness_group(const DenseFn& a, double eps, const BhkOptions& options = {});

struct BhkIntervalResult {
  /// Absent when eps N < 1 leaves no admissible difference.
  std::optional<std::int64_t> d;
  std::int64_t d_limit = 0;
  std::uint64_t genuine = 0;
  std::uint64_t modular = 0;
  double alpha = 0.0;
  double bound = 0.0;
  bool bound_ok = false;
  /// (alpha^3 - 47 eps) N.
  double coarse_bound = 0.0;
  std::optional<RegularityPath> path;
};
/// Best genuine-progression difference with 1 <= d <= eps N. The regularity path needs odd N and
/// starts from the characters x -> e(x/N) and x -> e(x/(2N)) mod N.
BhkIntervalResult bhk_witness_interval(const IntegerSet& a, double eps, const BhkOptions& options = {});

/// {1, (N+1)/2} on Z/N, N odd.
FrequencySet interval_start_characters(std::uint64_t n);

/// #{(x, y, z) in A^3 : x + y = z}, x = y allowed.
std::uint64_t schur_triples(const IntegerSet& a);

struct SumFreeResult {
  IntegerSet b;
  IntegerSet c;
  RemovalCertificate certificate;
  std::uint64_t schur_before = 0;
  std::uint64_t schur_after = 0;
  bool sum_free = false;
  /// Sum of the per-set removal bounds.
  double removal_bound = 0.0;
  bool removal_within_bound = false;
};
/// Removal on Z/2N for (A, A, -A), then B = A1' n A2' n -A3' and C = A \ B.
SumFreeResult sum_free_decompose(const IntegerSet& a, double eps, const RegularizeOptions& options = {});

/// M for M <= 19, floor(M/4) otherwise.
std::uint64_t tower_width(std::uint64_t m);
/// d_0 = 0, d_{i+1} = F(2^{d_0 + ... + d_i}). Throws ResourceError from i = 5 on.
std::uint64_t tower_sequence(int i);

struct SpanningFamily {
  std::uint64_t m = 0;
  int dim = 0;
  std::vector<f2::Vec> vectors;
  int attempts = 0;
  /// Most vectors on one hyperplane, against ceil(0.95 M).
  std::uint64_t worst_hyperplane = 0;
  std::uint64_t threshold = 0;
};
/// Largest number of the vectors annihilated by one nonzero u.
std::uint64_t max_hyperplane_count(std::span<const f2::Vec> vectors, int dim, int max_dim = 24);
/// M vectors of F2^{F(M)} any 95 percent of which span; throws RetryError after 64 draws.
SpanningFamily spanning_family(std::uint64_t m, std::uint64_t seed, int max_dim = 24);

struct TowerLevel {
  int i = 0;
  SpanningFamily family;
  /// xi_v embedded in the U_{i+1} block, indexed by the local coordinates of v.
  std::vector<f2::Vec> xi;
  DenseFn b;
};

struct TowerSpec {
  int n = 0;
  int s = 0;
  std::vector<std::uint64_t> dims;
  /// d_0 + ... + d_i.
  std::vector<int> offsets;
  /// H_0 .. H_t for every level with room, coordinates offsets[i] .. n-1.
  std::vector<f2::Subgroup> h;
  std::vector<TowerLevel> levels;
  std::uint64_t seed = 0;

  /// v part of x at level i, as local coordinates of V_i.
  std::uint64_t v_index(int i, f2::Vec x) const;
};

struct TowerFunction {
  TowerSpec spec;
  DenseFn f;
};
/// f = 1/2 sum 4^{-i} B_i over the levels with room. Throws DomainError when the dimensions exceed n.
TowerFunction build_tower_function(int n, int s, std::uint64_t seed);

struct TowerStepReport {
  int level = 0;
  std::size_t v_count = 0;
  std::size_t escaping = 0;
  double escaping_fraction = 0.0;
  double eps = 0.0;
  bool fraction_within_eps = false;
  /// (1/16) 4^{-i}.
  double bound = 0.0;
  /// Least |coefficient| / |H| over escaping v and their cosets, divided by the bound.
  std::optional<double> min_coefficient_ratio;
  std::size_t cosets_checked = 0;
  bool holds = false;
};
/// Local coefficients of f at xi_v on cosets of H inside H_i + v. Throws PreconditionError when H is
/// not inside H_i.
TowerStepReport verify_tower_step(const TowerSpec& spec, const DenseFn& f, const f2::Subgroup& h, int i,
                                  double eps);

/// A random subgroup of H_i that is not inside H_{i+1}.
f2::Subgroup random_level_subgroup(const TowerSpec& spec, int i, std::mt19937_64& rng);

}  // namespace arithreg
