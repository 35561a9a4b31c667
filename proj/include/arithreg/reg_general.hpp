#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arithreg/bohr.hpp"
#include "arithreg/harmonic.hpp"

namespace arithreg {

enum class ConstantsMode { faithful, scaled };

/// Width schedule. Faithful mode uses the exact constants of the regularity
/// proof. Scaled mode replaces every shrink factor by 1/scale:
///   second width  eta/scale        (faithful: 2^-40 eps^6 eta / (d k^4))
///   perp branch   eta/scale^2      (faithful: 2^-80 eps^12 eta / (d^2 k^8))
///   cover branch  eta2/scale       (faithful: 2^-50 eps^6 eta2 / (d' k^4))
/// d and d' enter as max(d, 1).
struct ModeConfig {
  ConstantsMode mode = ConstantsMode::faithful;
  double scale = 8.0;
  /// Replaces the second-width rule when set; used by mutation tests.
  std::function<double(double eta, int d, int k, double eps)> second_width_override;
};

std::string to_string(ConstantsMode m);
ConstantsMode parse_mode(std::string_view text);

double second_width(double eta, int d, int k, double eps, const ModeConfig& mode);
double perp_width(double eta, int d, int k, double eps, const ModeConfig& mode);
double cover_width(double eta2, int d_new, int k, double eps, const ModeConfig& mode);

/// A frequency set R with width eta, and the two cutoffs built from it.
class RegPair {
 public:
  RegPair() = default;
  RegPair(FrequencySet r, double eta, int k, double eps, ModeConfig mode = {});
  /// (empty set, 1).
  static RegPair trivial(const GroupSpec& group, int k, double eps, ModeConfig mode = {});

  const GroupSpec& group() const { return r_.group(); }
  const FrequencySet& R() const { return r_; }
  int d() const { return r_.d(); }
  double eta() const { return eta_; }
  double eta1() const { return eta_; }
  double eta2() const { return eta2_; }
  int k() const { return k_; }
  double eps() const { return eps_; }
  const ModeConfig& mode() const { return mode_; }
  const BohrCutoff& psi1() const { return psi1_; }
  const BohrCutoff& psi2() const { return psi2_; }
  /// psi2 within 1e-9 of a point mass.
  bool degenerate() const { return psi2_.degenerate(); }

 private:
  FrequencySet r_;
  double eta_ = 1.0;
  double eta2_ = 1.0;
  int k_ = 1;
  double eps_ = 0.1;
  ModeConfig mode_;
  BohrCutoff psi1_;
  BohrCutoff psi2_;
};

/// ||psi1 * psi2 - psi1||_1 against 2^-12 k^-2 eps^3; hypothesis_ok is false outside faithful mode.
InequalityReport check_pair_nesting(const RegPair& pair);

/// A * psi.
DenseFn alpha(const DenseFn& a, const BohrCutoff& cutoff);

struct RegValueWitness {
  std::size_t x = 0;
  double cond1_lhs = 0.0;
  double cond2_lhs = 0.0;
  std::size_t worst_char = 0;
  bool regular = false;
};

/// Both regularity conditions at every x for one set.
struct SetRegularity {
  DenseFn alpha1;
  DenseFn alpha2;
  std::vector<RegValueWitness> values;
  std::size_t irregular = 0;
  std::size_t cond1_failures = 0;
  std::size_t cond2_failures = 0;
};

RegValueWitness check_regular_value(const DenseFn& a, const RegPair& pair, std::size_t x);
SetRegularity evaluate_regularity(const DenseFn& a, const RegPair& pair);

/// ((A^{+x} - alpha2(x)) psi2)^(gamma).
std::complex<double> local_coefficient(const DenseFn& a, const DenseFn& alpha2, const BohrCutoff& psi2,
                                       std::size_t x, std::size_t gamma);

struct PairRegularity {
  bool regular = false;
  std::vector<std::size_t> irregular_counts;
  std::vector<SetRegularity> sets;
};
/// Regular iff every set has fewer than eps N irregular values.
PairRegularity is_regular_pair(std::span<const DenseFn> sets, const RegPair& pair);

struct IndexReport {
  std::vector<double> per_set;
  double total = 0.0;
};
/// N^{-1} ||A_i * psi1||_2^2 per set and summed.
IndexReport index_general(std::span<const DenseFn> sets, const RegPair& pair);

struct CoverResult {
  std::vector<std::vector<std::size_t>> parts;
  std::vector<std::size_t> centers;
  double kappa = 0.0;
  double count_bound = 0.0;
  bool disjoint = false;
  bool half_covered = false;
  bool contained = false;
  bool count_ok = false;
  bool ok() const { return disjoint && half_covered && contained && count_ok; }
};
/// Greedy translates of B_{R, kappa/2} covering at least half of U; each part lies in
/// B_{R, kappa} + its center, and the number of parts is checked against (2/kappa)^d.
CoverResult cover_by_translates(std::span<const std::size_t> u, double kappa, const FrequencySet& r);

struct RefineTrace {
  std::string branch;  // "density", "perp" or "cover"
  std::size_t set = 0;
  int d_before = 0;
  int d_after = 0;
  double eta_before = 0.0;
  double eta2_before = 0.0;
  double eta_after = 0.0;
  std::vector<std::size_t> irregular_counts;
  std::size_t cond1_failures = 0;
  std::size_t cond2_failures = 0;
  std::vector<std::size_t> witnesses;
  std::size_t cover_parts = 0;
  double index_before = 0.0;
  double index_second = 0.0;
  double index_after = 0.0;
  double required_gain = 0.0;
  bool gain_asserted = false;
  /// ind(R, eta) - ind(R, eta2), largest over sets, against 2^-9 k^-2 eps^3.
  double largest_drop = 0.0;
  double drop_bound = 0.0;
  bool size_bounds_ok = false;
};

struct RefineResult {
  RegPair next;
  RefineTrace trace;
};
/// One refinement. Throws PreconditionError when the pair is already regular.
RefineResult refine_pair(std::span<const DenseFn> sets, const RegPair& pair);

struct RegularizeOptions {
  ModeConfig mode;
  int budget = 64;
  /// Starting pair frequencies; the start width is always 1.
  std::optional<FrequencySet> start;
};

struct RegularizeResult {
  RegPair pair;
  std::vector<RefineTrace> trace;
  bool regular = false;
  bool budget_exhausted = false;
  std::vector<std::size_t> final_irregular;
  IndexReport final_index;
  /// 2^10 k^2 eps^-3.
  double iteration_bound = 0.0;
};
RegularizeResult regularize(std::span<const DenseFn> sets, double eps, const RegularizeOptions& options = {});

struct WeightedCount {
  double value = 0.0;
  double brute_force = 0.0;
  bool brute_force_done = false;
  double product = 0.0;
  double deviation = 0.0;
  double bound = 0.0;
  bool bound_ok = false;
  bool all_regular = false;
  std::vector<bool> regular;
};
/// T(A_1^{+x_1} psi1^{1/2}, A_2^{+x_2} psi2, ..., A_k^{+x_k} psi1^{1/2}) against the product of local
/// densities; xs must sum to 0.
WeightedCount weighted_T(std::span<const DenseFn> sets, const RegPair& pair, std::span<const std::size_t> xs);

/// |T(psi1^{1/2}, psi2, ..., psi2, f psi1^{1/2}) - sum f psi1| <= 2^k eps. hypothesis_ok records
/// whether the smoothing premise |psi1^{1/2} * psi2^{*(k-2)} - psi1^{1/2}| <= 2^k eps psi1^{1/2} holds.
InequalityReport check_smoothed_count(const RegPair& pair, const DenseFn& f, int k);

struct EnergyIncrementReport {
  double kappa = 0.0;
  double identity_defect = 0.0;
  bool identity_ok = false;
  InequalityReport inequality;
};
/// ||f2||^2 - ||f1||^2 >= sum_x sum_y (f2(x+y) - f1(x))^2 phi1(y) - 8 kappa N, with f_i = f * phi_i and
/// kappa = ||phi1 * phi2 - phi1||_1, plus the pointwise variance identity behind it.
EnergyIncrementReport check_energy_increment(const DenseFn& phi1, const DenseFn& phi2, const DenseFn& f);

/// Number of x in A with A * psi(x) <= rho, against rho N.
InequalityReport check_sparse_density(const DenseFn& a, const BohrCutoff& cutoff, double rho);

/// Stability of a large local coefficient: when psi2-hat(gamma) < eps/6 and the coefficient at x is
/// at least eps, every y in x + B_{R, eps eta2 / 60} keeps a coefficient of at least eps/2.
/// lhs = eps/2, rhs = least coefficient over the neighbourhood.
InequalityReport check_coefficient_stability(const DenseFn& a, const RegPair& pair, std::size_t x,
                                             std::size_t gamma);

struct ReduceOptions {
  /// Reduce even when the pair is not regular; the deletion bound is then not guaranteed.
  bool allow_irregular_pair = false;
};
struct ReducedSets {
  std::vector<DenseFn> sets;
  std::vector<std::size_t> removed;
  std::vector<std::size_t> removed_irregular;
  std::vector<std::size_t> removed_sparse;
  /// 10 k eps^{1/k} N.
  double removal_bound = 0.0;
  double density_threshold = 0.0;
  bool pair_regular = false;
};
/// Deletes x from A_i when x is irregular for A_i or either local density is <= 4 eps^{1/k}.
ReducedSets reduced_sets(std::span<const DenseFn> sets, const RegPair& pair, const ReduceOptions& options = {});

struct RemovalCertificate {
  RegularizeResult regularity;
  ReducedSets reduced;
  double tuples_before = 0.0;
  double spectral_after = 0.0;
  std::optional<double> exact_after;
  bool zero_sum_free = false;
  /// tuples_before * ||psi1||_inf * ||psi2||_inf^{k-2}; below eps the reduced sets cannot carry a tuple.
  double coupling = 0.0;
  bool coupling_holds = false;
  bool removal_within_bound = false;
};
/// Regularize, reduce, then certify the reduced product spectrally and by exhaustive count.
RemovalCertificate zero_sum_removal(std::span<const DenseFn> sets, double eps, const RegularizeOptions& options = {});

}  // namespace arithreg
