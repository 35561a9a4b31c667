#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arithreg/group.hpp"
#include "arithreg/harmonic.hpp"

namespace arithreg {

/// An ordered set of distinct characters, by character index.
class FrequencySet {
 public:
  FrequencySet() = default;
  explicit FrequencySet(GroupSpec group, std::vector<std::size_t> chars = {});
  FrequencySet(const GroupSpec& group, std::span<const Character> chars);

  const GroupSpec& group() const { return group_; }
  const std::vector<std::size_t>& chars() const { return chars_; }
  int d() const { return static_cast<int>(chars_.size()); }
  bool empty() const { return chars_.empty(); }
  bool contains(std::size_t gamma) const;
  bool subset_of(const FrequencySet& other) const;
  /// This set followed by the members of `more` not already present.
  FrequencySet united(std::span<const std::size_t> more) const;

  /// ||x||_Gamma.
  double norm(std::size_t x) const;
  /// ||x||_Gamma for every x.
  std::vector<double> norms() const;

 private:
  GroupSpec group_;
  std::vector<std::size_t> chars_;
};

/// {x : ||x||_Gamma <= delta}, ascending.
std::vector<std::size_t> bohr_set(const FrequencySet& gamma, double delta);

/// x -> exp(-||x||_Gamma / delta), unnormalized.
DenseFn smoothed_bohr(const FrequencySet& gamma, double delta);
/// The smoothed Bohr neighbourhood normalized to unit mass.
DenseFn smoothed_beta(const FrequencySet& gamma, double delta);

/// psi = beta * beta for a frequency set and width.
class BohrCutoff {
 public:
  BohrCutoff() = default;
  BohrCutoff(FrequencySet gamma, double delta);

  const FrequencySet& gamma() const { return gamma_; }
  const GroupSpec& group() const { return gamma_.group(); }
  double delta() const { return delta_; }
  int d() const { return gamma_.d(); }
  const DenseFn& beta() const { return beta_; }
  const DenseFn& psi() const { return psi_; }
  const DenseFn& psi_sqrt() const { return psi_sqrt_; }
  /// beta-hat squared; real and nonnegative by construction.
  const std::vector<double>& psi_hat() const { return psi_hat_; }
  const std::vector<double>& norms() const { return norms_; }

  double mass_at_zero() const { return psi_[0]; }
  /// True when psi is a point mass at 0 to within 1e-9.
  bool degenerate() const { return psi_[0] >= 1.0 - 1e-9; }

 private:
  FrequencySet gamma_;
  double delta_ = 1.0;
  std::vector<double> norms_;
  DenseFn beta_;
  DenseFn psi_;
  DenseFn psi_sqrt_;
  std::vector<double> psi_hat_;
};

BohrCutoff make_cutoff(const FrequencySet& gamma, double delta);

/// sum of psi(x) over ||x||_Gamma >= eta.
double tail_mass(const BohrCutoff& cutoff, double eta);

/// Both sides of one inequality, evaluated exhaustively over the group.
struct InequalityReport {
  std::string part;
  std::string group;
  int d = 0;
  double delta = 0.0;
  std::optional<double> delta_prime;
  std::optional<double> tau;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack = 0.0;
  bool hypothesis_ok = true;
  std::string detail;
};

/// lhs <= rhs up to relative 1e-9 and absolute 1e-14.
bool leq_tol(double lhs, double rhs);
/// Fills holds and slack for an upper-bound comparison.
void settle(InequalityReport& r);

struct BohrSizeReport {
  std::size_t size_delta = 0;
  std::size_t size_2delta = 0;
  InequalityReport part_i;
  InequalityReport part_ii;
};
/// (i) |B_delta| >= delta^d N, (ii) |B_2delta| <= 5^d |B_delta|.
BohrSizeReport check_bohr_size(const FrequencySet& gamma, double delta);

/// Properties of beta: (i) unit mass, (ii) sup <= 3/(delta^d N),
/// (iii) |beta(x) - beta(x-y)| <= 5 sinh(||y||/delta) beta(x), (iv) tail beyond eta <= 2 * 5^d exp(-eta/2delta).
InequalityReport check_beta(std::string_view part, const FrequencySet& gamma, double delta, std::size_t y = 0,
                            double eta = 0.1);

/// sum over ||x|| >= eta of psi against 4 * 5^d * exp(-eta / 4 delta).
InequalityReport check_tail_bound(const BohrCutoff& cutoff, double eta);
/// |psi^(1/2)(x) - psi^(1/2)(x-y)| <= 5 sinh(||y||/delta) psi^(1/2)(x) for all x.
InequalityReport check_sqrt_lipschitz(const BohrCutoff& cutoff, std::size_t y);
/// B(x) <= e * exp(-||x||/delta) for all x.
InequalityReport check_bohr_domination(const FrequencySet& gamma, double delta);

struct CutoffCheckInput {
  const BohrCutoff* cutoff = nullptr;
  const BohrCutoff* cutoff_prime = nullptr;
  double tau = 0.1;
  std::size_t character = 0;
  std::size_t y = 0;
  const DenseFn* f = nullptr;
  int m = 1;
  double kappa = 0.0;
  double omega = 0.0;
};

/// Properties of psi; primed quantities refer to cutoff_prime.
///   i     psi-hat real and >= 0          ii    unit mass
///   iii   sup <= 3/(delta^d N)           iv    ||(gamma-1)psi||_1 <= tau   (iv-hat: psi-hat(gamma) >= 1 - tau)
///   v     Lipschitz in y, as for beta    vi    |psi^(1/2) * psi'^(*m) - psi^(1/2)| <= (2^m - 1) tau psi^(1/2)
///   vii   ||psi * psi' - psi||_1 <= tau  viii  ||(f psi^(1/2)) * psi' - psi^(1/2)(f * psi')||_2 <= tau
///   ix    ||(gamma-1)psi'||_1 <= omega when psi-hat(gamma) >= kappa
/// Hypotheses are evaluated into hypothesis_ok; a failed hypothesis is not an error.
InequalityReport check_cutoff(std::string_view part, const CutoffCheckInput& in);

}  // namespace arithreg
