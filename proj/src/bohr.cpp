#include "arithreg/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "arithreg/errors.hpp"

namespace arithreg {

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-14;
constexpr double kEqualityTol = 1e-12;
constexpr double kClampFloor = -1e-12;

void require_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("Bohr width must be a positive real");
}

InequalityReport base_report(std::string part, const FrequencySet& gamma, double delta) {
  InequalityReport r;
  r.part = std::move(part);
  r.group = gamma.group().to_string();
  r.d = gamma.d();
  r.delta = delta;
  return r;
}

double delta_pow_d(double delta, int d) { return d == 0 ? 1.0 : std::pow(delta, d); }

// Worst x of a pointwise bound lhs(x) <= rhs(x); keeps the pair with the least slack.
struct Worst {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = -std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  void offer(double l, double r, std::size_t x) {
    const double g = l - r * (1.0 + kRelTol) - kAbsTol;
    if (g > gap) {
      gap = g;
      lhs = l;
      rhs = r;
      at = x;
    }
  }
};

void settle_worst(InequalityReport& r, const Worst& w) {
  r.lhs = w.lhs;
  r.rhs = w.rhs;
  r.detail = "worst x index " + std::to_string(w.at);
  settle(r);
}

void pointwise_lipschitz(InequalityReport& r, const std::vector<double>& fn, const FrequencySet& gamma,
                         double delta, std::size_t y) {
  const GroupSpec& g = gamma.group();
  const double factor = 5.0 * std::sinh(gamma.norm(y) / delta);
  Worst w;
  for (std::size_t x = 0; x < fn.size(); ++x) {
    w.offer(std::abs(fn[x] - fn[g.sub(x, y)]), factor * fn[x], x);
  }
  settle_worst(r, w);
}

double character_l1_defect(const GroupSpec& g, std::size_t gamma, const DenseFn& weight) {
  double s = 0.0;
  for (std::size_t x = 0; x < weight.size(); ++x) {
    if (weight[x] == 0.0) continue;
    s += std::abs(g.char_eval(gamma, x) - 1.0) * weight[x];
  }
  return s;
}

}  // namespace

FrequencySet::FrequencySet(GroupSpec group, std::vector<std::size_t> chars)
    : group_(std::move(group)), chars_(std::move(chars)) {
  std::set<std::size_t> seen;
  for (auto c : chars_) {
    if (c >= group_.order()) throw DomainError("character index out of range for " + group_.to_string());
    if (!seen.insert(c).second) throw DomainError("frequency set has a repeated character");
  }
}

FrequencySet::FrequencySet(const GroupSpec& group, std::span<const Character> chars) : group_(group) {
  std::vector<std::size_t> idx;
  for (const auto& c : chars) idx.push_back(group.index_of(c));
  *this = FrequencySet(group, std::move(idx));
}

bool FrequencySet::contains(std::size_t gamma) const {
  return std::find(chars_.begin(), chars_.end(), gamma) != chars_.end();
}

bool FrequencySet::subset_of(const FrequencySet& other) const {
  if (!(group_ == other.group_)) return false;
  return std::all_of(chars_.begin(), chars_.end(), [&](std::size_t c) { return other.contains(c); });
}

FrequencySet FrequencySet::united(std::span<const std::size_t> more) const {
  std::vector<std::size_t> out = chars_;
  for (auto c : more) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return FrequencySet(group_, std::move(out));
}

double FrequencySet::norm(std::size_t x) const { return char_arg_norm(group_, chars_, x); }

std::vector<double> FrequencySet::norms() const {
  group_.require_enumerable();
  std::vector<double> out(group_.order(), 0.0);
  for (auto gamma : chars_) {
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = std::max(out[x], group_.arg_norm(gamma, x));
  }
  return out;
}

std::vector<std::size_t> bohr_set(const FrequencySet& gamma, double delta) {
  require_delta(delta);
  const auto norms = gamma.norms();
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < norms.size(); ++x) {
    if (norms[x] <= delta) out.push_back(x);
  }
  return out;
}

DenseFn smoothed_bohr(const FrequencySet& gamma, double delta) {
  require_delta(delta);
  const auto norms = gamma.norms();
  std::vector<double> v(norms.size());
  for (std::size_t x = 0; x < v.size(); ++x) v[x] = std::exp(-norms[x] / delta);
  return DenseFn(gamma.group(), std::move(v));
}

DenseFn smoothed_beta(const FrequencySet& gamma, double delta) {
  DenseFn b = smoothed_bohr(gamma, delta);
  const double total = b.sum();
  for (auto& v : b.values()) v /= total;
  return b;
}

BohrCutoff::BohrCutoff(FrequencySet gamma, double delta) : gamma_(std::move(gamma)), delta_(delta) {
  require_delta(delta);
  norms_ = gamma_.norms();
  beta_ = smoothed_beta(gamma_, delta_);
  psi_ = convolve_auto(beta_, beta_);
  const Spectrum bh = dft(beta_);
  psi_hat_.resize(bh.size());
  for (std::size_t i = 0; i < bh.size(); ++i) psi_hat_[i] = bh[i].real() * bh[i].real();
  psi_sqrt_ = DenseFn(gamma_.group());
  for (std::size_t x = 0; x < psi_.size(); ++x) {
    const double v = psi_[x];
    if (v < kClampFloor) throw InternalError("cutoff took a negative value beyond roundoff");
    psi_sqrt_[x] = v > 0.0 ? std::sqrt(v) : 0.0;
  }
}

BohrCutoff make_cutoff(const FrequencySet& gamma, double delta) { return BohrCutoff(gamma, delta); }

double tail_mass(const BohrCutoff& cutoff, double eta) {
  double s = 0.0;
  for (std::size_t x = 0; x < cutoff.psi().size(); ++x) {
    if (cutoff.norms()[x] >= eta) s += cutoff.psi()[x];
  }
  return s;
}

bool leq_tol(double lhs, double rhs) { return lhs <= rhs + std::abs(rhs) * kRelTol + kAbsTol; }

void settle(InequalityReport& r) {
  r.holds = leq_tol(r.lhs, r.rhs);
  r.slack = r.rhs - r.lhs;
}

BohrSizeReport check_bohr_size(const FrequencySet& gamma, double delta) {
  require_delta(delta);
  BohrSizeReport out;
  const auto norms = gamma.norms();
  for (double v : norms) {
    if (v <= delta) ++out.size_delta;
    if (v <= 2.0 * delta) ++out.size_2delta;
  }
  const double n = static_cast<double>(gamma.group().order());
  out.part_i = base_report("bohr-size(i)", gamma, delta);
  out.part_i.lhs = delta_pow_d(delta, gamma.d()) * n;
  out.part_i.rhs = static_cast<double>(out.size_delta);
  out.part_i.hypothesis_ok = gamma.d() == 0 || delta <= 1.0;
  if (!out.part_i.hypothesis_ok) out.part_i.detail = "delta > 1: the box-volume count needs delta <= 1";
  settle(out.part_i);
  out.part_ii = base_report("bohr-size(ii)", gamma, delta);
  out.part_ii.lhs = static_cast<double>(out.size_2delta);
  out.part_ii.rhs = std::pow(5.0, gamma.d()) * static_cast<double>(out.size_delta);
  settle(out.part_ii);
  return out;
}

InequalityReport check_beta(std::string_view part, const FrequencySet& gamma, double delta, std::size_t y,
                               double eta) {
  require_delta(delta);
  const DenseFn beta = smoothed_beta(gamma, delta);
  const double n = static_cast<double>(gamma.group().order());
  InequalityReport r = base_report("beta(" + std::string(part) + ")", gamma, delta);
  if (part == "i") {
    r.lhs = beta.l1();
    r.rhs = 1.0;
    r.holds = std::abs(r.lhs - r.rhs) <= kEqualityTol;
    r.slack = kEqualityTol - std::abs(r.lhs - r.rhs);
    return r;
  }
  if (part == "ii") {
    r.lhs = beta.sup();
    r.rhs = 3.0 / (delta_pow_d(delta, gamma.d()) * n);
    r.hypothesis_ok = gamma.d() == 0 || delta <= 1.0;
    settle(r);
    return r;
  }
  if (part == "iii") {
    pointwise_lipschitz(r, beta.values(), gamma, delta, y);
    return r;
  }
  if (part == "iv") {
    const auto norms = gamma.norms();
    double tail = 0.0;
    for (std::size_t x = 0; x < norms.size(); ++x) {
      if (norms[x] >= eta) tail += beta[x];
    }
    r.lhs = tail;
    r.rhs = 2.0 * std::pow(5.0, gamma.d()) * std::exp(-eta / (2.0 * delta));
    r.detail = "eta = " + std::to_string(eta);
    settle(r);
    return r;
  }
  throw DomainError("unknown part '" + std::string(part) + "' (expected i, ii, iii, iv)");
}

InequalityReport check_tail_bound(const BohrCutoff& cutoff, double eta) {
  if (eta < 0.0) throw DomainError("tail radius must be nonnegative");
  InequalityReport r = base_report("tail", cutoff.gamma(), cutoff.delta());
  r.lhs = tail_mass(cutoff, eta);
  r.rhs = 4.0 * std::pow(5.0, cutoff.d()) * std::exp(-eta / (4.0 * cutoff.delta()));
  r.detail = "eta = " + std::to_string(eta);
  settle(r);
  return r;
}

InequalityReport check_sqrt_lipschitz(const BohrCutoff& cutoff, std::size_t y) {
  InequalityReport r = base_report("sqrt-lipschitz", cutoff.gamma(), cutoff.delta());
  pointwise_lipschitz(r, cutoff.psi_sqrt().values(), cutoff.gamma(), cutoff.delta(), y);
  return r;
}

InequalityReport check_bohr_domination(const FrequencySet& gamma, double delta) {
  InequalityReport r = base_report("bohr-domination", gamma, delta);
  const DenseFn tilde = smoothed_bohr(gamma, delta);
  const auto norms = gamma.norms();
  Worst w;
  for (std::size_t x = 0; x < norms.size(); ++x) {
    w.offer(norms[x] <= delta ? 1.0 : 0.0, std::numbers::e * tilde[x], x);
  }
  settle_worst(r, w);
  return r;
}

InequalityReport check_cutoff(std::string_view part, const CutoffCheckInput& in) {
  if (!in.cutoff) throw DomainError("lemma checks need a cutoff");
  const BohrCutoff& c = *in.cutoff;
  const GroupSpec& g = c.group();
  const double n = static_cast<double>(g.order());
  InequalityReport r = base_report("cutoff(" + std::string(part) + ")", c.gamma(), c.delta());

  auto need_prime = [&]() -> const BohrCutoff& {
    if (!in.cutoff_prime) throw DomainError("part " + std::string(part) + " needs a second cutoff");
    if (!(in.cutoff_prime->group() == g)) throw DomainError("cutoffs live on different groups");
    r.delta_prime = in.cutoff_prime->delta();
    return *in.cutoff_prime;
  };
  auto prime_hypothesis = [&](const BohrCutoff& cp, double tau) {
    const double dp = std::max(cp.d(), 1);
    return c.gamma().subset_of(cp.gamma()) && cp.delta() <= std::ldexp(1.0, -13) * c.delta() * tau * tau / dp;
  };

  if (part == "i") {
    const Spectrum s = dft(c.psi());
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      worst = std::max({worst, -s[i].real(), std::abs(s[i].imag())});
    }
    r.lhs = worst;
    r.rhs = 1e-9;
    r.detail = "largest negative real part or imaginary part of the transform";
    settle(r);
    return r;
  }
  if (part == "ii") {
    r.lhs = c.psi().l1();
    r.rhs = 1.0;
    r.holds = std::abs(r.lhs - r.rhs) <= kEqualityTol;
    r.slack = kEqualityTol - std::abs(r.lhs - r.rhs);
    return r;
  }
  if (part == "iii") {
    r.lhs = c.psi().sup();
    r.rhs = 3.0 / (delta_pow_d(c.delta(), c.d()) * n);
    r.hypothesis_ok = c.d() == 0 || c.delta() <= 1.0;
    settle(r);
    return r;
  }
  if (part == "iv" || part == "iv-hat") {
    r.tau = in.tau;
    const double d = std::max(c.d(), 1);
    r.hypothesis_ok = in.tau > 0.0 && in.tau < 0.25 && c.gamma().contains(in.character) &&
                      c.delta() <= std::ldexp(1.0, -12) * in.tau * in.tau / d;
    if (part == "iv") {
      r.lhs = character_l1_defect(g, in.character, c.psi());
      r.rhs = in.tau;
    } else {
      r.lhs = 1.0 - in.tau;
      r.rhs = c.psi_hat()[in.character];
    }
    settle(r);
    return r;
  }
  if (part == "v") {
    pointwise_lipschitz(r, c.psi().values(), c.gamma(), c.delta(), in.y);
    return r;
  }
  if (part == "vi") {
    const BohrCutoff& cp = need_prime();
    r.tau = in.tau;
    r.hypothesis_ok = in.tau > 0.0 && in.tau < 0.25 && in.m >= 1 && prime_hypothesis(cp, in.tau);
    DenseFn acc = c.psi_sqrt();
    for (int i = 0; i < in.m; ++i) acc = convolve_auto(acc, cp.psi());
    const double factor = (std::ldexp(1.0, in.m) - 1.0) * in.tau;
    Worst w;
    for (std::size_t x = 0; x < acc.size(); ++x) {
      w.offer(std::abs(acc[x] - c.psi_sqrt()[x]), factor * c.psi_sqrt()[x], x);
    }
    settle_worst(r, w);
    r.detail += ", m = " + std::to_string(in.m);
    return r;
  }
  if (part == "vii") {
    const BohrCutoff& cp = need_prime();
    r.tau = in.tau;
    r.hypothesis_ok = in.tau > 0.0 && in.tau < 0.25 && prime_hypothesis(cp, in.tau);
    const DenseFn conv = convolve_auto(c.psi(), cp.psi());
    double s = 0.0;
    for (std::size_t x = 0; x < conv.size(); ++x) s += std::abs(conv[x] - c.psi()[x]);
    r.lhs = s;
    r.rhs = in.tau;
    settle(r);
    return r;
  }
  if (part == "viii") {
    const BohrCutoff& cp = need_prime();
    if (!in.f) throw DomainError("part viii needs a function f");
    if (!(in.f->group() == g)) throw DomainError("f lives on a different group");
    r.tau = in.tau;
    r.hypothesis_ok = in.tau > 0.0 && in.tau < 0.25 && prime_hypothesis(cp, in.tau) && in.f->sup() <= 1.0;
    DenseFn weighted(g);
    for (std::size_t x = 0; x < weighted.size(); ++x) weighted[x] = (*in.f)[x] * c.psi_sqrt()[x];
    const DenseFn left = convolve_auto(weighted, cp.psi());
    const DenseFn smooth = convolve_auto(*in.f, cp.psi());
    double s = 0.0;
    for (std::size_t x = 0; x < left.size(); ++x) {
      const double diff = left[x] - c.psi_sqrt()[x] * smooth[x];
      s += diff * diff;
    }
    r.lhs = std::sqrt(s);
    r.rhs = in.tau;
    settle(r);
    return r;
  }
  if (part == "ix") {
    const BohrCutoff& cp = need_prime();
    const double dp = std::max(cp.d(), 1);
    r.hypothesis_ok = in.kappa > 0.0 && in.omega > 0.0 && c.gamma().subset_of(cp.gamma()) &&
                      c.psi_hat()[in.character] >= in.kappa &&
                      cp.delta() <= in.omega * in.omega * in.kappa * in.kappa * c.delta() / (std::ldexp(1.0, 13) * dp);
    r.lhs = character_l1_defect(g, in.character, cp.psi());
    r.rhs = in.omega;
    settle(r);
    return r;
  }
  throw DomainError("unknown part '" + std::string(part) + "' (expected i..ix or iv-hat)");
}

}  // namespace arithreg
