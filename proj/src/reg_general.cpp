#include "arithreg/reg_general.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "arithreg/errors.hpp"

namespace arithreg {

namespace {

constexpr double kTieRel = 1e-12;
constexpr double kGainTol = 1e-12;
constexpr std::size_t kSparseSupport = 48;
constexpr std::uint64_t kExactBudget = std::uint64_t{1} << 28;

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("eps must lie in (0, 1/2)");
}

void require_sets(std::span<const DenseFn> sets) {
  if (sets.empty()) throw DomainError("at least one set is required");
  for (const auto& s : sets) require_same_group(sets.front(), s);
}

void require_indicators(std::span<const DenseFn> sets) {
  for (const auto& s : sets) {
    if (!s.is_indicator()) throw DomainError("expected 0/1 sets");
  }
}

void require_pair_group(const DenseFn& a, const RegPair& pair) {
  if (!(a.group() == pair.group())) throw DomainError("set and pair live on different groups");
}

double ipow(double b, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Least index whose magnitude is within kTieRel of the maximum.
std::pair<double, std::size_t> peak_of(const std::vector<double>& mags) {
  const double m = *std::max_element(mags.begin(), mags.end());
  if (m == 0.0) return {0.0, 0};
  for (std::size_t i = 0; i < mags.size(); ++i) {
    if (mags[i] >= m * (1.0 - kTieRel)) return {m, i};
  }
  return {m, 0};
}

struct Support {
  std::vector<std::size_t> at;
  std::vector<double> value;
};

Support support_of(const DenseFn& f) {
  Support s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) {
      s.at.push_back(i);
      s.value.push_back(f[i]);
    }
  }
  return s;
}

/// Shared data for evaluating both regularity conditions of one set.
class LocalEvaluator {
 public:
  LocalEvaluator(const DenseFn& a, const RegPair& pair)
      : a_(a), g_(a.group()), alpha1_(alpha(a, pair.psi1())), alpha2_(alpha(a, pair.psi2())),
        psi2_(pair.psi2().psi()), psi1_support_(support_of(pair.psi1().psi())), psi2_support_(support_of(psi2_)) {
    const std::size_t n = g_.order();
    if (pair.R().empty()) {
      uniform_ = true;
      const Spectrum s = dft(a_);
      std::vector<double> mags(n, 0.0);
      for (std::size_t gamma = 1; gamma < n; ++gamma) mags[gamma] = std::abs(s[gamma]) / static_cast<double>(n);
      uniform_peak_ = peak_of(mags);
      mean_ = a_.sum() / static_cast<double>(n);
    } else if (psi2_support_.at.size() <= kSparseSupport) {
      sparse_ = true;
      const std::uint64_t l = g_.phase_denominator();
      roots_.resize(l);
      for (std::uint64_t t = 0; t < l; ++t) {
        roots_[t] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(l));
      }
      phases_.resize(psi2_support_.at.size() * n);
      for (std::size_t j = 0; j < psi2_support_.at.size(); ++j) {
        for (std::size_t gamma = 0; gamma < n; ++gamma) phases_[j * n + gamma] = g_.phase(gamma, psi2_support_.at[j]);
      }
    }
  }

  const DenseFn& alpha1() const { return alpha1_; }
  const DenseFn& alpha2() const { return alpha2_; }

  double cond1(std::size_t x) const {
    double s = 0.0;
    const double a1 = alpha1_[x];
    for (std::size_t j = 0; j < psi1_support_.at.size(); ++j) {
      const double diff = alpha2_[g_.add(x, psi1_support_.at[j])] - a1;
      s += diff * diff * psi1_support_.value[j];
    }
    return s;
  }

  std::pair<double, std::size_t> cond2(std::size_t x) const {
    const std::size_t n = g_.order();
    const double a2 = alpha2_[x];
    if (uniform_) {
      const double trivial = std::abs(mean_ - a2);
      if (trivial > uniform_peak_.first) return {trivial, 0};
      return uniform_peak_;
    }
    std::vector<double> mags(n);
    if (sparse_) {
      const std::size_t m = psi2_support_.at.size();
      std::vector<double> v(m);
      for (std::size_t j = 0; j < m; ++j) v[j] = (a_[g_.add(x, psi2_support_.at[j])] - a2) * psi2_support_.value[j];
      for (std::size_t gamma = 0; gamma < n; ++gamma) {
        std::complex<double> c = 0.0;
        for (std::size_t j = 0; j < m; ++j) c += v[j] * roots_[phases_[j * n + gamma]];
        mags[gamma] = std::abs(c);
      }
    } else {
      DenseFn v(g_);
      for (std::size_t i = 0; i < n; ++i) v[i] = (a_[g_.add(x, i)] - a2) * psi2_[i];
      const Spectrum s = dft(v);
      for (std::size_t gamma = 0; gamma < n; ++gamma) mags[gamma] = std::abs(s[gamma]);
    }
    return peak_of(mags);
  }

  RegValueWitness witness(std::size_t x, double eps) const {
    RegValueWitness w;
    w.x = x;
    w.cond1_lhs = cond1(x);
    const auto [c2, worst] = cond2(x);
    w.cond2_lhs = c2;
    w.worst_char = worst;
    w.regular = w.cond1_lhs <= eps * eps && w.cond2_lhs <= eps;
    return w;
  }

 private:
  const DenseFn& a_;
  GroupSpec g_;
  DenseFn alpha1_;
  DenseFn alpha2_;
  DenseFn psi2_;
  Support psi1_support_;
  Support psi2_support_;
  bool uniform_ = false;
  bool sparse_ = false;
  std::pair<double, std::size_t> uniform_peak_{0.0, 0};
  double mean_ = 0.0;
  std::vector<std::complex<double>> roots_;
  std::vector<std::uint64_t> phases_;
};

double index_of_alpha(const DenseFn& alpha1) { return alpha1.l2_squared() / static_cast<double>(alpha1.size()); }

IndexReport index_with(std::span<const DenseFn> sets, const BohrCutoff& cutoff) {
  IndexReport r;
  for (const auto& a : sets) {
    r.per_set.push_back(index_of_alpha(alpha(a, cutoff)));
    r.total += r.per_set.back();
  }
  return r;
}

RefineResult refine_with(std::span<const DenseFn> sets, const RegPair& pair, const PairRegularity& pr) {
  if (pr.regular) throw PreconditionError("refine_pair called on a pair that is already eps-regular");
  const int k = pair.k();
  const double eps = pair.eps();
  const double n = static_cast<double>(pair.group().order());

  RefineTrace t;
  t.irregular_counts = pr.irregular_counts;
  t.set = static_cast<std::size_t>(
      std::max_element(pr.irregular_counts.begin(), pr.irregular_counts.end()) - pr.irregular_counts.begin());
  const SetRegularity& sr = pr.sets[t.set];
  t.cond1_failures = sr.cond1_failures;
  t.cond2_failures = sr.cond2_failures;
  t.d_before = pair.d();
  t.eta_before = pair.eta();
  t.eta2_before = pair.eta2();

  RegPair next;
  if (static_cast<double>(sr.cond1_failures) >= eps * n / (2.0 * k)) {
    t.branch = "density";
    next = RegPair(pair.R(), pair.eta2(), k, eps, pair.mode());
    t.required_gain = eps * eps * eps / (8.0 * k);
  } else {
    std::vector<std::size_t> perp, other;
    for (const auto& w : sr.values) {
      if (w.cond2_lhs <= eps) continue;
      (pair.psi2().psi_hat()[w.worst_char] >= eps / 6.0 ? perp : other).push_back(w.x);
    }
    t.required_gain = std::ldexp(1.0, -10) * eps * eps * eps / k;
    if (perp.size() >= other.size()) {
      t.branch = "perp";
      for (auto x : perp) t.witnesses.push_back(sr.values[x].worst_char);
      std::sort(t.witnesses.begin(), t.witnesses.end());
      t.witnesses.erase(std::unique(t.witnesses.begin(), t.witnesses.end()), t.witnesses.end());
      next = RegPair(pair.R(), perp_width(pair.eta(), pair.d(), k, eps, pair.mode()), k, eps, pair.mode());
    } else {
      t.branch = "cover";
      const CoverResult cover = cover_by_translates(other, eps * pair.eta2() / 60.0, pair.R());
      if (!cover.ok()) throw InternalError("covering postconditions failed during refinement");
      t.cover_parts = cover.parts.size();
      for (auto z : cover.centers) {
        const std::size_t w = sr.values[z].worst_char;
        if (std::find(t.witnesses.begin(), t.witnesses.end(), w) == t.witnesses.end()) t.witnesses.push_back(w);
      }
      const FrequencySet r_new = pair.R().united(t.witnesses);
      next = RegPair(r_new, cover_width(pair.eta2(), r_new.d(), k, eps, pair.mode()), k, eps, pair.mode());
    }
  }
  t.d_after = next.d();
  t.eta_after = next.eta();

  const IndexReport before = index_general(sets, pair);
  const IndexReport second = index_with(sets, pair.psi2());
  const IndexReport after = index_general(sets, next);
  t.index_before = before.total;
  t.index_second = second.total;
  t.index_after = after.total;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    t.largest_drop = std::max(t.largest_drop, before.per_set[j] - second.per_set[j]);
  }
  t.drop_bound = std::ldexp(1.0, -9) * eps * eps * eps / (static_cast<double>(k) * k);

  const double dd = std::max(pair.d(), 1);
  const double log_base = std::log(2.0 * dd * k / (pair.eta() * eps));
  t.size_bounds_ok = std::log(std::max(next.d(), 1)) <= 60.0 * dd * log_base + 1e-12 &&
                     std::log(next.eta()) >= -60.0 * dd * log_base - 1e-12;

  t.gain_asserted = pair.mode().mode == ConstantsMode::faithful && !pair.mode().second_width_override;
  if (t.gain_asserted && t.index_after < t.index_before + t.required_gain - kGainTol) {
    throw InternalError("refinement (" + t.branch + ") gained " + std::to_string(t.index_after - t.index_before) +
                        " index, below the required " + std::to_string(t.required_gain));
  }
  return {std::move(next), std::move(t)};
}

}  // namespace

std::string to_string(ConstantsMode m) { return m == ConstantsMode::faithful ? "faithful" : "scaled"; }

ConstantsMode parse_mode(std::string_view text) {
  if (text == "faithful") return ConstantsMode::faithful;
  if (text == "scaled") return ConstantsMode::scaled;
  throw InvalidSpecError("unknown constants mode '" + std::string(text) + "'");
}

double second_width(double eta, int d, int k, double eps, const ModeConfig& mode) {
  if (mode.second_width_override) return mode.second_width_override(eta, d, k, eps);
  if (mode.mode == ConstantsMode::scaled) return eta / mode.scale;
  return std::ldexp(1.0, -40) * ipow(eps, 6) * eta / (std::max(d, 1) * ipow(k, 4));
}

double perp_width(double eta, int d, int k, double eps, const ModeConfig& mode) {
  if (mode.mode == ConstantsMode::scaled) return eta / (mode.scale * mode.scale);
  const double dd = std::max(d, 1);
  return std::ldexp(1.0, -80) * ipow(eps, 12) * eta / (dd * dd * ipow(k, 8));
}

double cover_width(double eta2, int d_new, int k, double eps, const ModeConfig& mode) {
  if (mode.mode == ConstantsMode::scaled) return eta2 / mode.scale;
  return std::ldexp(1.0, -50) * ipow(eps, 6) * eta2 / (std::max(d_new, 1) * ipow(k, 4));
}

RegPair::RegPair(FrequencySet r, double eta, int k, double eps, ModeConfig mode)
    : r_(std::move(r)), eta_(eta), k_(k), eps_(eps), mode_(std::move(mode)) {
  require_eps(eps);
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("pair width must lie in (0, 1]");
  if (k < 1) throw DomainError("k must be positive");
  if (mode_.mode == ConstantsMode::scaled && !(mode_.scale > 1.0)) throw DomainError("scale must exceed 1");
  eta2_ = second_width(eta_, r_.d(), k_, eps_, mode_);
  if (!(eta2_ > 0.0 && eta2_ <= eta_)) throw DomainError("second width must lie in (0, eta]");
  psi1_ = BohrCutoff(r_, eta_);
  psi2_ = BohrCutoff(r_, eta2_);
}

RegPair RegPair::trivial(const GroupSpec& group, int k, double eps, ModeConfig mode) {
  return RegPair(FrequencySet(group), 1.0, k, eps, std::move(mode));
}

InequalityReport check_pair_nesting(const RegPair& pair) {
  InequalityReport r;
  r.part = "pair-nesting";
  r.group = pair.group().to_string();
  r.d = pair.d();
  r.delta = pair.eta();
  r.delta_prime = pair.eta2();
  const DenseFn c = convolve(pair.psi1().psi(), pair.psi2().psi());
  for (std::size_t i = 0; i < c.size(); ++i) r.lhs += std::abs(c[i] - pair.psi1().psi()[i]);
  const double k = pair.k();
  r.rhs = std::ldexp(1.0, -12) * std::pow(pair.eps(), 3) / (k * k);
  r.hypothesis_ok = pair.mode().mode == ConstantsMode::faithful && !pair.mode().second_width_override;
  if (pair.psi1().degenerate()) r.detail = "degenerate";
  settle(r);
  return r;
}

DenseFn alpha(const DenseFn& a, const BohrCutoff& cutoff) {
  if (!(a.group() == cutoff.group())) throw DomainError("set and cutoff live on different groups");
  return convolve_auto(a, cutoff.psi());
}

RegValueWitness check_regular_value(const DenseFn& a, const RegPair& pair, std::size_t x) {
  require_pair_group(a, pair);
  if (x >= a.size()) throw DomainError("element index out of range");
  return LocalEvaluator(a, pair).witness(x, pair.eps());
}

SetRegularity evaluate_regularity(const DenseFn& a, const RegPair& pair) {
  require_pair_group(a, pair);
  const LocalEvaluator ev(a, pair);
  SetRegularity out;
  out.alpha1 = ev.alpha1();
  out.alpha2 = ev.alpha2();
  const double eps = pair.eps();
  out.values.reserve(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) {
    out.values.push_back(ev.witness(x, eps));
    const auto& w = out.values.back();
    out.cond1_failures += w.cond1_lhs > eps * eps ? 1 : 0;
    out.cond2_failures += w.cond2_lhs > eps ? 1 : 0;
    out.irregular += w.regular ? 0 : 1;
  }
  return out;
}

std::complex<double> local_coefficient(const DenseFn& a, const DenseFn& alpha2, const BohrCutoff& psi2,
                                       std::size_t x, std::size_t gamma) {
  const GroupSpec& g = a.group();
  std::complex<double> c = 0.0;
  for (std::size_t n = 0; n < g.order(); ++n) {
    const double p = psi2.psi()[n];
    if (p == 0.0) continue;
    c += (a[g.add(x, n)] - alpha2[x]) * p * g.char_eval(gamma, n);
  }
  return c;
}

PairRegularity is_regular_pair(std::span<const DenseFn> sets, const RegPair& pair) {
  require_sets(sets);
  PairRegularity out;
  out.regular = true;
  const double limit = pair.eps() * static_cast<double>(pair.group().order());
  for (const auto& a : sets) {
    out.sets.push_back(evaluate_regularity(a, pair));
    out.irregular_counts.push_back(out.sets.back().irregular);
    if (!(static_cast<double>(out.sets.back().irregular) < limit)) out.regular = false;
  }
  return out;
}

IndexReport index_general(std::span<const DenseFn> sets, const RegPair& pair) {
  require_sets(sets);
  require_pair_group(sets.front(), pair);
  return index_with(sets, pair.psi1());
}

CoverResult cover_by_translates(std::span<const std::size_t> u, double kappa, const FrequencySet& r) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  if (u.empty()) throw DomainError("cannot cover an empty set");
  const GroupSpec& g = r.group();
  std::vector<std::size_t> members(u.begin(), u.end());
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.back() >= g.order()) throw DomainError("element index out of range");

  CoverResult out;
  out.kappa = kappa;
  const std::vector<std::size_t> lambda = bohr_set(r, std::min(kappa / 2.0, 0.5));
  std::vector<char> remaining(g.order(), 0);
  for (auto x : members) remaining[x] = 1;
  std::size_t left = members.size();
  std::vector<std::size_t> hits(g.order());
  while (2 * left > members.size()) {
    std::fill(hits.begin(), hits.end(), 0);
    for (std::size_t x = 0; x < g.order(); ++x) {
      if (!remaining[x]) continue;
      for (auto l : lambda) ++hits[g.sub(x, l)];
    }
    const std::size_t z = static_cast<std::size_t>(std::max_element(hits.begin(), hits.end()) - hits.begin());
    std::vector<std::size_t> part;
    for (auto l : lambda) {
      const std::size_t x = g.add(z, l);
      if (remaining[x]) part.push_back(x);
    }
    std::sort(part.begin(), part.end());
    for (auto x : part) remaining[x] = 0;
    left -= part.size();
    out.centers.push_back(part.front());
    out.parts.push_back(std::move(part));
  }

  std::vector<char> seen(g.order(), 0);
  std::size_t covered = 0;
  out.disjoint = true;
  out.contained = true;
  for (std::size_t i = 0; i < out.parts.size(); ++i) {
    for (auto x : out.parts[i]) {
      if (seen[x] || !std::binary_search(members.begin(), members.end(), x)) out.disjoint = false;
      seen[x] = 1;
      ++covered;
      if (r.norm(g.sub(x, out.centers[i])) > kappa * (1.0 + 1e-12)) out.contained = false;
    }
  }
  out.half_covered = 2 * covered >= members.size();
  out.count_bound = std::pow(2.0 / kappa, r.d());
  out.count_ok = static_cast<double>(out.parts.size()) <= out.count_bound * (1.0 + 1e-12);
  return out;
}

RefineResult refine_pair(std::span<const DenseFn> sets, const RegPair& pair) {
  require_sets(sets);
  if (static_cast<int>(sets.size()) != pair.k()) throw DomainError("number of sets differs from the pair's k");
  return refine_with(sets, pair, is_regular_pair(sets, pair));
}

RegularizeResult regularize(std::span<const DenseFn> sets, double eps, const RegularizeOptions& options) {
  require_sets(sets);
  require_eps(eps);
  if (options.budget < 1) throw DomainError("budget must be at least 1");
  const int k = static_cast<int>(sets.size());
  const GroupSpec& g = sets.front().group();
  RegularizeResult out;
  out.iteration_bound = std::ldexp(1.0, 10) * k * k / (eps * eps * eps);
  out.pair = RegPair(options.start ? *options.start : FrequencySet(g), 1.0, k, eps, options.mode);
  for (;;) {
    const PairRegularity pr = is_regular_pair(sets, out.pair);
    out.final_irregular = pr.irregular_counts;
    if (pr.regular) {
      out.regular = true;
      break;
    }
    if (static_cast<int>(out.trace.size()) >= options.budget) {
      out.budget_exhausted = true;
      break;
    }
    RefineResult step = refine_with(sets, out.pair, pr);
    out.trace.push_back(std::move(step.trace));
    out.pair = std::move(step.next);
  }
  if (options.mode.mode == ConstantsMode::faithful && static_cast<double>(out.trace.size()) > out.iteration_bound) {
    throw InternalError("faithful iteration exceeded its step bound");
  }
  out.final_index = index_general(sets, out.pair);
  return out;
}

WeightedCount weighted_T(std::span<const DenseFn> sets, const RegPair& pair, std::span<const std::size_t> xs) {
  require_sets(sets);
  require_pair_group(sets.front(), pair);
  const std::size_t k = sets.size();
  if (k < 2) throw DomainError("weighted count needs k >= 2");
  if (xs.size() != k) throw DomainError("one shift per set is required");
  const GroupSpec& g = pair.group();
  std::size_t total = 0;
  for (auto x : xs) {
    if (x >= g.order()) throw DomainError("element index out of range");
    total = g.add(total, x);
  }
  if (total != 0) throw DomainError("shifts must sum to zero");

  std::vector<DenseFn> fs;
  WeightedCount out;
  out.product = 1.0;
  out.all_regular = true;
  for (std::size_t i = 0; i < k; ++i) {
    const bool outer = i == 0 || i + 1 == k;
    const DenseFn& weight = outer ? pair.psi1().psi_sqrt() : pair.psi2().psi();
    DenseFn f(g);
    for (std::size_t n = 0; n < g.order(); ++n) f[n] = sets[i][g.add(xs[i], n)] * weight[n];
    fs.push_back(std::move(f));
    const LocalEvaluator ev(sets[i], pair);
    out.product *= outer ? ev.alpha1()[xs[i]] : ev.alpha2()[xs[i]];
    const bool reg = ev.witness(xs[i], pair.eps()).regular;
    out.regular.push_back(reg);
    out.all_regular = out.all_regular && reg;
  }
  out.value = zero_sum_count(fs);
  double work = 1.0;
  for (std::size_t i = 1; i < k; ++i) work *= static_cast<double>(g.order());
  if (work <= static_cast<double>(kExactBudget)) {
    out.brute_force = brute_force_zero_sum(fs, kExactBudget);
    out.brute_force_done = true;
  }
  out.deviation = std::abs(out.value - out.product);
  out.bound = 4.0 * std::ldexp(1.0, static_cast<int>(k)) * pair.eps();
  out.bound_ok = leq_tol(out.deviation, out.bound);
  return out;
}

InequalityReport check_smoothed_count(const RegPair& pair, const DenseFn& f, int k) {
  if (!(f.group() == pair.group())) throw DomainError("function and pair live on different groups");
  if (k < 2) throw DomainError("k must be at least 2");
  const GroupSpec& g = pair.group();
  const DenseFn& root = pair.psi1().psi_sqrt();
  std::vector<DenseFn> fs{root};
  for (int i = 0; i < k - 2; ++i) fs.push_back(pair.psi2().psi());
  DenseFn last(g);
  for (std::size_t x = 0; x < g.order(); ++x) last[x] = f[x] * root[x];
  fs.push_back(last);

  InequalityReport r;
  r.part = "smoothed-count";
  r.group = g.to_string();
  r.d = pair.d();
  r.delta = pair.eta();
  r.delta_prime = pair.eta2();
  double mass = 0.0;
  for (std::size_t x = 0; x < g.order(); ++x) mass += f[x] * pair.psi1().psi()[x];
  r.lhs = std::abs(zero_sum_count(fs) - mass);
  r.rhs = std::ldexp(1.0, k) * pair.eps();

  DenseFn smoothed = root;
  for (int i = 0; i < k - 2; ++i) smoothed = convolve(smoothed, pair.psi2().psi());
  bool premise = true;
  for (double v : f.values()) premise = premise && std::abs(v) <= 1.0 + 1e-12;
  for (std::size_t x = 0; x < g.order(); ++x) {
    premise = premise && std::abs(smoothed[x] - root[x]) <= r.rhs * root[x] + 1e-14;
  }
  r.hypothesis_ok = premise;
  r.detail = to_string(pair.mode().mode);
  settle(r);
  return r;
}

EnergyIncrementReport check_energy_increment(const DenseFn& phi1, const DenseFn& phi2, const DenseFn& f) {
  require_same_group(phi1, phi2);
  require_same_group(phi1, f);
  const GroupSpec& g = f.group();
  const std::size_t n = g.order();
  EnergyIncrementReport out;
  const DenseFn nest = convolve_direct(phi1, phi2);
  for (std::size_t x = 0; x < n; ++x) out.kappa += std::abs(nest[x] - phi1[x]);
  const DenseFn f1 = convolve_direct(f, phi1);
  const DenseFn f2 = convolve_direct(f, phi2);
  const DenseFn f2_smooth = convolve_direct(f2, phi1);
  DenseFn f2_sq(g);
  for (std::size_t x = 0; x < n; ++x) f2_sq[x] = f2[x] * f2[x];
  const DenseFn f2_sq_smooth = convolve_direct(f2_sq, phi1);

  double spread = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double variance = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (phi1[y] == 0.0) continue;
      const double v = f2[g.add(x, y)];
      variance += (v - f2_smooth[x]) * (v - f2_smooth[x]) * phi1[y];
      spread += (v - f1[x]) * (v - f1[x]) * phi1[y];
    }
    out.identity_defect =
        std::max(out.identity_defect, std::abs(variance - (f2_sq_smooth[x] - f2_smooth[x] * f2_smooth[x])));
  }
  out.identity_ok = out.identity_defect <= 1e-8;

  InequalityReport& r = out.inequality;
  r.part = "energy-increment";
  r.group = g.to_string();
  r.lhs = spread - 8.0 * out.kappa * static_cast<double>(n);
  r.rhs = f2.l2_squared() - f1.l2_squared();
  bool bounded = true;
  for (double v : f.values()) bounded = bounded && std::abs(v) <= 1.0 + 1e-12;
  r.hypothesis_ok = bounded;
  settle(r);
  return out;
}

InequalityReport check_sparse_density(const DenseFn& a, const BohrCutoff& cutoff, double rho) {
  if (!(rho > 0.0)) throw DomainError("rho must be positive");
  const DenseFn smooth = alpha(a, cutoff);
  InequalityReport r;
  r.part = "sparse-density";
  r.group = a.group().to_string();
  r.d = cutoff.d();
  r.delta = cutoff.delta();
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a[x] != 0.0 && smooth[x] <= rho) r.lhs += 1.0;
  }
  r.rhs = rho * static_cast<double>(a.size());
  r.hypothesis_ok = a.is_indicator();
  settle(r);
  return r;
}

InequalityReport check_coefficient_stability(const DenseFn& a, const RegPair& pair, std::size_t x,
                                             std::size_t gamma) {
  require_pair_group(a, pair);
  const GroupSpec& g = pair.group();
  if (x >= g.order() || gamma >= g.order()) throw DomainError("index out of range");
  const double eps = pair.eps();
  const DenseFn a2 = alpha(a, pair.psi2());
  InequalityReport r;
  r.part = "coefficient-stability";
  r.group = g.to_string();
  r.d = pair.d();
  r.delta = pair.eta();
  r.delta_prime = pair.eta2();
  r.hypothesis_ok = pair.psi2().psi_hat()[gamma] < eps / 6.0 &&
                    std::abs(local_coefficient(a, a2, pair.psi2(), x, gamma)) >= eps;
  r.lhs = eps / 2.0;
  r.rhs = std::numeric_limits<double>::infinity();
  const double radius = std::min(eps * pair.eta2() / 60.0, 0.5);
  for (auto m : bohr_set(pair.R(), radius)) {
    r.rhs = std::min(r.rhs, std::abs(local_coefficient(a, a2, pair.psi2(), g.add(x, m), gamma)));
  }
  settle(r);
  return r;
}

ReducedSets reduced_sets(std::span<const DenseFn> sets, const RegPair& pair, const ReduceOptions& options) {
  require_sets(sets);
  require_indicators(sets);
  const PairRegularity pr = is_regular_pair(sets, pair);
  if (!pr.regular && !options.allow_irregular_pair) throw PreconditionError("pair is not eps-regular for the sets");
  const double k = static_cast<double>(sets.size());
  const double root = std::pow(pair.eps(), 1.0 / k);
  ReducedSets out;
  out.pair_regular = pr.regular;
  out.density_threshold = 4.0 * root;
  out.removal_bound = 10.0 * k * root * static_cast<double>(pair.group().order());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const SetRegularity& sr = pr.sets[i];
    DenseFn kept = sets[i];
    std::size_t irregular = 0, sparse = 0;
    for (std::size_t x = 0; x < kept.size(); ++x) {
      if (kept[x] == 0.0) continue;
      if (!sr.values[x].regular) {
        ++irregular;
      } else if (sr.alpha1[x] <= out.density_threshold || sr.alpha2[x] <= out.density_threshold) {
        ++sparse;
      } else {
        continue;
      }
      kept[x] = 0.0;
    }
    out.sets.push_back(std::move(kept));
    out.removed_irregular.push_back(irregular);
    out.removed_sparse.push_back(sparse);
    out.removed.push_back(irregular + sparse);
    if (pr.regular && static_cast<double>(irregular + sparse) > out.removal_bound) {
      throw InternalError("reduced set deleted more than 10 k eps^(1/k) N elements");
    }
  }
  return out;
}

RemovalCertificate zero_sum_removal(std::span<const DenseFn> sets, double eps, const RegularizeOptions& options) {
  require_sets(sets);
  require_indicators(sets);
  const std::size_t k = sets.size();
  if (k < 3) throw DomainError("removal needs k >= 3");
  RemovalCertificate out;
  out.regularity = regularize(sets, eps, options);
  out.reduced = reduced_sets(sets, out.regularity.pair, {.allow_irregular_pair = !out.regularity.regular});
  out.tuples_before = zero_sum_count(sets);
  out.spectral_after = zero_sum_count(out.reduced.sets);
  double work = 1.0;
  const double n = static_cast<double>(sets.front().size());
  for (std::size_t i = 1; i < k; ++i) work *= n;
  if (work <= static_cast<double>(kExactBudget)) {
    out.exact_after = brute_force_zero_sum(out.reduced.sets, kExactBudget);
    if (std::abs(*out.exact_after - out.spectral_after) > 1e-6 * std::max(1.0, out.tuples_before)) {
      throw InternalError("spectral and exhaustive zero-sum counts disagree");
    }
    out.zero_sum_free = *out.exact_after == 0.0;
  } else {
    out.zero_sum_free = out.spectral_after < 0.5;
  }
  const RegPair& pair = out.regularity.pair;
  out.coupling = out.tuples_before * pair.psi1().psi().sup() *
                 std::pow(pair.psi2().psi().sup(), static_cast<double>(k - 2));
  out.coupling_holds = out.regularity.regular && out.coupling < eps;
  out.removal_within_bound = true;
  for (auto r : out.reduced.removed) {
    out.removal_within_bound = out.removal_within_bound && static_cast<double>(r) <= out.reduced.removal_bound;
  }
  if (out.coupling_holds && pair.mode().mode == ConstantsMode::faithful && !out.zero_sum_free) {
    throw InternalError("reduced sets kept a zero-sum tuple although the coupling bound holds");
  }
  return out;
}

}  // namespace arithreg
