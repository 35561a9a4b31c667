#include "arithreg/applications.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "arithreg/errors.hpp"

namespace arithreg {

namespace {

void require_odd(const GroupSpec& g, const char* what) {
  if (g.order() % 2 == 0) throw DomainError(std::string(what) + " needs a group of odd order, got " + g.to_string());
}

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0, 1)");
}

std::vector<char> membership(const DenseFn& a) {
  std::vector<char> in(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) in[x] = a[x] != 0.0;
  return in;
}

double weighted_table_sum(const std::vector<std::uint64_t>& table, const DenseFn& nu, bool skip_zero) {
  double s = 0.0;
  for (std::size_t d = skip_zero ? 1 : 0; d < table.size(); ++d) s += static_cast<double>(table[d]) * nu[d];
  return s;
}

RegularityPath run_path(const DenseFn& a, double eps, const RegularizeOptions& options) {
  RegularityPath path;
  const auto sets = progression_triple(a);
  path.regularity = regularize(sets, eps, options);
  path.nu = nu_weight(path.regularity.pair);
  path.weight = progression_weight(a, path.regularity.pair, path.regularity.regular);
  return path;
}

}  // namespace

IntegerSet::IntegerSet(std::uint64_t n_max, std::vector<std::int64_t> members) : n_max_(n_max) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (auto x : members) {
    if (x < 1 || static_cast<std::uint64_t>(x) > n_max) {
      throw DomainError("member " + std::to_string(x) + " lies outside [1, " + std::to_string(n_max) + "]");
    }
  }
  members_ = std::move(members);
}

IntegerSet IntegerSet::parse(std::string_view text, std::uint64_t n_max) {
  std::vector<std::int64_t> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size()) {
      throw InvalidSpecError("line " + std::to_string(line_no) + ": expected an integer, got '" + std::string(line) +
                             "'");
    }
    out.push_back(v);
  }
  return IntegerSet(n_max, std::move(out));
}

bool IntegerSet::contains(std::int64_t x) const { return std::binary_search(members_.begin(), members_.end(), x); }

double IntegerSet::density() const {
  return n_max_ == 0 ? 0.0 : static_cast<double>(members_.size()) / static_cast<double>(n_max_);
}

DenseFn IntegerSet::to_cyclic(std::uint64_t m) const {
  const GroupSpec g = GroupSpec::cyclic(m);
  DenseFn a(g);
  for (auto x : members_) a[static_cast<std::size_t>(static_cast<std::uint64_t>(x) % m)] = 1.0;
  return a;
}

DenseFn dilate(const DenseFn& a, std::int64_t k) {
  const GroupSpec& g = a.group();
  DenseFn out(g);
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (a[x] != 0.0) out[g.scalar_mul(k, x)] += a[x];
  }
  return out;
}

std::uint64_t ap3_count(const DenseFn& a, std::size_t d) {
  const GroupSpec& g = a.group();
  if (d >= g.order()) throw DomainError("difference out of range");
  const std::size_t d2 = g.add(d, d);
  std::uint64_t count = 0;
  for (auto x : a.support()) count += a[g.add(x, d)] != 0.0 && a[g.add(x, d2)] != 0.0 ? 1 : 0;
  return count;
}

std::uint64_t ap3_count(const DenseFn& a, const GroupElement& d) {
  a.group().check_member(d);
  return ap3_count(a, a.group().index_of(d));
}

std::uint64_t ap3_count(const IntegerSet& a, std::int64_t d) {
  std::uint64_t count = 0;
  for (auto x : a.members()) count += a.contains(x + d) && a.contains(x + 2 * d) ? 1 : 0;
  return count;
}

std::vector<std::uint64_t> ap3_table(const DenseFn& a) {
  const GroupSpec& g = a.group();
  const std::size_t n = g.order();
  const auto in = membership(a);
  const auto members = a.support();
  std::vector<std::uint64_t> table(n, 0);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t d2 = g.add(d, d);
    std::uint64_t c = 0;
    for (auto x : members) c += in[g.add(x, d)] && in[g.add(x, d2)] ? 1 : 0;
    table[d] = c;
  }
  return table;
}

double ap3_total_spectral(const DenseFn& a) {
  const std::vector<DenseFn> fs{a, dilate(a, -2), a};
  return zero_sum_count(fs);
}

NuReport nu_weight(const RegPair& pair) {
  const GroupSpec& g = pair.group();
  require_odd(g, "nu weight");
  const std::size_t n = g.order();
  const DenseFn& root = pair.psi1().psi_sqrt();
  const DenseFn& psi2 = pair.psi2().psi();
  const auto roots = root.support();

  NuReport out;
  out.nu = DenseFn(g);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t d2 = g.add(d, d);
    double s = 0.0;
    for (auto y : roots) {
      const double tail = root[g.add(y, d2)];
      if (tail != 0.0) s += root[y] * psi2[g.scalar_mul(2, g.add(y, d))] * tail;
    }
    out.nu[d] = s;
  }
  out.total = out.nu.sum();
  const std::vector<DenseFn> fs{root, psi2, root};
  out.spectral_total = zero_sum_count(fs);
  out.identity_defect = std::abs(out.total - out.spectral_total);
  out.min_value = *std::min_element(out.nu.values().begin(), out.nu.values().end());

  const InequalityReport premise = check_smoothed_count(pair, DenseFn(g, 1.0), 3);
  out.bound = premise;
  out.bound.part = "nu-mass";
  out.bound.lhs = out.total;
  out.bound.rhs = 1.0 + 8.0 * pair.eps();
  settle(out.bound);
  return out;
}

std::vector<DenseFn> progression_triple(const DenseFn& a) { return {a, dilate(a, -2), a}; }

ProgressionWeightReport progression_weight(const DenseFn& a, const RegPair& pair, bool pair_regular) {
  const GroupSpec& g = a.group();
  require_same_group(a, pair.psi1().psi());
  require_odd(g, "progression weight");
  const std::size_t n = g.order();
  const double nn = static_cast<double>(n);
  const DenseFn& root = pair.psi1().psi_sqrt();
  const DenseFn& psi2 = pair.psi2().psi();
  const DenseFn a2 = dilate(a, -2);

  ProgressionWeightReport out;
  const auto table = ap3_table(a);
  const DenseFn nu = nu_weight(pair).nu;
  out.weighted = weighted_table_sum(table, nu, false);
  out.weighted_nonzero = weighted_table_sum(table, nu, true);

  std::vector<DenseFn> fs(3, DenseFn(g));
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t x2 = g.scalar_mul(-2, x);
    for (std::size_t t = 0; t < n; ++t) {
      fs[0][t] = a[g.add(x, t)] * root[t];
      fs[1][t] = a2[g.add(x2, t)] * psi2[t];
    }
    fs[2] = fs[0];
    out.local_sum += zero_sum_count(fs);
  }
  out.identity_defect = std::abs(out.local_sum - out.weighted);

  const DenseFn alpha1 = alpha(a, pair.psi1());
  const DenseFn alpha2_raw = alpha(a2, pair.psi2());
  DenseFn half(g);
  for (std::size_t t = 0; t < n; ++t) half[t] = psi2[g.scalar_mul(2, t)];
  const DenseFn alpha2_half = convolve(a, half);
  double s12 = 0.0;
  double s2 = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    const double a1 = alpha1[x];
    const double a2x = alpha2_raw[g.scalar_mul(-2, x)];
    out.half_cutoff_defect = std::max(out.half_cutoff_defect, std::abs(a2x - alpha2_half[x]));
    out.main_term += a1 * a1 * a2x;
    s12 += a1 * a2x;
    s2 += a2x;
  }
  const double density = a.sum() / nn;
  out.cs_middle = s2 > 0.0 ? s12 * s12 / s2 : 0.0;
  out.cube_term = density * density * density * nn;
  out.chain_holds = leq_tol(out.cs_middle, out.main_term) && leq_tol(out.cube_term, out.cs_middle);

  out.lower_bound = out.main_term - 34.0 * pair.eps() * nn;
  out.lower_bound_holds = leq_tol(out.lower_bound, out.weighted);
  out.degenerate = pair.degenerate();
  out.psi1_mass_at_zero = pair.psi1().mass_at_zero();
  out.psi2_mass_at_zero = pair.psi2().mass_at_zero();
  out.asserted = pair_regular && pair.mode().mode == ConstantsMode::faithful && !pair.mode().second_width_override &&
                 !out.degenerate;
  if (out.asserted && !out.lower_bound_holds) {
    throw InternalError("weighted progression count fell below the regular-pair lower bound");
  }
  return out;
}

BhkGroupResult bhk_witness_group(const DenseFn& a, double eps, const BhkOptions& options) {
  const GroupSpec& g = a.group();
  require_odd(g, "progression witness search");
  require_eps(eps);
  if (g.order() < 3) throw DomainError("the group has no nonzero difference");
  const auto table = ap3_table(a);
  BhkGroupResult out;
  out.d = 1;
  for (std::size_t d = 2; d < table.size(); ++d) {
    if (table[d] > table[out.d]) out.d = d;
  }
  out.count = table[out.d];
  const double nn = static_cast<double>(g.order());
  out.alpha = static_cast<double>(a.support().size()) / nn;
  out.bound = (out.alpha * out.alpha * out.alpha - eps) * nn;
  out.bound_ok = leq_tol(out.bound, static_cast<double>(out.count));
  if (options.regularity_path) out.path = run_path(a, eps, options.regularize);
  return out;
}

FrequencySet interval_start_characters(std::uint64_t n) {
  if (n % 2 == 0 || n < 3) throw DomainError("the halving character needs odd N >= 3");
  return FrequencySet(GroupSpec::cyclic(n), std::vector<std::size_t>{1, static_cast<std::size_t>((n + 1) / 2)});
}

BhkIntervalResult bhk_witness_interval(const IntegerSet& a, double eps, const BhkOptions& options) {
  require_eps(eps);
  const std::uint64_t n = a.n_max();
  const double nn = static_cast<double>(n);
  BhkIntervalResult out;
  out.d_limit = static_cast<std::int64_t>(std::floor(eps * nn));
  out.alpha = a.density();
  const double cube = out.alpha * out.alpha * out.alpha;
  out.bound = (cube - eps) * nn;
  out.coarse_bound = (cube - 47.0 * eps) * nn;
  for (std::int64_t d = 1; d <= out.d_limit; ++d) {
    const std::uint64_t c = ap3_count(a, d);
    if (!out.d || c > out.genuine) {
      out.d = d;
      out.genuine = c;
    }
  }
  if (out.d && n > 0) {
    out.modular = ap3_count(a.to_cyclic(n), static_cast<std::size_t>(static_cast<std::uint64_t>(*out.d) % n));
    out.bound_ok = leq_tol(out.bound, static_cast<double>(out.genuine));
  }
  if (options.regularity_path && n % 2 == 1 && n >= 3) {
    RegularizeOptions ro = options.regularize;
    ro.start = interval_start_characters(n);
    out.path = run_path(a.to_cyclic(n), eps, ro);
    double far = 0.0;
    for (std::uint64_t d = 0; d < n; ++d) {
      const double mag = static_cast<double>(std::min(d, n - d));
      if (mag >= eps * nn) far += out.path->nu.nu[d];
    }
    out.path->far_mass = far;
  }
  return out;
}

std::uint64_t schur_triples(const IntegerSet& a) {
  std::uint64_t count = 0;
  for (auto x : a.members()) {
    for (auto y : a.members()) count += a.contains(x + y) ? 1 : 0;
  }
  return count;
}

SumFreeResult sum_free_decompose(const IntegerSet& a, double eps, const RegularizeOptions& options) {
  const std::uint64_t n = a.n_max();
  if (n == 0) throw DomainError("N must be positive");
  const std::uint64_t m = 2 * n;
  const DenseFn a1 = a.to_cyclic(m);
  const std::vector<DenseFn> sets{a1, a1, a1.reflect()};

  SumFreeResult out;
  out.certificate = zero_sum_removal(sets, eps, options);
  const auto& reduced = out.certificate.reduced.sets;
  std::vector<std::int64_t> keep;
  std::vector<std::int64_t> drop;
  for (auto x : a.members()) {
    const auto r = static_cast<std::size_t>(x);
    const bool in_b = reduced[0][r] != 0.0 && reduced[1][r] != 0.0 && reduced[2][static_cast<std::size_t>(m) - r] != 0.0;
    (in_b ? keep : drop).push_back(x);
  }
  out.b = IntegerSet(n, std::move(keep));
  out.c = IntegerSet(n, std::move(drop));
  out.schur_before = schur_triples(a);
  out.schur_after = schur_triples(out.b);
  out.sum_free = out.schur_after == 0;
  out.removal_bound = 3.0 * out.certificate.reduced.removal_bound;
  out.removal_within_bound = static_cast<double>(out.c.size()) <= out.removal_bound;
  if (out.certificate.zero_sum_free && !out.sum_free) {
    throw InternalError("zero-sum-free reduced sets left a Schur triple");
  }
  return out;
}

std::uint64_t tower_width(std::uint64_t m) { return m <= 19 ? m : m / 4; }

std::uint64_t tower_sequence(int i) {
  if (i < 0) throw DomainError("tower index must be nonnegative");
  if (i >= 5) throw ResourceError("d_" + std::to_string(i) + " exceeds 64-bit range");
  std::uint64_t d = 0;
  std::uint64_t sum = 0;
  for (int j = 1; j <= i; ++j) {
    d = tower_width(std::uint64_t{1} << sum);
    sum += d;
  }
  return d;
}

std::uint64_t max_hyperplane_count(std::span<const f2::Vec> vectors, int dim, int max_dim) {
  if (dim > max_dim) {
    throw ResourceError("hyperplane check over F2^" + std::to_string(dim) + " exceeds the budget 2^" +
                        std::to_string(max_dim));
  }
  if (dim <= 0) return 0;
  std::vector<std::int64_t> w(std::size_t{1} << dim, 0);
  for (auto v : vectors) {
    if (v >= w.size()) throw DomainError("vector outside F2^" + std::to_string(dim));
    ++w[v];
  }
  walsh_hadamard(std::span<std::int64_t>(w));
  const auto m = static_cast<std::int64_t>(vectors.size());
  std::int64_t worst = 0;
  for (std::size_t u = 1; u < w.size(); ++u) worst = std::max(worst, (m + w[u]) / 2);
  return static_cast<std::uint64_t>(worst);
}

SpanningFamily spanning_family(std::uint64_t m, std::uint64_t seed, int max_dim) {
  if (m == 0) throw DomainError("a spanning family needs M >= 1");
  SpanningFamily out;
  out.m = m;
  const std::uint64_t f = tower_width(m);
  if (f > static_cast<std::uint64_t>(max_dim)) {
    throw ResourceError("F(" + std::to_string(m) + ") = " + std::to_string(f) + " exceeds the verification budget " +
                        std::to_string(max_dim));
  }
  out.dim = static_cast<int>(f);
  out.threshold = (95 * m + 99) / 100;
  if (m <= 19) {
    for (int j = 0; j < out.dim; ++j) out.vectors.push_back(f2::Vec{1} << (out.dim - 1 - j));
    out.attempts = 1;
    out.worst_hyperplane = max_hyperplane_count(out.vectors, out.dim, max_dim);
    return out;
  }
  const f2::Vec mask = (f2::Vec{1} << out.dim) - 1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 rng(seq);
    out.vectors.assign(m, 0);
    for (auto& v : out.vectors) {
      do {
        v = rng() & mask;
      } while (v == 0);
    }
    out.attempts = attempt + 1;
    out.worst_hyperplane = max_hyperplane_count(out.vectors, out.dim, max_dim);
    if (out.worst_hyperplane < out.threshold) return out;
  }
  throw RetryError("no 95%-spanning family of " + std::to_string(m) + " vectors found in 64 draws from seed " +
                   std::to_string(seed) + "; retry with another seed");
}

std::uint64_t TowerSpec::v_index(int i, f2::Vec x) const {
  const int off = offsets.at(static_cast<std::size_t>(i));
  return off == 0 ? 0 : x >> (n - off);
}

TowerFunction build_tower_function(int n, int s, std::uint64_t seed) {
  if (n < 1) throw DomainError("n must be positive");
  if (s < 0) throw DomainError("depth must be nonnegative");
  if (s > 4) throw DomainError("depth " + std::to_string(s) + " needs more than 2^500 dimensions");
  const GroupSpec g = GroupSpec::elementary2(n);
  g.require_enumerable();

  TowerFunction out;
  TowerSpec& spec = out.spec;
  spec.n = n;
  spec.s = s;
  spec.seed = seed;
  spec.offsets.push_back(0);
  for (int i = 0; i <= s; ++i) {
    spec.dims.push_back(tower_sequence(i));
    if (i > 0) spec.offsets.push_back(spec.offsets.back() + static_cast<int>(spec.dims.back()));
  }
  if (spec.offsets.back() > n) {
    throw DomainError("dimensions d_0..d_" + std::to_string(s) + " sum to " + std::to_string(spec.offsets.back()) +
                      " > n = " + std::to_string(n));
  }
  // B_s needs U_{s+1} as well; it is built only when that block fits.
  if (s + 1 <= 4) {
    const auto next = tower_sequence(s + 1);
    if (spec.offsets.back() + static_cast<std::int64_t>(next) <= n) {
      spec.offsets.push_back(spec.offsets.back() + static_cast<int>(next));
    }
  }
  const int built = static_cast<int>(spec.offsets.size()) - 1;
  for (int i = 0; i <= built; ++i) {
    std::vector<f2::Vec> gens;
    for (int b = 0; b < n - spec.offsets[static_cast<std::size_t>(i)]; ++b) gens.push_back(f2::Vec{1} << b);
    spec.h.emplace_back(n, gens);
  }

  out.f = DenseFn(g);
  const std::size_t size = g.order();
  for (int i = 0; i < built; ++i) {
    TowerLevel level;
    level.i = i;
    const int off = spec.offsets[static_cast<std::size_t>(i)];
    const int next_off = spec.offsets[static_cast<std::size_t>(i) + 1];
    level.family = spanning_family(std::uint64_t{1} << off, seed + static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL);
    for (auto w : level.family.vectors) level.xi.push_back(w << (n - next_off));
    level.b = DenseFn(g);
    std::size_t count = 0;
    for (std::size_t x = 0; x < size; ++x) {
      const bool in = f2::dot(x, level.xi[spec.v_index(i, x)]) == 0;
      level.b[x] = in ? 1.0 : 0.0;
      count += in ? 1 : 0;
    }
    if (2 * count != size) throw InternalError("level " + std::to_string(i) + " does not have N/2 elements");
    const double w = 0.5 * std::ldexp(1.0, -2 * i);
    for (std::size_t x = 0; x < size; ++x) out.f[x] += w * level.b[x];
    spec.levels.push_back(std::move(level));
  }
  return out;
}

TowerStepReport verify_tower_step(const TowerSpec& spec, const DenseFn& f, const f2::Subgroup& h, int i, double eps) {
  if (i < 0 || i >= static_cast<int>(spec.levels.size())) throw DomainError("level " + std::to_string(i) + " was not built");
  if (h.ambient_dim() != spec.n) throw DomainError("subgroup lives in the wrong dimension");
  if (!f.group().is_elementary2() || f.group().f2_dim() != spec.n) throw DomainError("function lives on the wrong group");
  const auto ui = static_cast<std::size_t>(i);
  if (!spec.h[ui].contains(h)) throw PreconditionError("H is not contained in H_" + std::to_string(i));

  const TowerLevel& level = spec.levels[ui];
  TowerStepReport out;
  out.level = i;
  out.eps = eps;
  out.v_count = level.xi.size();
  out.bound = std::ldexp(1.0, -2 * i) / 16.0;
  const auto h_elems = h.elements();
  const auto hi_elems = spec.h[ui].elements();
  const double hs = static_cast<double>(h.size());
  const int shift = spec.n - spec.offsets[ui];
  double least = std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < level.xi.size(); ++v) {
    const f2::Vec xi = level.xi[v];
    bool escapes = false;
    for (auto row : h.basis()) escapes = escapes || f2::dot(row, xi) == 1;
    if (!escapes) continue;
    ++out.escaping;
    const f2::Vec base = shift >= 64 ? 0 : static_cast<f2::Vec>(v) << shift;
    for (auto y : hi_elems) {
      const f2::Vec g = base ^ y;
      if (h.reduce(g) != g) continue;
      double coef = 0.0;
      for (auto x : h_elems) coef += f2::dot(x, xi) ? -f[g ^ x] : f[g ^ x];
      least = std::min(least, std::abs(coef) / hs / out.bound);
      ++out.cosets_checked;
    }
  }
  out.escaping_fraction = out.v_count == 0 ? 0.0 : static_cast<double>(out.escaping) / static_cast<double>(out.v_count);
  out.fraction_within_eps = out.escaping_fraction <= eps;
  if (out.escaping > 0) out.min_coefficient_ratio = least;
  out.holds = !out.min_coefficient_ratio || *out.min_coefficient_ratio >= 1.0 - 1e-12;
  return out;
}

f2::Subgroup random_level_subgroup(const TowerSpec& spec, int i, std::mt19937_64& rng) {
  if (i < 0 || i >= static_cast<int>(spec.levels.size())) throw DomainError("level " + std::to_string(i) + " was not built");
  const auto ui = static_cast<std::size_t>(i);
  const int r = spec.n - spec.offsets[ui];
  const f2::Vec mask = r >= 64 ? ~f2::Vec{0} : (f2::Vec{1} << r) - 1;
  for (;;) {
    const int t = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(r));
    std::vector<f2::Vec> gens;
    for (int j = 0; j < t; ++j) gens.push_back(rng() & mask);
    f2::Subgroup h(spec.n, gens);
    if (!spec.h[ui + 1].contains(h)) return h;
  }
}

}  // namespace arithreg
