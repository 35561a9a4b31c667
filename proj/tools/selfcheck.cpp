#include "selfcheck.hpp"

#include <cmath>
#include <algorithm>
#include <complex>
#include <functional>
#include <random>

#include "arithreg/applications.hpp"
#include "arithreg/bohr.hpp"
#include "arithreg/errors.hpp"
#include "arithreg/reg_f2.hpp"
#include "arithreg/reg_general.hpp"

namespace arithreg::cli {

namespace {

constexpr std::uint64_t kSeed = 20240601;

class Suite {
 public:
  explicit Suite(std::string name) { r_.name = std::move(name); }
  void check(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok && r_.detail.empty()) r_.detail = what;
    failed_ = failed_ || !ok;
  }
  SuiteResult finish() {
    r_.passed = !failed_;
    return r_;
  }

 private:
  SuiteResult r_;
  bool failed_ = false;
};

DenseFn random_fn(const GroupSpec& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseFn f(g);
  for (auto& v : f.values()) v = u(rng);
  return f;
}

DenseFn random_set(const GroupSpec& g, std::mt19937_64& rng, double density) {
  std::bernoulli_distribution coin(density);
  DenseFn f(g);
  for (auto& v : f.values()) v = coin(rng) ? 1.0 : 0.0;
  return f;
}

std::vector<std::size_t> random_chars(const GroupSpec& g, std::mt19937_64& rng, int d) {
  std::uniform_int_distribution<std::size_t> pick(1, g.order() - 1);
  std::vector<std::size_t> out;
  while (static_cast<int>(out.size()) < d) {
    const std::size_t c = pick(rng);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

SuiteResult dft_suite(const Mutations& m, std::mt19937_64& rng) {
  Suite s("dft-parseval");
  const std::function<Spectrum(const DenseFn&)> transform = [&m](const DenseFn& f) {
    Spectrum sp = dft(f);
    if (m.dft_sign) {
      for (auto& v : sp.values()) v = std::conj(v);
    }
    return sp;
  };
  for (const char* spec : {"16", "27", "12", "101", "5x5x3", "2^6"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    for (int rep = 0; rep < 5; ++rep) {
      const DenseFn f = random_fn(g, rng);
      const Spectrum fast = transform(f);
      double worst = 0.0;
      for (std::size_t gamma = 0; gamma < g.order(); ++gamma) {
        std::complex<double> naive = 0.0;
        for (std::size_t x = 0; x < g.order(); ++x) naive += f[x] * g.char_eval(gamma, x);
        worst = std::max(worst, std::abs(naive - fast[gamma]));
      }
      s.check(worst <= 1e-9 * std::max(1.0, f.l1()), std::string("transform differs from the naive sum on ") + spec);
      s.check(fast.parseval_defect(f) <= 1e-9, std::string("Parseval defect on ") + spec);
    }
  }
  return s.finish();
}

SuiteResult zero_sum_suite(std::mt19937_64& rng) {
  Suite s("zero-sum");
  for (int k = 3; k <= 5; ++k) {
    for (std::size_t n : {7, 12, 20}) {
      const GroupSpec g = GroupSpec::cyclic(n);
      std::vector<DenseFn> fs;
      for (int i = 0; i < k; ++i) fs.push_back(random_set(g, rng, 0.5));
      s.check(std::abs(zero_sum_count(fs) - brute_force_zero_sum(fs)) <= 1e-6, "spectral and literal counts differ");
    }
  }
  return s.finish();
}

SuiteResult bohr_suite(std::mt19937_64& rng) {
  Suite s("bohr-lemmas");
  const GroupSpec g = GroupSpec::cyclic(101);
  std::uniform_real_distribution<double> delta(0.05, 0.5);
  auto record = [&s](const InequalityReport& r) {
    s.check(!r.hypothesis_ok || r.holds, r.part + " violated");
  };
  for (int rep = 0; rep < 6; ++rep) {
    const FrequencySet gamma(g, random_chars(g, rng, 1 + rep % 2));
    const double dl = delta(rng);
    const BohrSizeReport size = check_bohr_size(gamma, dl);
    record(size.part_i);
    record(size.part_ii);
    for (const char* part : {"i", "ii", "iii", "iv"}) record(check_beta(part, gamma, dl, 3, 0.2));
    const BohrCutoff c(gamma, dl);
    record(check_tail_bound(c, 0.2));
    record(check_sqrt_lipschitz(c, 5));
    record(check_bohr_domination(gamma, dl));
    CutoffCheckInput in;
    in.cutoff = &c;
    in.character = gamma.chars().front();
    in.y = 2;
    for (const char* part : {"i", "ii", "iii", "iv", "iv-hat", "v"}) record(check_cutoff(part, in));
  }
  return s.finish();
}

SuiteResult f2_regularity_suite(std::mt19937_64& rng) {
  Suite s("f2-regularity");
  const GroupSpec g = GroupSpec::elementary2(8);
  for (int rep = 0; rep < 5; ++rep) {
    const double eps = 0.2;
    const DenseFn a = random_set(g, rng, 0.5);
    try {
      const F2RegReport r = regularize_f2(a, eps);
      s.check(r.iterations <= static_cast<int>(std::floor(1.0 / (eps * eps * eps))), "too many refinements");
      s.check(is_regular_subgroup_f2(a, r.subgroup, eps).regular, "final subgroup fails the regularity re-check");
      for (std::size_t i = 1; i < r.index_trace.size(); ++i) {
        s.check(r.index_trace[i] >= r.index_trace[i - 1] + eps * eps * eps - 1e-12, "refinement gained too little");
      }
    } catch (const InternalError& e) {
      s.check(false, e.what());
    }
  }
  return s.finish();
}

SuiteResult f2_removal_suite(std::mt19937_64& rng) {
  Suite s("f2-removal");
  const GroupSpec g = GroupSpec::elementary2(6);
  for (int rep = 0; rep < 4; ++rep) {
    const DenseFn a = random_set(g, rng, 0.3);
    try {
      const TriangleRemovalF2 r = remove_triangles_f2(a, 0.1);
      s.check(!r.coupling_holds || r.triangle_free, "reduced set kept a triangle");
      s.check(r.removal_within_bound, "deletions exceed 3 eps^(1/3) N");
    } catch (const InternalError& e) {
      s.check(false, e.what());
    }
  }
  return s.finish();
}

SuiteResult nesting_suite(const Mutations& m, std::mt19937_64& rng) {
  Suite s("pair-nesting");
  const GroupSpec g = GroupSpec::cyclic(101);
  ModeConfig mode;
  if (m.second_width) mode.second_width_override = [](double eta, int, int, double) { return eta / 8.0; };
  for (int d = 1; d <= 2; ++d) {
    for (double eta : {1.0, 0.5}) {
      const RegPair p(FrequencySet(g, random_chars(g, rng, d)), eta, 3, 0.1, mode);
      s.check(check_pair_nesting(p).holds, "cutoffs are not nested within 2^-12 k^-2 eps^3");
    }
  }
  return s.finish();
}

SuiteResult covering_suite(std::mt19937_64& rng) {
  Suite s("covering");
  const GroupSpec g = GroupSpec::cyclic(101);
  for (int rep = 0; rep < 10; ++rep) {
    const DenseFn u = random_set(g, rng, 0.3);
    const auto members = u.support();
    if (members.empty()) continue;
    const FrequencySet r(g, random_chars(g, rng, 1 + rep % 2));
    s.check(cover_by_translates(members, 0.2, r).ok(), "covering postconditions failed");
  }
  return s.finish();
}

SuiteResult weighted_suite(std::mt19937_64& rng) {
  Suite s("weighted-count");
  const GroupSpec g = GroupSpec::cyclic(31);
  ModeConfig mode;
  mode.mode = ConstantsMode::scaled;
  mode.scale = 2.0;
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<DenseFn> sets;
    for (int i = 0; i < 3; ++i) sets.push_back(random_set(g, rng, 0.4));
    const RegPair p(FrequencySet(g, random_chars(g, rng, 1)), 0.5, 3, 0.2, mode);
    const std::vector<std::size_t> xs{3, 7, g.neg(10)};
    const WeightedCount w = weighted_T(sets, p, xs);
    s.check(w.brute_force_done && std::abs(w.value - w.brute_force) <= 1e-6, "weighted count differs from the literal sum");
  }
  return s.finish();
}

SuiteResult progression_suite(std::mt19937_64& rng) {
  Suite s("progressions");
  const GroupSpec g = GroupSpec::cyclic(101);
  ModeConfig mode;
  mode.mode = ConstantsMode::scaled;
  mode.scale = 2.0;
  for (int rep = 0; rep < 3; ++rep) {
    const DenseFn a = random_set(g, rng, 0.3);
    std::uint64_t total = 0;
    for (auto t : ap3_table(a)) total += t;
    s.check(std::abs(ap3_total_spectral(a) - static_cast<double>(total)) < 1e-6, "progression total differs");
    const RegPair p(FrequencySet(g, random_chars(g, rng, 1)), 0.5, 3, 0.05, mode);
    const NuReport nu = nu_weight(p);
    s.check(nu.identity_defect <= 1e-8, "nu mass differs from T(psi1^1/2, psi2, psi1^1/2)");
    const ProgressionWeightReport w = progression_weight(a, p, false);
    s.check(w.chain_holds, "Cauchy-Schwarz chain failed");
    s.check(w.identity_defect <= 1e-8, "weighted count differs from the local sum");
  }
  return s.finish();
}

SuiteResult tower_suite(std::mt19937_64& rng) {
  Suite s("tower");
  const std::vector<std::uint64_t> expected{0, 1, 2, 8, 512};
  for (int i = 0; i < 5; ++i) s.check(tower_sequence(i) == expected[static_cast<std::size_t>(i)], "tower sequence");
  const TowerFunction t = build_tower_function(11, 3, kSeed);
  for (const auto& level : t.spec.levels) {
    s.check(level.b.sum() == 1024.0, "level size");
    s.check(verify_tower_step(t.spec, t.f, t.spec.h[static_cast<std::size_t>(level.i)], level.i, 0.05).holds,
            "canonical level check");
    for (int rep = 0; rep < 5; ++rep) {
      const f2::Subgroup h = random_level_subgroup(t.spec, level.i, rng);
      s.check(verify_tower_step(t.spec, t.f, h, level.i, 0.05).holds, "sampled level check");
    }
  }
  return s.finish();
}

}  // namespace

std::vector<SuiteResult> run_selfcheck(const Mutations& mutations) {
  std::mt19937_64 rng(kSeed);
  std::vector<SuiteResult> out;
  auto guarded = [&out](const std::string& name, const std::function<SuiteResult()>& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back(SuiteResult{name, false, 0, e.what()});
    }
  };
  guarded("dft-parseval", [&] { return dft_suite(mutations, rng); });
  guarded("zero-sum", [&] { return zero_sum_suite(rng); });
  guarded("bohr-lemmas", [&] { return bohr_suite(rng); });
  guarded("f2-regularity", [&] { return f2_regularity_suite(rng); });
  guarded("f2-removal", [&] { return f2_removal_suite(rng); });
  guarded("pair-nesting", [&] { return nesting_suite(mutations, rng); });
  guarded("covering", [&] { return covering_suite(rng); });
  guarded("weighted-count", [&] { return weighted_suite(rng); });
  guarded("progressions", [&] { return progression_suite(rng); });
  guarded("tower", [&] { return tower_suite(rng); });
  return out;
}

}  // namespace arithreg::cli
