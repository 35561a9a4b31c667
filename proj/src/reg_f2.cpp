#include "arithreg/reg_f2.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "arithreg/errors.hpp"

namespace arithreg {

namespace {

constexpr double kGainTol = 1e-12;

void require_f2(const DenseFn& a, const f2::Subgroup& h) {
  if (!a.group().is_elementary2()) throw DomainError("expected a function on (Z/2)^n, got " + a.group().to_string());
  if (a.group().f2_dim() != h.ambient_dim()) throw DomainError("subgroup and function live in different dimensions");
}

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("eps must lie in (0, 1/2)");
}

std::vector<double> coset_spectrum(const DenseFn& a, const std::vector<f2::Vec>& elems, f2::Vec g) {
  std::vector<double> v(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) v[i] = a[g ^ elems[i]];
  walsh_hadamard(std::span<double>(v));
  return v;
}

}  // namespace

std::vector<double> local_fourier(const DenseFn& a, const f2::Subgroup& h, f2::Vec g) {
  require_f2(a, h);
  return coset_spectrum(a, h.elements(), g);
}

LocalPeak local_peak(const std::vector<double>& coefs) {
  LocalPeak p;
  for (std::size_t eta = 1; eta < coefs.size(); ++eta) {
    const double m = std::abs(coefs[eta]);
    if (m > p.magnitude) {
      p.magnitude = m;
      p.character = eta;
    }
  }
  return p;
}

bool is_regular_value_f2(const DenseFn& a, const f2::Subgroup& h, f2::Vec g, double eps) {
  return local_peak(local_fourier(a, h, g)).magnitude <= eps * static_cast<double>(h.size());
}

SubgroupRegularity is_regular_subgroup_f2(const DenseFn& a, const f2::Subgroup& h, double eps) {
  require_f2(a, h);
  const auto elems = h.elements();
  const double limit = eps * static_cast<double>(h.size());
  SubgroupRegularity out;
  for (f2::Vec c : h.coset_reps()) {
    if (local_peak(coset_spectrum(a, elems, c)).magnitude > limit) {
      out.irregular_count += h.size();
      out.irregular_cosets.push_back(c);
    }
  }
  out.regular = static_cast<double>(out.irregular_count) < eps * static_cast<double>(a.size());
  return out;
}

double index_f2(const DenseFn& a, const f2::Subgroup& h) {
  require_f2(a, h);
  const auto elems = h.elements();
  double s = 0.0;
  for (f2::Vec c : h.coset_reps()) {
    double m = 0.0;
    for (f2::Vec e : elems) m += a[c ^ e];
    s += m * m;
  }
  return s / (static_cast<double>(a.size()) * static_cast<double>(h.size()));
}

RefineStepF2 refine_step_f2(const DenseFn& a, const f2::Subgroup& h, double eps) {
  require_f2(a, h);
  const auto elems = h.elements();
  const double limit = eps * static_cast<double>(h.size());
  struct Candidate {
    double magnitude;
    std::uint64_t character;
    f2::Vec coset;
  };
  std::vector<Candidate> bad;
  const auto reps = h.coset_reps();
  for (f2::Vec c : reps) {
    const LocalPeak p = local_peak(coset_spectrum(a, elems, c));
    if (p.magnitude > limit) bad.push_back({p.magnitude, p.character, c});
  }
  RefineStepF2 out;
  out.irregular_count = bad.size() * h.size();
  if (static_cast<double>(out.irregular_count) < eps * static_cast<double>(a.size())) {
    throw PreconditionError("refine step called on a subgroup that is already eps-regular");
  }
  std::stable_sort(bad.begin(), bad.end(), [](const Candidate& x, const Candidate& y) {
    if (x.magnitude != y.magnitude) return x.magnitude > y.magnitude;
    return x.character < y.character;
  });
  const std::size_t cap = std::max<std::size_t>(1, reps.size() / 2);
  if (bad.size() > cap) bad.resize(cap);
  std::vector<std::uint64_t> local;
  for (const auto& b : bad) {
    if (std::find(local.begin(), local.end(), b.character) == local.end()) local.push_back(b.character);
  }
  for (auto eta : local) out.witnesses.push_back(h.lift_character(eta));
  out.next = h.annihilator_within(local);
  out.index_before = index_f2(a, h);
  out.index_after = index_f2(a, out.next);
  if (out.index_after < out.index_before + eps * eps * eps - kGainTol) {
    throw InternalError("refinement gained " + std::to_string(out.index_after - out.index_before) +
                        " index, less than eps^3");
  }
  return out;
}

F2RegReport regularize_f2(const DenseFn& a, double eps) {
  require_eps(eps);
  const int n = a.group().f2_dim();
  F2RegReport rep;
  rep.epsilon = eps;
  rep.subgroup = f2::Subgroup::full(n);
  const int max_steps = static_cast<int>(std::floor(1.0 / (eps * eps * eps)));
  for (;;) {
    const SubgroupRegularity check = is_regular_subgroup_f2(a, rep.subgroup, eps);
    rep.index_trace.push_back(index_f2(a, rep.subgroup));
    rep.dims.push_back(rep.subgroup.dim());
    rep.irregular_counts.push_back(check.irregular_count);
    rep.irregular_values = check.irregular_count;
    if (check.regular) break;
    if (rep.iterations >= max_steps || rep.subgroup.dim() == 0) {
      throw InternalError("regularity not reached after " + std::to_string(rep.iterations) + " refinements");
    }
    RefineStepF2 step = refine_step_f2(a, rep.subgroup, eps);
    rep.witnesses.push_back(std::move(step.witnesses));
    rep.subgroup = std::move(step.next);
    ++rep.iterations;
  }
  return rep;
}

double local_triangle_count(const DenseFn& a, const f2::Subgroup& h, f2::Vec g1, f2::Vec g2, f2::Vec g3) {
  require_f2(a, h);
  const auto elems = h.elements();
  const auto s1 = coset_spectrum(a, elems, g1);
  const auto s2 = coset_spectrum(a, elems, g2);
  const auto s3 = coset_spectrum(a, elems, g3);
  double total = 0.0;
  for (std::size_t eta = 0; eta < s1.size(); ++eta) total += s1[eta] * s2[eta] * s3[eta];
  return total / static_cast<double>(h.size());
}

ReducedSetF2 reduced_set_f2(const DenseFn& a, const f2::Subgroup& h, double eps) {
  require_f2(a, h);
  require_eps(eps);
  if (!is_regular_subgroup_f2(a, h, eps).regular) throw PreconditionError("subgroup is not eps-regular for the set");
  const auto elems = h.elements();
  const double hs = static_cast<double>(h.size());
  const double sparse = std::cbrt(2.0 * eps) * hs;
  ReducedSetF2 out;
  out.set = a;
  out.removal_bound = 3.0 * std::cbrt(eps) * static_cast<double>(a.size());
  for (f2::Vec c : h.coset_reps()) {
    const auto s = coset_spectrum(a, elems, c);
    const bool irregular = local_peak(s).magnitude > eps * hs;
    const bool thin = s[0] <= sparse;
    if (!irregular && !thin) continue;
    std::size_t removed = 0;
    for (f2::Vec e : elems) {
      if (out.set[c ^ e] != 0.0) {
        out.set[c ^ e] = 0.0;
        ++removed;
      }
    }
    out.removed += removed;
    (irregular ? out.removed_irregular : out.removed_sparse) += removed;
  }
  return out;
}

std::uint64_t count_triangles_f2(const DenseFn& a) {
  if (!a.group().is_elementary2()) throw DomainError("expected a set in (Z/2)^n");
  const auto members = a.support();
  std::uint64_t count = 0;
  for (auto x : members) {
    for (auto y : members) count += a[x ^ y] != 0.0 ? 1 : 0;
  }
  return count;
}

TriangleRemovalF2 remove_triangles_f2(const DenseFn& a, double eps) {
  if (!a.is_indicator()) throw DomainError("triangle removal needs a 0/1 set");
  TriangleRemovalF2 out;
  out.regularity = regularize_f2(a, eps);
  out.reduced = reduced_set_f2(a, out.regularity.subgroup, eps);
  out.triangles_before = static_cast<double>(count_triangles_f2(a));
  const std::vector<DenseFn> triple(3, out.reduced.set);
  out.spectral_triangles_after = zero_sum_count(triple);
  out.exact_triangles_after = count_triangles_f2(out.reduced.set);
  out.triangle_free = out.exact_triangles_after == 0;
  if (std::abs(out.spectral_triangles_after - static_cast<double>(out.exact_triangles_after)) > 1e-6) {
    throw InternalError("spectral and exact triangle counts disagree");
  }
  const double hs = static_cast<double>(out.regularity.subgroup.size());
  out.coupling_threshold = eps * hs * hs;
  out.coupling_holds = out.triangles_before < out.coupling_threshold;
  out.removal_within_bound = static_cast<double>(out.reduced.removed) <= out.reduced.removal_bound;
  if (out.coupling_holds && !out.triangle_free) {
    throw InternalError("reduced set kept a triangle although A has fewer than eps |H|^2 triangles");
  }
  return out;
}

}  // namespace arithreg
