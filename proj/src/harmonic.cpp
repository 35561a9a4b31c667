#include "arithreg/harmonic.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>

#include "arithreg/errors.hpp"

namespace arithreg {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place multidimensional transform; sign +1 computes sum_x f(x) exp(+2 pi i <gamma,x>).
void transform(const GroupSpec& group, std::vector<std::complex<double>>& data, int sign) {
  group.require_enumerable();
  if (group.is_elementary2()) {
    walsh_hadamard(std::span<std::complex<double>>(data));
    return;
  }
  std::vector<int> dims;
  for (auto m : group.factors()) dims.push_back(static_cast<int>(m));
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf,
                         sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  if (!plan) throw InternalError("FFTW could not plan a transform for " + group.to_string());
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

DenseFn::DenseFn(GroupSpec group, double fill) : group_(std::move(group)) {
  group_.require_enumerable();
  values_.assign(group_.order(), fill);
}

DenseFn::DenseFn(GroupSpec group, std::vector<double> values) : group_(std::move(group)), values_(std::move(values)) {
  if (values_.size() != group_.order()) throw DomainError("function length does not match group order");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("function values must be finite");
  }
}

DenseFn DenseFn::delta(const GroupSpec& group, std::size_t at) {
  DenseFn f(group);
  f.values_.at(at) = 1.0;
  return f;
}

DenseFn DenseFn::indicator(const GroupSpec& group, std::span<const std::size_t> members) {
  DenseFn f(group);
  for (auto m : members) f.values_.at(m) = 1.0;
  return f;
}

double DenseFn::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

double DenseFn::l1() const {
  double s = 0.0;
  for (double v : values_) s += std::abs(v);
  return s;
}

double DenseFn::l2_squared() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double DenseFn::sup() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

std::vector<std::size_t> DenseFn::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] != 0.0) out.push_back(i);
  }
  return out;
}

DenseFn DenseFn::translate(std::size_t shift) const {
  DenseFn out(group_);
  for (std::size_t x = 0; x < values_.size(); ++x) out.values_[x] = values_[group_.add(x, shift)];
  return out;
}

DenseFn DenseFn::reflect() const {
  DenseFn out(group_);
  for (std::size_t x = 0; x < values_.size(); ++x) out.values_[x] = values_[group_.neg(x)];
  return out;
}

bool DenseFn::is_indicator() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

double Spectrum::energy() const {
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return s;
}

double Spectrum::parseval_defect(const DenseFn& f) const {
  const double rhs = static_cast<double>(group_.order()) * f.l2_squared();
  return std::abs(energy() - rhs) / std::max(rhs, 1e-300);
}

void require_same_group(const DenseFn& a, const DenseFn& b) {
  if (!(a.group() == b.group())) {
    throw DomainError("functions live on different groups (" + a.group().to_string() + " vs " +
                      b.group().to_string() + ")");
  }
}

Spectrum dft(const DenseFn& f) {
  std::vector<std::complex<double>> data(f.values().begin(), f.values().end());
  transform(f.group(), data, +1);
  return Spectrum(f.group(), std::move(data));
}

Spectrum dft_complex(const GroupSpec& group, std::span<const std::complex<double>> values) {
  if (values.size() != group.order()) throw DomainError("input length does not match group order");
  std::vector<std::complex<double>> data(values.begin(), values.end());
  transform(group, data, +1);
  return Spectrum(group, std::move(data));
}

InverseResult idft(const Spectrum& spectrum) {
  std::vector<std::complex<double>> data = spectrum.values();
  transform(spectrum.group(), data, -1);
  const double inv = 1.0 / static_cast<double>(spectrum.group().order());
  InverseResult out{DenseFn(spectrum.group()), 0.0};
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.fn[i] = data[i].real() * inv;
    out.max_imag = std::max(out.max_imag, std::abs(data[i].imag() * inv));
  }
  return out;
}

DenseFn convolve(const DenseFn& f, const DenseFn& g) {
  require_same_group(f, g);
  Spectrum a = dft(f);
  const Spectrum b = dft(g);
  for (std::size_t i = 0; i < a.size(); ++i) a.values()[i] *= b[i];
  return idft(a).fn;
}

DenseFn convolve_direct(const DenseFn& f, const DenseFn& g) {
  require_same_group(f, g);
  const GroupSpec& grp = f.group();
  const std::size_t n = grp.order();
  DenseFn out(grp);
  if (grp.is_cyclic()) {
    for (std::size_t y = 0; y < n; ++y) {
      const double fy = f[y];
      if (fy == 0.0) continue;
      for (std::size_t z = 0; z < n; ++z) {
        std::size_t x = y + z;
        if (x >= n) x -= n;
        out[x] += fy * g[z];
      }
    }
    return out;
  }
  for (std::size_t y = 0; y < n; ++y) {
    const double fy = f[y];
    if (fy == 0.0) continue;
    for (std::size_t z = 0; z < n; ++z) out[grp.add(y, z)] += fy * g[z];
  }
  return out;
}

DenseFn convolve_auto(const DenseFn& f, const DenseFn& g) {
  require_same_group(f, g);
  const std::size_t nf = f.support().size();
  const std::size_t ng = g.support().size();
  const std::size_t n = f.group().order();
  constexpr std::size_t kDirectWork = std::size_t{1} << 25;
  if (std::min(nf, ng) * n <= kDirectWork) return nf <= ng ? convolve_direct(f, g) : convolve_direct(g, f);
  return convolve(f, g);
}

double zero_sum_count(std::span<const DenseFn> fs) {
  if (fs.size() < 2) throw DomainError("zero-sum count needs k >= 2 functions");
  for (const auto& f : fs) require_same_group(fs[0], f);
  std::vector<std::complex<double>> prod(fs[0].size(), {1.0, 0.0});
  for (const auto& f : fs) {
    const Spectrum s = dft(f);
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= s[i];
  }
  std::complex<double> total = 0.0;
  for (const auto& v : prod) total += v;
  return total.real() / static_cast<double>(fs[0].group().order());
}

std::uint64_t default_brute_force_budget() { return std::uint64_t{1} << 36; }

double brute_force_zero_sum(std::span<const DenseFn> fs, std::uint64_t budget) {
  if (fs.size() < 2) throw DomainError("zero-sum count needs k >= 2 functions");
  for (const auto& f : fs) require_same_group(fs[0], f);
  const GroupSpec& grp = fs[0].group();
  const std::size_t k = fs.size();
  long double work = 1.0L;
  for (std::size_t i = 0; i + 1 < k; ++i) work *= static_cast<long double>(grp.order());
  if (work > static_cast<long double>(budget)) {
    throw ResourceError("brute-force zero-sum needs N^(k-1) = " + std::to_string(static_cast<double>(work)) +
                        " steps, above the budget " + std::to_string(budget));
  }
  std::vector<std::vector<std::size_t>> supports;
  for (std::size_t i = 0; i + 1 < k; ++i) supports.push_back(fs[i].support());
  const DenseFn& last = fs[k - 1];
  double total = 0.0;
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t level, std::size_t partial,
                                                                   double weight) {
    if (level + 1 == k) {
      total += weight * last[grp.neg(partial)];
      return;
    }
    for (std::size_t x : supports[level]) walk(level + 1, grp.add(partial, x), weight * fs[level][x]);
  };
  walk(0, 0, 1.0);
  return total;
}

}  // namespace arithreg
