#pragma once

// Shared helpers for the test binaries: seeded generators and literal-sum oracles.

#include <cmath>
#include <complex>
#include <algorithm>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "arithreg/group.hpp"
#include "arithreg/harmonic.hpp"

namespace testsupport {

using arithreg::DenseFn;
using arithreg::GroupSpec;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline DenseFn random_real(const GroupSpec& g, std::mt19937_64& gen, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  DenseFn f(g);
  for (auto& v : f.values()) v = u(gen);
  return f;
}

inline DenseFn random_indicator(const GroupSpec& g, std::mt19937_64& gen, double density) {
  std::bernoulli_distribution b(density);
  DenseFn f(g);
  for (auto& v : f.values()) v = b(gen) ? 1.0 : 0.0;
  return f;
}

/// Exactly round(density * N) members chosen uniformly.
inline DenseFn random_set_exact(const GroupSpec& g, std::mt19937_64& gen, double density) {
  std::vector<std::size_t> idx(g.order());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), gen);
  const auto m = static_cast<std::size_t>(std::llround(density * static_cast<double>(g.order())));
  DenseFn f(g);
  for (std::size_t i = 0; i < m; ++i) f[idx[i]] = 1.0;
  return f;
}

/// Coordinates computed by repeated division, independent of GroupSpec::element.
inline std::vector<std::uint64_t> coords_of(const GroupSpec& g, std::size_t index) {
  std::vector<std::uint64_t> c(g.rank());
  for (std::size_t j = g.rank(); j-- > 0;) {
    c[j] = index % g.factors()[j];
    index /= g.factors()[j];
  }
  return c;
}

inline std::size_t index_of(const GroupSpec& g, const std::vector<std::uint64_t>& c) {
  std::size_t idx = 0;
  for (std::size_t j = 0; j < g.rank(); ++j) idx = idx * g.factors()[j] + c[j];
  return idx;
}

inline std::size_t add_oracle(const GroupSpec& g, std::size_t a, std::size_t b) {
  auto ca = coords_of(g, a);
  auto cb = coords_of(g, b);
  for (std::size_t j = 0; j < ca.size(); ++j) ca[j] = (ca[j] + cb[j]) % g.factors()[j];
  return index_of(g, ca);
}

inline std::size_t neg_oracle(const GroupSpec& g, std::size_t a) {
  auto ca = coords_of(g, a);
  for (std::size_t j = 0; j < ca.size(); ++j) ca[j] = (g.factors()[j] - ca[j]) % g.factors()[j];
  return index_of(g, ca);
}

/// exp(2 pi i sum c_j x_j / m_j) as a product of per-factor exponentials.
inline std::complex<double> char_oracle(const GroupSpec& g, std::size_t gamma, std::size_t x) {
  const auto c = coords_of(g, gamma);
  const auto v = coords_of(g, x);
  std::complex<double> z = 1.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const std::uint64_t m = g.factors()[j];
    const double t = static_cast<double>((c[j] * v[j]) % m) / static_cast<double>(m);
    z *= std::polar(1.0, 2.0 * std::numbers::pi * t);
  }
  return z;
}

/// Naive O(N^2) forward transform with a per-factor phase table.
inline std::vector<std::complex<double>> naive_dft(const DenseFn& f) {
  const GroupSpec& g = f.group();
  const std::size_t n = g.order();
  std::vector<std::vector<std::uint64_t>> coords(n);
  for (std::size_t i = 0; i < n; ++i) coords[i] = coords_of(g, i);
  std::vector<std::vector<std::complex<double>>> tables;
  for (auto m : g.factors()) {
    std::vector<std::complex<double>> t(m);
    for (std::uint64_t q = 0; q < m; ++q) t[q] = std::polar(1.0, 2.0 * std::numbers::pi * double(q) / double(m));
    tables.push_back(std::move(t));
  }
  std::vector<std::complex<double>> out(n);
  for (std::size_t gamma = 0; gamma < n; ++gamma) {
    std::complex<double> s = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      if (f[x] == 0.0) continue;
      std::complex<double> z = 1.0;
      for (std::size_t j = 0; j < g.rank(); ++j) {
        const auto m = g.factors()[j];
        z *= tables[j][(coords[gamma][j] * coords[x][j]) % m];
      }
      s += f[x] * z;
    }
    out[gamma] = s;
  }
  return out;
}

/// sum_y f(y) g(x - y), literally.
inline DenseFn direct_convolve(const DenseFn& f, const DenseFn& h) {
  const GroupSpec& g = f.group();
  DenseFn out(g);
  for (std::size_t x = 0; x < g.order(); ++x) {
    double s = 0.0;
    for (std::size_t y = 0; y < g.order(); ++y) s += f[y] * h[add_oracle(g, x, neg_oracle(g, y))];
    out[x] = s;
  }
  return out;
}

/// ||x||_Gamma from complex arguments, arg in (-pi, pi].
inline double arg_norm_oracle(const GroupSpec& g, const std::vector<std::size_t>& gammas, std::size_t x) {
  double best = 0.0;
  for (auto gamma : gammas) {
    const double a = std::abs(std::arg(char_oracle(g, gamma, x))) / (2.0 * std::numbers::pi);
    best = std::max(best, a);
  }
  return best;
}

// Defining integral of the smoothed neighbourhood: locate the jump of t -> B_t(x)
// by bisection on membership, then Simpson with 10^4 panels on [t*, t* + 50 delta].
inline double smoothed_by_quadrature(const GroupSpec& g, const std::vector<std::size_t>& gammas, std::size_t x,
                                     double delta) {
  auto member = [&](double t) { return arg_norm_oracle(g, gammas, x) <= t; };
  double lo = 0.0, hi = 0.5;
  if (member(0.0)) {
    hi = 0.0;
  } else {
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (member(mid) ? hi : lo) = mid;
    }
  }
  const double a = hi;
  const double b = a + 50.0 * delta;
  const int n = 10000;
  const double h = (b - a) / n;
  auto w = [&](double t) { return std::exp(-t / delta) / delta; };
  double s = w(a) + w(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * w(a + i * h);
  return s * h / 3.0;
}

inline std::vector<std::size_t> random_chars(const GroupSpec& g, std::mt19937_64& gen, int d) {
  std::uniform_int_distribution<std::size_t> u(1, g.order() - 1);
  std::vector<std::size_t> out;
  while (static_cast<int>(out.size()) < d) {
    const std::size_t c = u(gen);
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

}  // namespace testsupport
