#include <doctest.h>

#include <set>

#include "arithreg/errors.hpp"
#include "arithreg/f2.hpp"
#include "support.hpp"

using namespace arithreg;
using namespace arithreg::f2;

namespace {

// Membership by closure: every element that is a xor of generators.
std::set<Vec> span_of(const std::vector<Vec>& gens) {
  std::set<Vec> s{0};
  for (Vec g : gens) {
    std::set<Vec> next = s;
    for (Vec v : s) next.insert(v ^ g);
    s = std::move(next);
  }
  return s;
}

Subgroup random_subgroup(int n, int gens, std::mt19937_64& gen) {
  std::uniform_int_distribution<Vec> u(0, (Vec{1} << n) - 1);
  std::vector<Vec> g;
  for (int i = 0; i < gens; ++i) g.push_back(u(gen));
  return Subgroup(n, g);
}

}  // namespace

TEST_CASE("rank and echelon basis") {
  const std::vector<Vec> rows{0b110, 0b011, 0b101};
  CHECK(rank(rows) == 2);
  const Subgroup h(3, rows);
  CHECK(h.dim() == 2);
  CHECK(h.size() == 4);
  for (std::size_t i = 0; i < h.basis().size(); ++i) {
    for (std::size_t j = 0; j < h.basis().size(); ++j) {
      const bool bit = (h.basis()[j] >> h.pivots()[i]) & 1;
      CHECK(bit == (i == j));
    }
  }
}

TEST_CASE("annihilator examples") {
  CHECK(annihilator(std::vector<Vec>{}, 3).dim() == 3);
  CHECK(annihilator(std::vector<Vec>{0b100}, 3).dim() == 2);
  const Subgroup h = annihilator(std::vector<Vec>{0b110, 0b011}, 3);
  CHECK(h.dim() == 1);
  std::set<Vec> members;
  for (Vec x = 0; x < 8; ++x) {
    if (dot(x, 0b110) == 0 && dot(x, 0b011) == 0) members.insert(x);
  }
  CHECK(members == std::set<Vec>{0b000, 0b111});
  CHECK(h.contains(0b111));
  CHECK_FALSE(h.contains(0b110));
}

TEST_CASE("annihilator sizes and double annihilator") {
  auto gen = testsupport::rng(3);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(gen() % 9);
    const int k = static_cast<int>(gen() % (n + 2));
    std::uniform_int_distribution<Vec> u(0, (Vec{1} << n) - 1);
    std::vector<Vec> chars;
    for (int i = 0; i < k; ++i) chars.push_back(u(gen));
    const Subgroup h = annihilator(chars, n);
    CHECK(h.size() * span_of(chars).size() == (std::size_t{1} << n));
    CHECK(h.dim() == n - rank(chars));
    for (Vec x : h.elements()) {
      for (Vec c : chars) CHECK(dot(x, c) == 0);
    }
    CHECK(annihilator(annihilator(h)) == h);
  }
}

TEST_CASE("coset representatives") {
  CHECK(Subgroup::full(3).coset_reps() == std::vector<Vec>{0});
  CHECK(Subgroup::trivial(2).coset_reps() == std::vector<Vec>{0, 1, 2, 3});
  CHECK(Subgroup(2, std::vector<Vec>{0b11}).coset_reps() == std::vector<Vec>{0b00, 0b01});

  auto gen = testsupport::rng(9);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(gen() % 7);
    const Subgroup h = random_subgroup(n, static_cast<int>(gen() % (n + 1)), gen);
    const auto reps = h.coset_reps();
    CHECK(reps.size() == (std::size_t{1} << (n - h.dim())));
    CHECK(std::is_sorted(reps.begin(), reps.end()));
    std::vector<int> hits(std::size_t{1} << n, 0);
    for (Vec r : reps) {
      Vec least = ~Vec{0};
      for (Vec e : h.elements()) {
        ++hits[r ^ e];
        least = std::min(least, r ^ e);
      }
      CHECK(least == r);
      CHECK(h.reduce(r) == r);
    }
    CHECK(std::all_of(hits.begin(), hits.end(), [](int c) { return c == 1; }));
  }
}

TEST_CASE("local coordinates and characters") {
  auto gen = testsupport::rng(21);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + static_cast<int>(gen() % 8);
    const Subgroup h = random_subgroup(n, static_cast<int>(gen() % (n + 1)), gen);
    const auto elems = h.elements();
    CHECK(span_of(h.basis()) == std::set<Vec>(elems.begin(), elems.end()));
    for (std::uint64_t a = 0; a < h.size(); ++a) {
      CHECK(h.element(a) == elems[a]);
      CHECK(h.local_coords(elems[a]) == a);
    }
    std::uniform_int_distribution<Vec> u(0, (Vec{1} << n) - 1);
    const Vec xi = u(gen);
    const std::uint64_t eta = h.restrict_character(xi);
    for (std::uint64_t a = 0; a < h.size(); ++a) {
      CHECK(dot(elems[a], xi) == std::popcount(a & eta) % 2);
    }
    const Vec lifted = h.lift_character(eta);
    CHECK(h.restrict_character(lifted) == eta);
  }
}

TEST_CASE("annihilator within a subgroup and intersection") {
  auto gen = testsupport::rng(33);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + static_cast<int>(gen() % 6);
    const Subgroup h = random_subgroup(n, static_cast<int>(gen() % (n + 1)), gen);
    const Subgroup k = random_subgroup(n, static_cast<int>(gen() % (n + 1)), gen);
    if (h.dim() == 0) continue;
    std::uniform_int_distribution<std::uint64_t> u(0, h.size() - 1);
    std::vector<std::uint64_t> local{u(gen), u(gen)};
    const Subgroup sub = h.annihilator_within(local);
    CHECK(h.contains(sub));
    std::size_t expected = 0;
    for (std::uint64_t a = 0; a < h.size(); ++a) {
      if (std::popcount(a & local[0]) % 2 == 0 && std::popcount(a & local[1]) % 2 == 0) {
        ++expected;
        CHECK(sub.contains(h.element(a)));
      }
    }
    CHECK(sub.size() == expected);
    const Subgroup both = h.intersect(k);
    std::size_t count = 0;
    for (Vec x = 0; x < (Vec{1} << n); ++x) {
      if (h.contains(x) && k.contains(x)) ++count;
    }
    CHECK(both.size() == count);
  }
}

TEST_CASE("all subgroups of F2^4 by dimension") {
  // Gaussian binomials [4 choose k]_2.
  const std::vector<std::size_t> expect{1, 15, 35, 15, 1};
  for (int d = 0; d <= 4; ++d) {
    const auto subs = all_subgroups(4, d);
    CHECK(subs.size() == expect[static_cast<std::size_t>(d)]);
    std::set<std::vector<Vec>> distinct;
    for (const auto& s : subs) {
      CHECK(s.dim() == d);
      distinct.insert(s.basis());
    }
    CHECK(distinct.size() == subs.size());
  }
}

TEST_CASE("rejects out-of-range generators") {
  CHECK_THROWS_AS(Subgroup(3, std::vector<Vec>{0b1000}), DomainError);
  CHECK(format_vec(0b011, 3) == "011");
}
