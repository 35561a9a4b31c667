#include <doctest.h>

#include <bit>
#include <cmath>
#include <set>

#include "arithreg/errors.hpp"
#include "arithreg/group.hpp"
#include "support.hpp"

using namespace arithreg;

namespace {

// Order of x by repeated addition.
std::size_t element_order(const GroupSpec& g, std::size_t x) {
  std::size_t acc = x;
  std::size_t k = 1;
  while (acc != 0) {
    acc = testsupport::add_oracle(g, acc, x);
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("make_group records factors and order") {
  CHECK(make_group({2, 2, 2}).order() == 8);
  CHECK(make_group({5}).order() == 5);
  CHECK(make_group({5}).is_cyclic());
  CHECK(make_group({2, 2, 2}).is_elementary2());
  CHECK_FALSE(make_group({4, 2}).is_elementary2());
  CHECK_THROWS_AS(make_group({3, 0}), InvalidSpecError);
  CHECK_THROWS_AS(make_group({}), InvalidSpecError);
}

TEST_CASE("Z/4 x Z/3 has an element of order 12") {
  const GroupSpec g = make_group({4, 3});
  std::size_t best = 0;
  for (std::size_t x = 0; x < g.order(); ++x) best = std::max(best, element_order(g, x));
  CHECK(best == 12);
}

TEST_CASE("group spec strings") {
  CHECK(GroupSpec::parse("2^10").order() == 1024);
  CHECK(GroupSpec::parse("5x5x3").factors() == std::vector<std::uint64_t>{5, 5, 3});
  CHECK(GroupSpec::parse("2^3x7").factors() == std::vector<std::uint64_t>{2, 2, 2, 7});
  CHECK(GroupSpec::parse("101").is_cyclic());
  CHECK_THROWS_AS(GroupSpec::parse(""), InvalidSpecError);
  CHECK_THROWS_AS(GroupSpec::parse("0"), InvalidSpecError);
  CHECK_THROWS_AS(GroupSpec::parse("-3"), InvalidSpecError);
  CHECK_THROWS_AS(GroupSpec::parse("3x"), InvalidSpecError);
  CHECK_THROWS_AS(GroupSpec::parse("abc"), InvalidSpecError);
}

TEST_CASE("enumeration yields N distinct elements and characters") {
  for (auto spec : {"12", "5x5x3", "2^5", "4x6"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    std::set<GroupElement> elems;
    std::set<Character> chars;
    for (std::size_t i = 0; i < g.order(); ++i) {
      elems.insert(g.element(i));
      chars.insert(g.character(i));
      CHECK(g.index_of(g.element(i)) == i);
      CHECK(g.element(i).coords == testsupport::coords_of(g, i));
    }
    CHECK(elems.size() == g.order());
    CHECK(chars.size() == g.order());
  }
}

TEST_CASE("group law") {
  const GroupSpec z5 = GroupSpec::cyclic(5);
  CHECK(z5.add(GroupElement{{3}}, GroupElement{{4}}) == GroupElement{{2}});
  const GroupSpec z7 = GroupSpec::cyclic(7);
  // -2 * 3 = -6 = 1 mod 7, by repeated addition of the inverse.
  std::size_t acc = 0;
  for (int i = 0; i < 2; ++i) acc = testsupport::add_oracle(z7, acc, testsupport::neg_oracle(z7, 3));
  CHECK(acc == 1);
  CHECK(z7.scalar_mul(-2, GroupElement{{3}}) == GroupElement{{1}});

  auto gen = testsupport::rng(11);
  for (auto spec : {"5x5x3", "2^6", "12", "4x6x3"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    std::uniform_int_distribution<std::size_t> u(0, g.order() - 1);
    for (int t = 0; t < 200; ++t) {
      const std::size_t a = u(gen), b = u(gen);
      CHECK(g.add(a, b) == testsupport::add_oracle(g, a, b));
      CHECK(g.add(a, 0) == a);
      CHECK(g.add(a, g.neg(a)) == 0);
      CHECK(g.sub(a, b) == testsupport::add_oracle(g, a, testsupport::neg_oracle(g, b)));
      CHECK(g.index_of(g.add(g.element(a), g.element(b))) == g.add(a, b));
      const std::int64_t k = static_cast<std::int64_t>(u(gen) % 9) - 4;
      std::size_t rep = 0;
      for (std::int64_t i = 0; i < std::abs(k); ++i) rep = testsupport::add_oracle(g, rep, a);
      if (k < 0) rep = testsupport::neg_oracle(g, rep);
      CHECK(g.scalar_mul(k, a) == rep);
    }
  }
}

TEST_CASE("mismatched elements are rejected") {
  const GroupSpec g = make_group({5, 3});
  CHECK_THROWS_AS(g.add(GroupElement{{1}}, GroupElement{{1, 1}}), DomainError);
  CHECK_THROWS_AS(g.add(GroupElement{{5, 0}}, GroupElement{{1, 1}}), DomainError);
  CHECK_THROWS_AS(g.char_eval(Character{{1}}, GroupElement{{1, 1}}), DomainError);
}

TEST_CASE("character evaluation") {
  const GroupSpec z8 = GroupSpec::cyclic(8);
  CHECK(std::abs(z8.char_eval(1, 4) - std::complex<double>(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(z8.char_eval(0, 5) - 1.0) < 1e-15);
  CHECK(z8.arg_norm(1, 4) == 0.5);
  CHECK(z8.arg_norm(1, 0) == 0.0);

  const GroupSpec e = GroupSpec::elementary2(6);
  for (std::size_t xi = 0; xi < e.order(); ++xi) {
    for (std::size_t x = 0; x < e.order(); ++x) {
      const double sign = (std::popcount(xi & x) & 1) ? -1.0 : 1.0;
      CHECK(e.char_eval(xi, x).real() == sign);
    }
  }
}

TEST_CASE("characters against the per-factor exponential") {
  for (auto spec : {"12", "5x5x3", "4x6", "101"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    for (std::size_t gamma = 0; gamma < g.order(); gamma += 3) {
      for (std::size_t x = 0; x < g.order(); x += 2) {
        const auto v = g.char_eval(gamma, x);
        CHECK(std::abs(v - testsupport::char_oracle(g, gamma, x)) < 1e-12);
        CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);
        CHECK(std::abs(g.arg_norm(gamma, x) - testsupport::arg_norm_oracle(g, {gamma}, x)) < 1e-12);
      }
    }
  }
}

TEST_CASE("orthogonality for every group of order up to 512 in a sample family") {
  for (auto spec : {"2^9", "3^5", "512", "7x7x7", "12x12x3", "5x5x3"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    double worst = 0.0;
    for (std::size_t x = 0; x < g.order(); ++x) {
      std::complex<double> s = 0.0;
      for (std::size_t gamma = 0; gamma < g.order(); ++gamma) s += g.char_eval(gamma, x);
      const double expect = x == 0 ? static_cast<double>(g.order()) : 0.0;
      worst = std::max(worst, std::abs(s - expect));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("pairing is bilinear") {
  auto gen = testsupport::rng(5);
  for (auto spec : {"5x5x3", "12", "2^7", "9x4"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    std::uniform_int_distribution<std::size_t> u(0, g.order() - 1);
    for (int t = 0; t < 100; ++t) {
      const std::size_t a = u(gen), b = u(gen), c = u(gen);
      CHECK(std::abs(g.char_eval(c, g.add(a, b)) - g.char_eval(c, a) * g.char_eval(c, b)) < 1e-12);
      CHECK(std::abs(g.char_eval(g.add(a, b), c) - g.char_eval(a, c) * g.char_eval(b, c)) < 1e-12);
    }
  }
}

TEST_CASE("arg norm of a character family") {
  const GroupSpec g = GroupSpec::cyclic(8);
  const std::vector<std::size_t> none;
  CHECK(char_arg_norm(g, none, 3) == 0.0);
  const std::vector<std::size_t> one{1};
  CHECK(char_arg_norm(g, one, 4) == 0.5);
  CHECK(char_arg_norm(g, one, 0) == 0.0);
  const std::vector<Character> objs{Character{{1}}, Character{{3}}};
  CHECK(char_arg_norm(g, objs, GroupElement{{1}}) == 0.375);
  for (std::size_t x = 0; x < 8; ++x) {
    const double v = char_arg_norm(g, one, x);
    CHECK(v >= 0.0);
    CHECK(v <= 0.5);
  }
}

TEST_CASE("element text round trip") {
  const GroupSpec g = make_group({5, 5, 3});
  CHECK(g.format(GroupElement{{4, 0, 2}}) == "4,0,2");
  CHECK(g.parse_element("4,0,2") == GroupElement{{4, 0, 2}});
  CHECK(g.parse_element("9, 5, -1") == GroupElement{{4, 0, 2}});
  CHECK_THROWS_AS(g.parse_element("1,2"), InvalidSpecError);
  CHECK_THROWS_AS(g.parse_element("1,2,3,4"), InvalidSpecError);
  CHECK_THROWS_AS(g.parse_element("1,x,3"), InvalidSpecError);
}

TEST_CASE("desk-scale guard") {
  const GroupSpec big = GroupSpec::parse("2^30");
  CHECK(big.order() == (std::size_t{1} << 30));
  CHECK_THROWS_AS(big.require_enumerable(), ResourceError);
  CHECK_NOTHROW(GroupSpec::parse("2^20").require_enumerable());
}
