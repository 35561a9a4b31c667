#include <doctest.h>

#include "arithreg/bohr.hpp"
#include "arithreg/errors.hpp"
#include "support.hpp"

using namespace arithreg;

TEST_CASE("Bohr sets") {
  const GroupSpec z5 = GroupSpec::cyclic(5);
  CHECK(bohr_set(FrequencySet(z5, {1}), 0.2) == std::vector<std::size_t>{0, 1, 4});
  CHECK(bohr_set(FrequencySet(z5), 0.01).size() == 5);
  CHECK(bohr_set(FrequencySet(z5, {1, 2}), 0.5).size() == 5);
  CHECK(bohr_set(FrequencySet(GroupSpec::cyclic(101), {1}), 0.1).size() == 21);
  CHECK_THROWS_AS(bohr_set(FrequencySet(z5, {1}), 0.0), DomainError);
  CHECK_THROWS_AS(FrequencySet(z5, {1, 1}), DomainError);
  CHECK_THROWS_AS(FrequencySet(z5, {5}), DomainError);

  auto gen = testsupport::rng(1);
  for (auto spec : {"64", "5x5x3", "2^6"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    for (int t = 0; t < 10; ++t) {
      const auto chars = testsupport::random_chars(g, gen, 1 + t % 3);
      const double delta = 0.02 + 0.04 * t;
      const auto b = bohr_set(FrequencySet(g, chars), delta);
      CHECK(b.front() == 0);
      for (std::size_t x = 0; x < g.order(); ++x) {
        const bool in = std::binary_search(b.begin(), b.end(), x);
        CHECK(in == (testsupport::arg_norm_oracle(g, chars, x) <= delta + 1e-15));
        CHECK(in == std::binary_search(b.begin(), b.end(), g.neg(x)));
      }
    }
  }
}

TEST_CASE("smoothed cutoff values") {
  const GroupSpec z8 = GroupSpec::cyclic(8);
  const DenseFn tilde = smoothed_bohr(FrequencySet(z8, {1}), 0.1);
  CHECK(std::abs(tilde[4] - std::exp(-5.0)) < 1e-15);
  const DenseFn uniform = smoothed_beta(FrequencySet(z8), 0.3);
  for (double v : uniform.values()) CHECK(std::abs(v - 0.125) < 1e-15);
  const DenseFn beta = smoothed_beta(FrequencySet(z8, {1, 3}), 0.2);
  CHECK(beta[0] == beta.sup());
}

TEST_CASE("closed form matches quadrature of the defining integral") {
  auto gen = testsupport::rng(77);
  for (auto spec : {"101", "5x5x3", "64"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    for (int t = 0; t < 4; ++t) {
      const auto chars = testsupport::random_chars(g, gen, 1 + t % 3);
      const double delta = 0.03 + 0.05 * t;
      const DenseFn tilde = smoothed_bohr(FrequencySet(g, chars), delta);
      for (std::size_t x = 0; x < g.order(); x += 7) {
        CHECK(std::abs(tilde[x] - testsupport::smoothed_by_quadrature(g, chars, x, delta)) < 1e-6);
      }
    }
  }
}

TEST_CASE("cutoff invariants") {
  auto gen = testsupport::rng(13);
  for (auto spec : {"25", "101", "5x5x3", "2^7"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    for (int t = 0; t < 6; ++t) {
      const auto chars = testsupport::random_chars(g, gen, t % 4);
      const double delta = 0.05 + 0.1 * t;
      const BohrCutoff c(FrequencySet(g, chars), delta);
      CHECK(std::abs(c.beta().l1() - 1.0) < 1e-12);
      CHECK(std::abs(c.psi().l1() - 1.0) < 1e-12);
      CHECK(c.psi().sup() == c.psi()[0]);
      for (std::size_t x = 0; x < g.order(); ++x) {
        CHECK(c.beta()[x] == doctest::Approx(c.beta()[g.neg(x)]).epsilon(1e-12));
        CHECK(c.psi()[x] == doctest::Approx(c.psi()[g.neg(x)]).epsilon(1e-9));
        CHECK(c.psi_sqrt()[x] * c.psi_sqrt()[x] == doctest::Approx(c.psi()[x]).epsilon(1e-12));
      }
      const Spectrum s = dft(c.psi());
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].real() >= -1e-9);
        CHECK(std::abs(s[i].real() - c.psi_hat()[i]) < 1e-9);
      }
      CHECK(check_cutoff("i", {&c}).holds);
      CHECK(check_cutoff("ii", {&c}).holds);
      CHECK(check_cutoff("iii", {&c}).holds);
    }
  }
  const BohrCutoff empty(FrequencySet(GroupSpec::cyclic(9)), 0.5);
  for (double v : empty.psi().values()) CHECK(std::abs(v - 1.0 / 9.0) < 1e-15);
}

TEST_CASE("tail mass") {
  const BohrCutoff c(FrequencySet(GroupSpec::cyclic(101), {3, 10}), 0.05);
  CHECK(std::abs(tail_mass(c, 0.0) - 1.0) < 1e-12);
  CHECK(tail_mass(c, 0.51) == 0.0);
  for (double eta : {0.05, 0.1, 0.2, 0.4}) {
    const auto r = check_tail_bound(c, eta);
    CHECK(r.holds);
    CHECK(r.lhs == tail_mass(c, eta));
  }
}

TEST_CASE("Bohr size bounds") {
  const auto empty = check_bohr_size(FrequencySet(GroupSpec::cyclic(30)), 0.1);
  CHECK(empty.size_delta == 30);
  CHECK(empty.part_i.holds);
  const auto z101 = check_bohr_size(FrequencySet(GroupSpec::cyclic(101), {1}), 0.1);
  CHECK(z101.size_delta == 21);
  CHECK(z101.part_i.lhs == doctest::Approx(10.1));
  CHECK(z101.part_i.holds);
  CHECK(z101.part_ii.holds);
  auto gen = testsupport::rng(40);
  const GroupSpec g = GroupSpec::cyclic(64);
  for (int t = 0; t < 30; ++t) {
    const auto chars = testsupport::random_chars(g, gen, 1 + t % 3);
    const auto r = check_bohr_size(FrequencySet(g, chars), 0.01 + 0.015 * t);
    CHECK(r.part_i.holds);
    CHECK(r.part_ii.holds);
  }
}

TEST_CASE("beta and cutoff pointwise bounds") {
  auto gen = testsupport::rng(19);
  for (auto spec : {"101", "5x5x3", "2^6"}) {
    const GroupSpec g = GroupSpec::parse(spec);
    std::uniform_int_distribution<std::size_t> u(0, g.order() - 1);
    for (int t = 0; t < 5; ++t) {
      const FrequencySet gamma(g, testsupport::random_chars(g, gen, 1 + t % 3));
      const double delta = 0.02 + 0.07 * t;
      const BohrCutoff c(gamma, delta);
      const std::size_t y = u(gen);
      CHECK(check_beta("i", gamma, delta).holds);
      CHECK(check_beta("ii", gamma, delta).holds);
      CHECK(check_beta("iii", gamma, delta, y).holds);
      for (int k = 1; k <= 10; ++k) CHECK(check_beta("iv", gamma, delta, 0, 0.05 * k).holds);
      CHECK(check_sqrt_lipschitz(c, y).holds);
      CHECK(check_bohr_domination(gamma, delta).holds);
      CutoffCheckInput in{&c};
      in.y = y;
      CHECK(check_cutoff("v", in).holds);
      in.y = 0;
      const auto r0 = check_cutoff("v", in);
      CHECK(r0.lhs == 0.0);
      CHECK(r0.holds);
    }
  }
  CHECK_THROWS_AS(check_beta("vii", FrequencySet(GroupSpec::cyclic(5)), 0.1), DomainError);
  const BohrCutoff c(FrequencySet(GroupSpec::cyclic(5)), 0.1);
  CHECK_THROWS_AS(check_cutoff("x", {&c}), DomainError);
}

TEST_CASE("refinement parts on Z/2^10 with conforming widths") {
  const GroupSpec g = GroupSpec::parse("1024");
  const FrequencySet gamma(g, {1});
  const FrequencySet gamma_prime(g, {1, 5});
  const double tau = 0.2;
  const double delta = 0.05;
  const double delta_prime = std::ldexp(1.0, -13) * delta * tau * tau / 2.0;
  const BohrCutoff c(gamma, delta);
  const BohrCutoff cp(gamma_prime, delta_prime);
  CutoffCheckInput in{&c, &cp, tau};
  auto gen = testsupport::rng(5);
  const DenseFn f = testsupport::random_real(g, gen);
  in.f = &f;
  for (auto part : {"vi", "vii", "viii"}) {
    const auto r = check_cutoff(part, in);
    CHECK(r.hypothesis_ok);
    CHECK(r.holds);
    CHECK(r.slack >= 0.0);
  }
  in.m = 3;
  CHECK(check_cutoff("vi", in).holds);
  const auto bad = check_cutoff("vii", CutoffCheckInput{&c, &c, tau});
  CHECK_FALSE(bad.hypothesis_ok);
}

TEST_CASE("character defect parts") {
  const GroupSpec g = GroupSpec::cyclic(101);
  const double tau = 0.2;
  const BohrCutoff c(FrequencySet(g, {7}), std::ldexp(1.0, -12) * tau * tau);
  CutoffCheckInput in{&c};
  in.tau = tau;
  in.character = 7;
  CHECK(check_cutoff("iv", in).hypothesis_ok);
  CHECK(check_cutoff("iv", in).holds);
  CHECK(check_cutoff("iv-hat", in).holds);

  const BohrCutoff wide(FrequencySet(g, {7}), 0.2);
  const double kappa = wide.psi_hat()[7];
  const double omega = 0.3;
  const BohrCutoff narrow(FrequencySet(g, {7, 30}), omega * omega * kappa * kappa * 0.2 / (std::ldexp(1.0, 13) * 2));
  CutoffCheckInput ix{&wide, &narrow};
  ix.character = 7;
  ix.kappa = kappa;
  ix.omega = omega;
  const auto r = check_cutoff("ix", ix);
  CHECK(r.hypothesis_ok);
  CHECK(r.holds);
}
