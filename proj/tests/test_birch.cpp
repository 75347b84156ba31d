#include <random>
#include <set>

#include <gtest/gtest.h>

#include "lbirch/birch.hpp"
#include "lbirch/decompose.hpp"
#include "random_util.hpp"

using namespace lbirch;
using namespace lbirch::testing;

namespace {

MultChar first_char(std::int64_t p, int m) { return enumerate_chars(p, m).at(0); }

std::vector<std::int64_t> rand_gamma(std::mt19937_64& rng, int n, std::int64_t M, std::int64_t p) {
  std::uniform_int_distribution<std::int64_t> d(1, M - 1);
  std::vector<std::int64_t> g(static_cast<std::size_t>(n));
  for (auto& x : g) {
    do x = d(rng);
    while (x % p == 0);
  }
  return g;
}

}  // namespace

TEST(RlRep, SpecialRepresentatives) {
  // p = 3, m = 1, l = 2: modulus 9
  EXPECT_EQ(rl_rep(8, 3, 1, 2), -1);
  EXPECT_EQ(rl_rep(6, 3, 1, 2), -3);
  EXPECT_EQ(rl_rep(3, 3, 1, 2), 3);
  EXPECT_EQ(rl_rep(-1, 3, 1, 2), -1);
  EXPECT_EQ(rl_rep(12, 3, 1, 2), 3);
  // f = 2: -f^{l-1} and f^{l-1} are one class, kept positive
  EXPECT_EQ(rl_rep(8, 2, 1, 4), 8);
  EXPECT_EQ(rl_rep(-8, 2, 1, 4), 8);
  EXPECT_EQ(rl_rep(12, 2, 1, 4), -4);
  for (std::int64_t x = -40; x < 40; ++x) EXPECT_EQ(rl_rep(rl_rep(x, 5, 1, 2), 5, 1, 2), rl_rep(x, 5, 1, 2));
}

TEST(RepSet, Counts) {
  for (std::int64_t p : {2, 3, 5}) EXPECT_EQ(RepSet(1, 2, 1, p, WeylElement::identity(1)).size(), static_cast<std::uint64_t>(p * (p - 1)));
  EXPECT_EQ(RepSet(2, 4, 1, 2, WeylElement::identity(2)).size(), 512u);
  EXPECT_EQ(RepSet(2, 4, 1, 2, WeylElement::longest(2)).size(), 1024u);
  EXPECT_THROW(RepSet(2, 3, 1, 2, WeylElement::identity(2)), std::invalid_argument);
}

TEST(RepSet, MatchesFilterOverIwahoriMod16) {
  const std::int64_t p = 2;
  const int l = 4, m = 1;
  for (const auto& w : WeylElement::all(2)) {
    RepSet rs(2, l, m, p, w);
    std::set<std::vector<std::int64_t>> decoded;
    for (std::uint64_t i = 0; i < rs.size(); ++i) decoded.insert(rs.entries(i));
    EXPECT_EQ(decoded.size(), rs.size());
    // filter: all matrices mod 16 in the Iwahori subgroup with the sigma-pattern zeros
    std::set<std::vector<std::int64_t>> filtered;
    for (std::int64_t a = 0; a < 16; ++a)
      for (std::int64_t b = 0; b < 16; ++b)
        for (std::int64_t c = 0; c < 16; ++c)
          for (std::int64_t d = 0; d < 16; ++d) {
            if (a % 2 == 0 || d % 2 == 0 || c % 2 != 0) continue;
            std::vector<std::int64_t> v{a, b, c, d};
            bool ok = true;
            // r_{sigma(i) sigma(j)} = 0 for i < j
            for (int i = 0; i < 2; ++i)
              for (int j = i + 1; j < 2; ++j)
                if (v[static_cast<std::size_t>(w[i] * 2 + w[j])] != 0) ok = false;
            if (!ok) continue;
            for (auto& x : v) x = rl_rep(x, p, m, l);
            filtered.insert(v);
          }
    EXPECT_EQ(decoded, filtered);
  }
}

TEST(RepSet, MembersAreIwahoriWithPattern) {
  std::mt19937_64 rng(3);
  for (const auto& w : WeylElement::all(3)) {
    RepSet rs(3, 6, 1, 3, w);
    std::uniform_int_distribution<std::uint64_t> d(0, rs.size() - 1);
    for (int t = 0; t < 50; ++t) {
      GMatrix r = rs.matrix(d(rng));
      EXPECT_TRUE(membership(r, Subgroup::Iwahori));
      EXPECT_TRUE(rs.contains(r));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) EXPECT_EQ(r(w[i], w[j]), 0);
    }
  }
}

TEST(DoubleRep, IdempotentOnRepresentatives) {
  std::mt19937_64 rng(5);
  const std::int64_t p = 3;
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + t % 3;
    const int l = 2 * n;
    auto w = rand_weyl(rng, n);
    auto e = rand_exponents(rng, n, -2, 2);
    RepSet rs(n, l, 1, p, w);
    std::uniform_int_distribution<std::uint64_t> d(0, rs.size() - 1);
    GMatrix r = rs.matrix(d(rng));
    auto out = canonical_double_rep(varpi_power(e, p) * w.matrix(p) * r, l, 1);
    EXPECT_EQ(out.e, e);
    EXPECT_EQ(out.omega, w);
    EXPECT_EQ(out.r, r);
  }
}

TEST(DoubleRep, InvariantUnderUAndJ) {
  std::mt19937_64 rng(6);
  const std::int64_t p = 2;
  for (int t = 0; t < 60; ++t) {
    const int n = 1 + t % 3;
    const int l = 2 * n, m = 1;
    GMatrix g = rand_iwahori(rng, n, p) * rand_weyl(rng, n).matrix(p) * varpi_power(rand_exponents(rng, n, -2, 2), p) *
                rand_iwahori(rng, n, p) * rand_weyl(rng, n).matrix(p) * rand_iwahori(rng, n, p);
    auto base = canonical_double_rep(g, l, m);
    EXPECT_TRUE(RepSet(n, l, m, p, base.omega).contains(base.r));
    GMatrix k = GMatrix::identity(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k(i, j) += rand_padic_integer(rng, p, 4) * rpow(p, m * l);
    auto right = canonical_double_rep(g * k, l, m);
    auto left = canonical_double_rep(rand_unipotent(rng, n, p) * g, l, m);
    EXPECT_EQ(right.e, base.e);
    EXPECT_EQ(right.omega, base.omega);
    EXPECT_EQ(right.r, base.r);
    EXPECT_EQ(left.e, base.e);
    EXPECT_EQ(left.omega, base.omega);
    EXPECT_EQ(left.r, base.r);
  }
}

TEST(Volume, ClosedFormExamples) {
  EXPECT_EQ(volume(2, 4, 1, 2), Rational(1, 1536));
  // e-dependence is the U-volume of the conjugated J
  EXPECT_EQ(volume(2, 4, 1, 2, {1, 0}), Rational(1, 768));
  EXPECT_EQ(volume(0, 0, 1, 5), Rational(1));
}

TEST(Volume, MatchesIndexCounting) {
  for (std::int64_t p : {2, 3}) {
    EXPECT_EQ(volume(1, 2, 1, p), volume_by_counting(1, 2, 1, p));
    EXPECT_EQ(volume(1, 3, 1, p), volume_by_counting(1, 3, 1, p));
  }
  EXPECT_EQ(volume(2, 4, 1, 2), volume_by_counting(2, 4, 1, 2));
  EXPECT_EQ(volume(1, 2, 2, 2), volume_by_counting(1, 2, 2, 2));
}

TEST(Orbits, CountsMatchFormulaAndFullWalk) {
  std::mt19937_64 rng(8);
  struct Case { int n; std::int64_t p; };
  for (auto [n, p] : {Case{1, 2}, Case{2, 2}, Case{2, 3}, Case{3, 2}}) {
    const int l = 2 * n, m = 1;
    for (const auto& w : WeylElement::all(n)) {
      if (w[n - 1] != n - 1) continue;
      RepSet rt = RepSet::rtilde(n, l, m, p, w);
      std::uniform_int_distribution<std::uint64_t> d(0, rt.size() - 1);
      for (int t = 0; t < 3; ++t) {
        auto r = rt.entries(d(rng));
        auto oc = orbit_count_check(n, l, m, p, w, r);
        EXPECT_TRUE(oc.pass) << n << " " << p;
        EXPECT_EQ(oc.count, ipow(p, n * (n - 1) / 2));
        if (n <= 2 || p == 2) EXPECT_EQ(orbit_count_full_walk(n, l, m, p, w, r), oc.count);
      }
    }
  }
}

TEST(Orbits, BijectionRoundTrips) {
  for (auto [n, p] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}})
    for (const auto& w : WeylElement::all(n)) {
      if (w[n - 1] != n - 1) continue;
      auto rep = rtilde_bijection_check(n, 2 * n, 1, p, w);
      EXPECT_TRUE(rep.pass);
      EXPECT_EQ(rep.size_tilde, rep.size_lower);
      EXPECT_EQ(rep.checked_tilde, rep.size_tilde);
    }
}

TEST(Orbits, LiftIsTimesC) {
  std::mt19937_64 rng(9);
  const std::int64_t p = 3;
  const Rational f = 3;
  RepSet lower(2, 6, 1, p, WeylElement::identity(2));
  RepSet tilde = RepSet::rtilde(3, 6, 1, p, WeylElement::identity(3));
  std::uniform_int_distribution<std::uint64_t> d(0, lower.size() - 1);
  for (int t = 0; t < 20; ++t) {
    GMatrix g = lower.matrix(d(rng));
    GMatrix lifted = embed(g, 3) * special_matrix(SpecialKind::C, 3, f, p);
    EXPECT_TRUE(tilde.contains(lifted));
    EXPECT_EQ(project(lifted), g);
  }
}

TEST(BlockSum, FastMatchesReference) {
  for (auto [p, m] : {std::pair{2, 2}, std::pair{3, 1}, std::pair{5, 1}})
    for (const auto& chi : enumerate_chars(p, m))
      for (std::int64_t e0 = -2; e0 <= 2; ++e0) {
        const std::vector<std::int64_t> e{e0};
        BlockSpec s{1, m, min_level(1, m, e), e, WeylElement::identity(1), Integrand::Theorem};
        EXPECT_EQ(block_sum(s, chi), block_sum_reference(s, chi));
        s.integrand = Integrand::Corollary;
        EXPECT_EQ(block_sum(s, chi), block_sum_reference(s, chi));
      }
  const auto chi = first_char(3, 1);
  for (auto kind : {Integrand::Theorem, Integrand::CorollaryMid}) {
    BlockSpec s{2, 1, 4, {1, 0}, WeylElement::longest(2), kind};
    EXPECT_EQ(block_sum(s, chi), block_sum_reference(s, chi));
  }
}

TEST(BlockSum, ThreadCountInvariant) {
  const auto chi = first_char(3, 1);
  BlockSpec s{2, 1, 4, {0, 0}, WeylElement::longest(2), Integrand::Theorem};
  EXPECT_EQ(block_sum(s, chi, 1), block_sum(s, chi, 3));
}

TEST(BlockSum, EmptySize) {
  const auto chi = first_char(3, 1);
  BlockSpec s{0, 1, 0, {}, WeylElement::identity(0), Integrand::Theorem};
  EXPECT_EQ(block_sum(s, chi), lemma_closed_form(0, 1, 0, chi));
  s.integrand = Integrand::Corollary;
  EXPECT_EQ(block_sum(s, chi), theorem_rhs(0, 1, chi, 1));
}

TEST(BlockSum, RejectsLowLevel) {
  const auto chi = first_char(3, 1);
  EXPECT_THROW(block_sum({1, 1, 2, {-2}, WeylElement::identity(1), Integrand::Theorem}, chi), std::invalid_argument);
  EXPECT_EQ(min_level(1, 1, {-2}), 3);
  EXPECT_EQ(min_level(2, 2, {-3, 0}), 4);
  EXPECT_EQ(min_level(1, 2, {-3}), 3);
}

TEST(Theorem, DegreeOne) {
  for (auto [p, m] : {std::pair{2, 2}, std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 1}})
    for (const auto& chi : enumerate_chars(p, m)) {
      auto rep = theorem_check(1, chi, 2);
      EXPECT_TRUE(rep.pass) << rep.witness;
      EXPECT_TRUE(rep.blocks_ok);
    }
}

TEST(Theorem, RhsShape) {
  const auto chi = first_char(3, 1);
  // n = 1: (1 - 1/3)^-1 3^-1 G
  PairingValue expect;
  expect.add({WhittakerKey::identity(1), WhittakerKey::identity(1), 0}, CyclotomicNumber(Rational(1, 2)) * gauss_sum(chi));
  EXPECT_EQ(theorem_rhs(1, 1, chi), expect);
}

TEST(Theorem, ValueAtPDoesNotMatter) {
  auto chi = first_char(5, 1).with_value_at_p(CyclotomicNumber::root_of_unity(4, 1));
  EXPECT_TRUE(theorem_check(1, chi, 2).pass);
}

TEST(Theorem, LevelStability) {
  for (const auto& chi : enumerate_chars(3, 1)) {
    auto a = theorem_check(1, chi, 2, 2);
    auto b = theorem_check(1, chi, 2, 3);
    EXPECT_EQ(a.lhs, b.lhs);
  }
}

TEST(Corollary, DegreeOne) {
  for (auto [p, m] : {std::pair{3, 1}, std::pair{2, 2}, std::pair{5, 1}})
    for (const auto& chi : enumerate_chars(p, m)) {
      auto rep = corollary_check(1, chi, 2);
      EXPECT_TRUE(rep.pass) << rep.witness;
      for (const auto& c : corollary_chain_check(1, chi, 2)) {
        EXPECT_TRUE(c.mid_ok);
        EXPECT_TRUE(c.embedded_ok);
      }
    }
}

TEST(Corollary, DegreeZero) {
  const auto chi = first_char(3, 1);
  EXPECT_TRUE(corollary_check(0, chi, 0).pass);
  EXPECT_TRUE(theorem_check(0, chi, 0).pass);
}

TEST(Zeta, FactoredMatchesBrute) {
  std::mt19937_64 rng(10);
  const auto chi = first_char(3, 1);
  for (const auto& w : WeylElement::all(2))
    for (const std::vector<std::int64_t>& e : {std::vector<std::int64_t>{0, 0}, {1, 0}, {1, 1}, {0, -1}}) {
      ZContext ctx{2, 1, 4, e, w};
      RepSet rs(2, 4, 1, 3, w);
      std::uniform_int_distribution<std::uint64_t> d(0, rs.size() - 1);
      for (int t = 0; t < 2; ++t) {
        auto r = rs.entries(d(rng));
        EXPECT_EQ(zeta_factored(ctx, chi, r), zeta_brute(ctx, chi, r));
      }
    }
}

TEST(Zeta, ConstantOnOrbitsAndVanishing) {
  std::mt19937_64 rng(11);
  const auto chi = first_char(3, 1);
  const int n = 3, l = 6, m = 1;
  const std::int64_t p = 3, M = ipow(p, m * l);
  const WeylElement id = WeylElement::identity(n);
  RepSet rs(n, l, m, p, id);
  std::uniform_int_distribution<std::uint64_t> d(0, rs.size() - 1);
  for (int t = 0; t < 5; ++t) {
    auto r = rs.entries(d(rng));
    ZContext ctx{n, m, l, {0, 0, 0}, id};
    auto gamma = rand_gamma(rng, n, M, p);
    EXPECT_TRUE(w_torus_invariant(ctx, r, gamma, p));
    EXPECT_EQ(zeta_factored(ctx, chi, torus_act(r, gamma, p, m, l)), zeta_factored(ctx, chi, r));
    // e_3 != 0 forces Z = 0
    ZContext shifted{n, m, l, {2, 1, 1}, id};
    EXPECT_TRUE(zeta_factored(shifted, chi, r).is_zero());
  }
}

TEST(Zeta, OrbitSumDegreeTwo) {
  const auto chi = first_char(3, 1);
  ZContext ctx{2, 1, 4, {0, 0}, WeylElement::identity(2)};
  EXPECT_EQ(rtilde_orbit_sum(ctx, chi), lemma_closed_form(2, 1, 4, chi));
  EXPECT_EQ(rtilde_orbit_sum(ctx, chi), block_sum({2, 1, 4, {0, 0}, WeylElement::identity(2), Integrand::Theorem}, chi));
  ZContext off{2, 1, 4, {1, 0}, WeylElement::identity(2)};
  EXPECT_TRUE(rtilde_orbit_sum(off, chi).is_zero());
}
