#include <random>

#include <gtest/gtest.h>

#include "lbirch/characters.hpp"

using namespace lbirch;

namespace {
CyclotomicNumber z(std::int64_t n, std::int64_t k) { return CyclotomicNumber::root_of_unity(n, k); }
}  // namespace

TEST(Psi, Examples) {
  EXPECT_EQ(psi_eval(7, 3), CyclotomicNumber(1));
  EXPECT_EQ(psi_eval(Rational(1, 5), 5), z(5, 1));
  EXPECT_EQ(psi_eval(Rational(3, 4), 2), z(4, 3));
  EXPECT_EQ(psi_eval(Rational(1, 3), 2), CyclotomicNumber(1));  // 1/3 is in Z_2
}

TEST(Psi, HomomorphismAndConductor) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<long> d(-500, 500);
  for (int t = 0; t < 100; ++t) {
    Rational x(d(rng), 27), y(d(rng), 9);
    x.canonicalize();
    y.canonicalize();
    EXPECT_EQ(psi_eval(x + y, 3), psi_eval(x, 3) * psi_eval(y, 3));
  }
  EXPECT_FALSE(psi_eval(Rational(1, 7), 7) == CyclotomicNumber(1));
}

TEST(Psi, Unipotent) {
  GMatrix u = GMatrix::identity(2, 3);
  EXPECT_EQ(psi_unipotent(u, 1), CyclotomicNumber(1));
  u(0, 1) = Rational(1, 3);
  EXPECT_EQ(psi_unipotent(u, 1), z(3, 1));
  EXPECT_EQ(psi_unipotent(u, -1), z(3, 2));
  u(1, 0) = 1;
  EXPECT_THROW(psi_unipotent(u, 1), std::invalid_argument);
}

TEST(Chars, EnumerationCounts) {
  EXPECT_EQ(enumerate_chars(3, 1).size(), 1u);
  EXPECT_EQ(enumerate_chars(5, 1).size(), 3u);
  EXPECT_EQ(enumerate_chars(2, 2).size(), 1u);
  EXPECT_EQ(enumerate_chars(2, 1).size(), 0u);
  // primitive characters mod 8: 2, mod 16: 4, mod 9: 4, mod 27: 12
  EXPECT_EQ(enumerate_chars(2, 3).size(), 2u);
  EXPECT_EQ(enumerate_chars(2, 4).size(), 4u);
  EXPECT_EQ(enumerate_chars(3, 2).size(), 4u);
  EXPECT_EQ(enumerate_chars(3, 3).size(), 12u);
  EXPECT_EQ(enumerate_all_chars(3, 3).size(), 18u);
}

TEST(Chars, Multiplicative) {
  for (auto [p, m] : {std::pair{2, 4}, std::pair{3, 2}, std::pair{5, 2}}) {
    for (const auto& chi : enumerate_all_chars(p, m)) {
      const std::int64_t M = chi.modulus();
      for (std::int64_t a = 1; a < M; ++a)
        for (std::int64_t b = 1; b < M; b += 3) {
          if (a % p == 0 || b % p == 0) continue;
          EXPECT_EQ(chi.value(Rational(a * b % M)), chi.value(Rational(a)) * chi.value(Rational(b)));
        }
    }
  }
}

TEST(Chars, ConductorIsExact) {
  for (auto [p, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 1}}) {
    for (const auto& chi : enumerate_chars(p, m)) {
      const std::int64_t step = ipow(p, m - 1);
      bool nontrivial = false;
      for (std::int64_t x = 1; x < chi.modulus(); x += step)
        if (x % p != 0 && !(chi.value(Rational(x)) == CyclotomicNumber(1))) nontrivial = true;
      EXPECT_TRUE(nontrivial);
    }
  }
}

TEST(Chars, ValueAtP) {
  auto chi = enumerate_chars(5, 1)[0].with_value_at_p(z(4, 1));
  EXPECT_EQ(chi.value(Rational(25 * 2)), z(4, 2) * chi.value(Rational(2)));
  EXPECT_EQ(chi.value(Rational(2, 5)), z(4, 3) * chi.value(Rational(2)));
}

TEST(Gauss, Examples) {
  auto chi3 = enumerate_chars(3, 1).at(0);
  auto g = gauss_sum(chi3);
  EXPECT_EQ(g * g, CyclotomicNumber(-3));
  auto chi4 = enumerate_chars(2, 2).at(0);
  EXPECT_EQ(gauss_sum(chi4), CyclotomicNumber(2) * z(4, 1));
}

TEST(Gauss, ClassicalIdentities) {
  for (auto [p, m] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 1}, std::pair{7, 1}}) {
    for (const auto& chi : enumerate_chars(p, m)) {
      auto g = gauss_sum(chi);
      EXPECT_EQ(g * gauss_sum(chi.conj()), chi.value(-1) * CyclotomicNumber(Rational(ipow(p, m))));
      EXPECT_EQ(g * g.conj(), CyclotomicNumber(Rational(ipow(p, m))));
    }
  }
}

TEST(TwistedSum, MatchesClosedForm) {
  for (auto [p, m] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 1}}) {
    for (const auto& chi : enumerate_chars(p, m)) {
      for (int j = 0; j <= m + 2; ++j) {
        Rational g = rpow(p, j);
        EXPECT_EQ(twisted_sum(chi, g), twisted_sum_closed(chi, g));
        Rational g2 = g * (p == 2 ? 3 : 2);
        EXPECT_EQ(twisted_sum(chi, g2), twisted_sum_closed(chi, g2));
        EXPECT_EQ(twisted_sum(chi, g, m + 3), twisted_sum_closed(chi, g, m + 3));
      }
      EXPECT_EQ(twisted_sum(chi, rpow(p, m)), gauss_sum(chi));
      EXPECT_TRUE(twisted_sum(chi, rpow(p, m + 1)).is_zero());
      EXPECT_TRUE(twisted_sum(chi, 1).is_zero());
    }
  }
}
