#include <gtest/gtest.h>

#include "lbirch/characters.hpp"
#include "lbirch/whittaker.hpp"
#include "random_util.hpp"

using namespace lbirch;
using namespace lbirch::testing;

TEST(Support, Examples) {
  EXPECT_TRUE(supported({2, 1, 1}, WeylElement::identity(3)));
  EXPECT_FALSE(supported({0, 1}, WeylElement::identity(2)));
  for (const auto& w : WeylElement::all(3)) EXPECT_TRUE(supported({0, 0, 0}, w));
  // sigma(1) > sigma(2) for w_2 allows e_1 - e_2 = -1
  EXPECT_TRUE(supported({0, 1}, WeylElement::longest(2)));
  EXPECT_FALSE(supported({0, 2}, WeylElement::longest(2)));
}

TEST(Support, AgreesWithProbe) {
  for (std::int64_t p : {2, 3}) {
    for (int n = 1; n <= 3; ++n) {
      for (const auto& w : WeylElement::all(n)) {
        std::vector<std::int64_t> e(n, -2);
        for (;;) {
          EXPECT_EQ(consistency_probe(e, w, 30, p), supported(e, w)) << WhittakerKey{e, w}.to_string();
          int i = 0;
          while (i < n && e[i] == 2) e[i++] = -2;
          if (i == n) break;
          ++e[i];
        }
      }
    }
  }
}

TEST(FormalEval, Examples) {
  auto v = formal_eval(GMatrix::identity(2, 3), 1);
  EXPECT_EQ(v.coeff, CyclotomicNumber(1));
  EXPECT_EQ(v.key, WhittakerKey::identity(2));
  GMatrix u = GMatrix::identity(2, 3);
  u(0, 1) = Rational(1, 3);
  std::vector<std::int64_t> e{1, 0};
  auto v2 = formal_eval(u * varpi_power(e, 3), 1);
  EXPECT_EQ(v2.coeff, CyclotomicNumber::root_of_unity(3, 1));
  EXPECT_EQ(v2.key.e, e);
  auto v3 = formal_eval(varpi_power({0, 1}, 3), 1);
  EXPECT_TRUE(v3.coeff.is_zero());
}

TEST(FormalEval, TransformationLaw) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + t % 3;
    const std::int64_t p = t % 2 ? 2 : 3;
    auto e = rand_exponents(rng, n, -2, 2);
    auto w = rand_weyl(rng, n);
    if (!supported(e, w)) continue;
    GMatrix g = varpi_power(e, p) * w.matrix(p);
    auto base = formal_eval(g, 1);
    for (int sign : {1, -1}) {
      GMatrix u = rand_unipotent(rng, n, p);
      GMatrix s = rand_iwahori(rng, n, p);
      auto moved = formal_eval(u * g * s, sign);
      EXPECT_EQ(moved.key, base.key);
      EXPECT_EQ(moved.coeff, psi_unipotent(u, sign) * formal_eval(g, sign).coeff);
    }
  }
}

TEST(Schur, BialternantIdentity) {
  const std::int64_t p = 3;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::vector<std::int64_t>> es;
    if (n == 1) es = {{0}, {2}, {-3}};
    if (n == 2) es = {{0, 0}, {1, 0}, {3, 1}, {0, -2}, {2, 2}};
    if (n == 3) es = {{0, 0, 0}, {1, 0, 0}, {2, 1, 0}, {1, 0, -1}, {3, 3, 1}};
    for (const auto& e : es) {
      auto alt = [&](const std::vector<std::int64_t>& ex) {
        // det(x_i^{ex_j}) as an explicit alternating sum
        SymbolicScalar d(n, p);
        for (const auto& w : WeylElement::all(n)) {
          std::vector<int> mono(n);
          for (int i = 0; i < n; ++i) mono[i] = static_cast<int>(ex[w[i]]);
          auto term = SymbolicScalar::monomial(n, p, mono);
          if (w.length() % 2) d -= term;
          else d += term;
        }
        return d;
      };
      std::vector<std::int64_t> num(n), den(n);
      for (int j = 0; j < n; ++j) {
        num[j] = e[j] + n - 1 - j;
        den[j] = n - 1 - j;
      }
      EXPECT_EQ(schur(n, p, e) * alt(den), alt(num));
      EXPECT_TRUE(schur(n, p, e).is_symmetric());
    }
  }
}

TEST(Shintani, Examples) {
  const std::int64_t p = 5;
  EXPECT_EQ(shintani_value(2, p, {0, 0}), SymbolicScalar(2, p, CyclotomicNumber(1)));
  auto x1 = SymbolicScalar::variable(2, p, 0), x2 = SymbolicScalar::variable(2, p, 1);
  EXPECT_EQ(shintani_value(2, p, {1, 0}), SymbolicScalar::qhalf_pow(2, p, -1) * (x1 + x2));
  EXPECT_TRUE(shintani_value(2, p, {0, 1}).is_zero());
  EXPECT_EQ(shintani_value(2, p, {1, 1}), x1 * x2);
}

TEST(Shintani, SphericalConsistency) {
  const WeylElement id = WeylElement::identity(3);
  std::vector<std::int64_t> e(3, -2);
  for (;;) {
    const bool dom = dominant(e);
    EXPECT_EQ(supported(e, id), dom);
    EXPECT_EQ(!shintani_value(3, 2, e).is_zero(), dom);
    int i = 0;
    while (i < 3 && e[i] == 2) e[i++] = -2;
    if (i == 3) break;
    ++e[i];
  }
}

TEST(Spherical, LeftUnipotentRightK) {
  std::mt19937_64 rng(4);
  const std::int64_t p = 3;
  for (int t = 0; t < 40; ++t) {
    const int n = 2;
    auto e = rand_exponents(rng, n, -1, 2);
    GMatrix g = varpi_power(e, p);
    GMatrix u = rand_unipotent(rng, n, p);
    GMatrix k = rand_iwahori(rng, n, p) * rand_weyl(rng, n).matrix(p);
    EXPECT_EQ(spherical_eval(u * g * k), spherical_eval(g) * psi_unipotent(u, 1));
  }
}
