#include <gtest/gtest.h>

#include "lbirch/decompose.hpp"
#include "lbirch/hecke.hpp"
#include "lbirch/whittaker.hpp"
#include "random_util.hpp"

using namespace lbirch;
using namespace lbirch::testing;

namespace {

GMatrix m2(std::int64_t p, Rational a, Rational b, Rational d) {
  return GMatrix(p, {{a, b}, {Rational(0), d}});
}

HeckeQ from_list(int n, std::int64_t p, const std::vector<GMatrix>& reps) {
  HeckeQ h(n, p);
  for (const auto& r : reps) h.add(CosetRep::canonicalize(r), Rational(1));
  return h;
}

HeckeSym sym(const HeckeQ& h) {
  return h.map_coeffs<SymbolicScalar>(
      [&](const Rational& a) { return SymbolicScalar(h.n(), h.prime(), CyclotomicNumber(a)); });
}

std::int64_t gaussian_binomial(int n, int k, std::int64_t p) {
  std::int64_t num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= ipow(p, n - i) - 1;
    den *= ipow(p, i + 1) - 1;
  }
  return num / den;
}

SymbolicScalar x(int n, std::int64_t p, int i) { return SymbolicScalar::variable(n, p, i); }

}  // namespace

TEST(CosetRep, Examples) {
  EXPECT_EQ(CosetRep::canonicalize(m2(5, 5, 0, 1)).matrix(), m2(5, 5, 0, 1));
  EXPECT_EQ(CosetRep::canonicalize(m2(5, 5, 8, 1)).matrix(), m2(5, 5, 3, 1));
  EXPECT_EQ(CosetRep::canonicalize(m2(3, -2, 7, 4)).matrix(), GMatrix::identity(2, 3));
  EXPECT_THROW(CosetRep::canonicalize(GMatrix(2, {{Rational(1), Rational(0)}, {Rational(1), Rational(1)}})),
               std::invalid_argument);
  EXPECT_THROW(CosetRep::canonicalize(m2(2, 0, 1, 1)), std::invalid_argument);
}

TEST(CosetRep, RightKBInvarianceAndIdempotence) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 500; ++t) {
    const std::int64_t p = std::vector<std::int64_t>{2, 3, 5}[t % 3];
    const int n = 1 + t % 4;
    GMatrix b = GMatrix::identity(n, p);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        b(i, j) = i == j ? rand_unit(rng, p, 2) * rpow(p, std::uniform_int_distribution<int>(-2, 2)(rng))
                         : rand_zp_inv(rng, p, -2, 4);
    const GMatrix k = random_integral(rng, n, p, HeckeKind::Parabolic);
    const CosetRep c = CosetRep::canonicalize(b);
    EXPECT_EQ(CosetRep::canonicalize(b * k), c);
    EXPECT_EQ(CosetRep::canonicalize(c.matrix()), c);
    EXPECT_EQ(CosetRep::of_gl(b), c);
    EXPECT_EQ(CosetRep::of_gl(b * random_integral(rng, n, p, HeckeKind::Spherical)), c);
  }
}

TEST(HeckeElement, UnitIsNeutral) {
  for (auto T : {u_op(3, 2, 2), v_op_block(3, 3, 1), t_coset_list(3, 2)}) {
    const HeckeQ one = HeckeQ::unit(3, T.prime(), HeckeKind::Parabolic, Rational(1));
    EXPECT_EQ((one * T).terms(), T.terms());
    EXPECT_EQ((T * one).terms(), T.terms());
  }
}

TEST(HeckeElement, RightFactorMustBeInvariant) {
  HeckeQ lone = from_list(2, 2, {m2(2, 2, 1, 1)});
  EXPECT_FALSE(verify_left_invariant(lone, 4, 3));
  EXPECT_NO_THROW(lone * u_op(2, 2, 1));
  EXPECT_THROW(u_op(2, 2, 1) * lone, std::invalid_argument);
}

TEST(HeckeElement, TwoByTwoProductsOfU) {
  for (std::int64_t p : {2, 3, 5}) {
    const HeckeQ u1 = u_op(2, p, 1), u2 = u_op(2, p, 2);
    HeckeQ expected(2, p);
    expected.add(CosetRep::canonicalize(m2(p, p, 0, p)), Rational(p));
    EXPECT_EQ((u1 * u2).terms(), expected.terms());
    std::vector<GMatrix> reps;
    for (std::int64_t a = 0; a < p; ++a) reps.push_back(m2(p, p, a, p));
    EXPECT_EQ((u2 * u1).terms(), from_list(2, p, reps).terms());
  }
}

TEST(HeckeElement, Associativity) {
  for (int n : {2, 3}) {
    const std::int64_t p = 2;
    std::vector<HeckeQ> ops;
    for (int i = 1; i <= n; ++i) ops.push_back(u_op(n, p, i));
    for (int nu = 1; nu <= n; ++nu) ops.push_back(v_op_block(n, p, nu));
    for (const auto& a : ops)
      for (const auto& b : ops)
        for (const auto& c : ops) EXPECT_EQ(((a * b) * c).terms(), (a * (b * c)).terms());
  }
}

TEST(StandardOps, VOneIsBlockList) {
  for (std::int64_t p : {2, 3, 5}) {
    std::vector<GMatrix> reps;
    for (std::int64_t a = 0; a < p; ++a) reps.push_back(m2(p, p, a, 1));
    EXPECT_EQ(v_op_block(2, p, 1).terms(), from_list(2, p, reps).terms());
    EXPECT_EQ(u_op(2, p, 1).terms(), from_list(2, p, reps).terms());
  }
}

TEST(StandardOps, SphericalCountsAreGaussianBinomials) {
  for (int n = 1; n <= 3; ++n)
    for (std::int64_t p : {2, 3})
      for (int nu = 0; nu <= n; ++nu)
        EXPECT_EQ(static_cast<std::int64_t>(t_op(n, p, nu).size()), gaussian_binomial(n, nu, p));
  EXPECT_EQ(t_op(2, 5, 1).size(), 6u);
}

TEST(StandardOps, IndexOutOfRange) {
  EXPECT_THROW(u_op(2, 2, 0), std::invalid_argument);
  EXPECT_THROW(u_op(2, 2, 3), std::invalid_argument);
  EXPECT_THROW(t_op(2, 2, 3), std::invalid_argument);
  EXPECT_THROW(v_op_block(3, 2, 4), std::invalid_argument);
}

TEST(StandardOps, TCosetThreeWays) {
  for (int n : {1, 2, 3})
    for (std::int64_t p : {2, 3}) {
      const HeckeQ list = t_coset_list(n, p);
      EXPECT_EQ(static_cast<std::int64_t>(list.size()), ipow(p, (n + 1) * n * (n - 1) / 6));
      EXPECT_EQ(list, t_coset_double(n, p));
      EXPECT_EQ(list, t_coset_product(n, p));
    }
}

TEST(Epsilon, Examples) {
  for (std::int64_t p : {2, 3}) {
    const HeckeQ id = epsilon_embed(t_op(2, p, 0));
    EXPECT_EQ(id.terms(), HeckeQ::unit(2, p, HeckeKind::Parabolic, Rational(1)).terms());
    EXPECT_EQ(epsilon_embed(t_op(2, p, 2)).terms(), from_list(2, p, {m2(p, p, 0, p)}).terms());
    std::vector<GMatrix> reps{m2(p, 1, 0, p)};
    for (std::int64_t a = 0; a < p; ++a) reps.push_back(m2(p, p, a, 1));
    const HeckeQ e1 = epsilon_embed(t_op(2, p, 1));
    EXPECT_EQ(e1.terms(), from_list(2, p, reps).terms());
    EXPECT_TRUE(verify_left_invariant(e1, 5, 9));
  }
  EXPECT_THROW(epsilon_embed(u_op(2, 2, 1)), std::invalid_argument);
}

TEST(Gritsenko, DegreeOne) {
  for (std::int64_t p : {2, 3, 5}) EXPECT_EQ(u_op(1, p, 1).terms(), epsilon_embed(t_op(1, p, 1)).terms());
}

TEST(Gritsenko, Factorization) {
  for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{1, 2}, {2, 2}, {2, 3}, {2, 5}, {3, 2}, {3, 3}}) {
    const GritsenkoReport r = gritsenko_check(n, p);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_EQ(r.coefficient_ok.size(), static_cast<std::size_t>(n + 1));
    EXPECT_EQ(r.u_commute, n == 1);
  }
}

TEST(VLemma, ConstructionsCommuteAndTCoset) {
  for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{2, 2}, {2, 3}, {3, 2}, {3, 3}}) {
    const VLemmaReport r = v_lemma_check(n, p);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_EQ(r.t_coset_count, ipow(p, (n + 1) * n * (n - 1) / 6));
  }
}

TEST(HeckeAct, Examples) {
  const std::int64_t p = 3;
  SphericalOracle w(2, p);
  const GMatrix one = GMatrix::identity(2, p);
  std::mt19937_64 rng(5);
  const GMatrix g = rand_unipotent(rng, 2, p) * varpi_power({2, -1}, p) * rand_iwahori(rng, 2, p);
  EXPECT_EQ(hecke_act(HeckeQ::unit(2, p, HeckeKind::Parabolic, Rational(1)), w, g), w(g));
  EXPECT_EQ(hecke_act(v_op_block(2, p, 2), w, one), x(2, p, 0) * x(2, p, 1));
  const SymbolicScalar s1 = x(2, p, 0) + x(2, p, 1);
  EXPECT_EQ(hecke_act(u_op(2, p, 1), w, one), SymbolicScalar::qhalf_pow(2, p, -1) * s1 * CyclotomicNumber(p));
  EXPECT_EQ(hecke_act(u_op(2, p, 2), w, one), SymbolicScalar(2, p));
}

TEST(HeckeAct, CompatibleWithConvolution) {
  std::mt19937_64 rng(17);
  const std::int64_t p = 2;
  SphericalOracle w(2, p);
  const std::vector<HeckeQ> ops{u_op(2, p, 1), u_op(2, p, 2), v_op_block(2, p, 1), epsilon_embed(t_op(2, p, 1))};
  for (int t = 0; t < 6; ++t) {
    const GMatrix g = rand_unipotent(rng, 2, p) * varpi_power(rand_exponents(rng, 2, -2, 2), p) *
                      rand_weyl(rng, 2).matrix(p) * rand_iwahori(rng, 2, p);
    for (const auto& a : ops)
      for (const auto& b : ops) {
        auto inner = [&](const GMatrix& h) { return hecke_act(b, w, h); };
        EXPECT_EQ(hecke_act(a * b, w, g), hecke_act(a, inner, g));
      }
  }
}

TEST(HeckeAct, GroupedActionAndOracleAgree) {
  std::mt19937_64 rng(23);
  for (int n : {2, 3}) {
    const std::int64_t p = 3;
    SphericalOracle w(n, p);
    const HeckeQ T = v_op_block(n, p, 1) * u_op(n, p, n);
    for (int t = 0; t < 5; ++t) {
      const GMatrix g = rand_unipotent(rng, n, p) * varpi_power(rand_exponents(rng, n, -1, 2), p) *
                        rand_weyl(rng, n).matrix(p) * rand_iwahori(rng, n, p);
      EXPECT_EQ(w(g), spherical_eval(g));
      EXPECT_EQ(w.act(T, g), hecke_act(T, w, g));
      EXPECT_EQ(w.act(sym(T), g), hecke_act(sym(T), w, g));
    }
  }
}

TEST(Satake, Examples) {
  const std::int64_t p = 5;
  EXPECT_EQ(satake_eigenvalue(t_op(2, p, 0)), SymbolicScalar(2, p, CyclotomicNumber(1)));
  EXPECT_EQ(satake_eigenvalue(t_op(2, p, 1)), SymbolicScalar::qhalf_pow(2, p, 1) * (x(2, p, 0) + x(2, p, 1)));
  EXPECT_EQ(satake_eigenvalue(t_op(2, p, 2)), x(2, p, 0) * x(2, p, 1));
  EXPECT_EQ(satake_eigenvalue(t_op(3, 2, 3)), x(3, 2, 0) * x(3, 2, 1) * x(3, 2, 2));
  EXPECT_THROW(satake_eigenvalue(u_op(2, p, 1)), std::invalid_argument);
}

TEST(Satake, NotAnEigenvalueIsRejected) {
  HeckeQ lone(2, 2, HeckeKind::Spherical);
  lone.add(CosetRep::canonicalize(m2(2, 2, 0, 1)), Rational(1));
  EXPECT_THROW(satake_eigenvalue(lone), std::domain_error);
}

TEST(Satake, MorphismSymmetryAndRescaling) {
  for (auto [n, p] : std::vector<std::pair<int, std::int64_t>>{{1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
    const SatakeReport r = satake_check(n, p);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_EQ(r.uniform_rescaling, n == 1);
    ASSERT_EQ(r.display_qhalf_offset.size(), static_cast<std::size_t>(n));
    for (int nu = 1; nu <= n; ++nu) EXPECT_EQ(r.display_qhalf_offset[nu - 1], nu * (n - nu) - nu * (nu + 1));
  }
}

TEST(Modification, DegreeOneIsUnit) {
  const HeckeSym psi = modification_operator(1, 3, {});
  EXPECT_EQ(psi.size(), 1u);
  EXPECT_EQ(psi.terms().begin()->first.matrix(), GMatrix::identity(1, 3));
}

TEST(Modification, DegreeTwoEigenRelation) {
  for (std::int64_t p : {2, 3, 5}) {
    const EigenReport r = modification_eigen_check(2, p, 2);
    EXPECT_TRUE(r.pass) << r.to_json().dump();
    EXPECT_TRUE(r.nonvanishing);
  }
}

TEST(Modification, WrongRootsBreakTheRelation) {
  // lambda = x_1 without the qhalf^{n-1} factor is not a root of H_p.
  const int n = 2;
  const std::int64_t p = 3;
  const HeckeSym psi = modification_operator(n, p, {x(n, p, 0)});
  SphericalOracle w(n, p);
  const HeckeSym vpsi = sym(v_op_block(n, p, 1)) * psi;
  bool all = true;
  for (const auto& [e, om] : eigen_keys(n, 1)) {
    const GMatrix g = varpi_power(e, p) * om.matrix(p);
    all = all && w.act(vpsi, g) == x(n, p, 0) * w.act(psi, g);
  }
  EXPECT_FALSE(all);
}

TEST(Ordinarity, Examples) {
  const std::int64_t p = 3;
  KappaReport a = ordinarity_and_kappa(2, p, {{2, 0}, {5, 1}});
  EXPECT_TRUE(a.ordinary);
  EXPECT_EQ(a.kappa.exp, 0);
  EXPECT_TRUE(a.kappa_hat_unit);

  KappaReport b = ordinarity_and_kappa(3, p, {{1, 2}, {2, 0}, {7, 1}});
  EXPECT_TRUE(b.ordinary);
  EXPECT_EQ(b.order, (std::vector<int>{1, 2}));
  EXPECT_EQ(b.kappa.exp, 1);
  EXPECT_EQ(b.kappa.unit, Rational(4 * 7));
  EXPECT_EQ(b.kappa_hat.exp, 0);

  KappaReport c = ordinarity_and_kappa(2, p, {{1, Rational(1, 2)}, {1, Rational(1, 2)}});
  EXPECT_FALSE(c.ordinary);
  EXPECT_FALSE(c.kappa_hat_unit);

  // unit parts that hide a power of p are folded into the exponent
  KappaReport d = ordinarity_and_kappa(2, p, {{3, -1}, {1, 1}});
  EXPECT_TRUE(d.ordinary);
}
