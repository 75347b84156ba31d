#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"

#include "lbirch/characters.hpp"
#include "lbirch/cyclotomic.hpp"
#include "lbirch/hecke.hpp"
#include "lbirch/rational.hpp"

namespace lbirch {

/// A distribution on Z_p^x stored at levels 1..depth: level m holds one
/// exact value per unit class mod p^m.
class PAdicDistribution {
 public:
  PAdicDistribution(std::int64_t p, int depth);

  std::int64_t prime() const { return p_; }
  int depth() const { return depth_; }
  std::int64_t modulus(int m) const { return ipow(p_, m); }

  /// Unit residues mod p^m in increasing order.
  std::vector<std::int64_t> units(int m) const;

  const CyclotomicNumber& at(int m, std::int64_t residue) const;
  void set(int m, std::int64_t residue, CyclotomicNumber v);

  /// Recompute levels below m by summing over lifts.
  void fill_below(int m);

  /// Level-wise rescaling mu_m -> f(m) mu_m.
  PAdicDistribution scaled_by_level(const std::function<CyclotomicNumber(int)>& f) const;

  friend bool operator==(const PAdicDistribution& a, const PAdicDistribution& b);

  /// {p, depth, levels: [{m, values: {residue: scalar}}]}
  nlohmann::json to_json() const;
  static PAdicDistribution from_json(const nlohmann::json& j);

 private:
  void check_slot(int m, std::int64_t residue) const;

  std::int64_t p_;
  int depth_;
  std::vector<std::vector<CyclotomicNumber>> v_;  // v_[m-1][residue]; non-units stay zero
};

PAdicDistribution dirac_distribution(std::int64_t p, int depth, std::int64_t a = 1);
PAdicDistribution haar_distribution(std::int64_t p, int depth);
/// Integer values at the top level drawn from a seeded generator, summed down.
PAdicDistribution random_distribution(std::int64_t p, int depth, std::uint64_t seed, int bound = 9);

struct RelationResult {
  bool pass = true;
  int level = 0;  // first failing level m (mu_m vs lifts at m+1)
  std::int64_t residue = 0;
  CyclotomicNumber stored;
  CyclotomicNumber lifted_sum;
  nlohmann::json to_json() const;
};

/// Exact check of mu_m(x) = sum_a mu_{m+1}(x + a p^m) for every adjacent pair.
RelationResult check_relation(const PAdicDistribution& mu);

/// sum over units x mod p^m of chi(x) mu_m(x).
CyclotomicNumber integrate_character_at(const PAdicDistribution& mu, const MultChar& chi, int m);

/// The integral at every level from max(conductor, 1) to the depth; throws
/// logic_error if they disagree and domain_error if the depth is too small.
CyclotomicNumber integrate_character(const PAdicDistribution& mu, const MultChar& chi);

/// Integrals of all characters of (Z/p^M)^x against the top level, in the
/// order of enumerate_all_chars(p, depth).
std::vector<CyclotomicNumber> fourier_transform(const PAdicDistribution& mu);
/// Same, one character at a time. Kept as the reference for the bulk kernel.
std::vector<CyclotomicNumber> fourier_transform_reference(const PAdicDistribution& mu);

/// The level-M distribution with prescribed integrals (targets indexed as
/// enumerate_all_chars(p, M)), summed down to level 1.
PAdicDistribution fourier_inverse(std::int64_t p, int M, const std::vector<CyclotomicNumber>& targets);
PAdicDistribution fourier_inverse_reference(std::int64_t p, int M, const std::vector<CyclotomicNumber>& targets);

struct OrderEstimate {
  bool bounded = false;
  Rational order = 0;
  std::vector<std::optional<Rational>> floors;  // beta_m, m = 1..depth; empty if mu_m = 0
  nlohmann::json to_json() const;
};

/// beta_m = min val mu_m(x). Order h is the least h >= 0 with
/// beta_m >= beta_{m0} - h (m - m0) for m > m0, m0 the first nonzero level.
OrderEstimate order_estimate(const PAdicDistribution& mu);

struct InterpolationConstants {
  int n = 0;
  std::int64_t p = 0;
  int c = 0;
  PPower kappa_lambda_hat;
  PPower kappa_alpha_hat;
  PPower kappa;      // kappa(f), f = p^c
  PPower kappa_hat;  // kappa-hat(f)
  Rational euler_factor;  // prod_{nu=1}^{n-1} (1 - p^{-nu})^{-1}
  CyclotomicNumber delta;  // w1 v1 times the Euler factor
  bool ordinary = false;
  nlohmann::json to_json() const;
};

/// Exponent [(n+1)n(n-1) + n(n-1)(n-2)]/6 of N(f) in kappa(f).
std::int64_t kappa_exponent(int n);

/// roots_pi: Hecke roots of the GL_n form; roots_sigma: of the GL_{n-1} form.
InterpolationConstants interpolation_constants(int n, std::int64_t p, int c, const std::vector<PPower>& roots_pi,
                                               const std::vector<PPower>& roots_sigma, const CyclotomicNumber& w1,
                                               const CyclotomicNumber& v1);

struct IndexReport {
  int n = 0;
  std::int64_t p = 0;
  std::int64_t enumerated = 0;  // (U_n(Z/p^n) : t U_n t^{-1})
  std::int64_t expected = 0;    // p^{(n+1)n(n-1)/6}
  std::int64_t t_cosets = 0;    // size of the coset list of K_B t K_B
  bool pass = false;
  nlohmann::json to_json() const;
};

/// Counts upper unipotent u mod p^n with p^{j-i} | u_ij. Enumeration is
/// limited to p^{n n(n-1)/2} <= 2^26 matrices.
IndexReport index_formula_check(int n, std::int64_t p);

/// Distribution built from a synthetic period oracle: seeded integer periods
/// at the top level (a unit at the class of 1, multiples of p elsewhere),
/// periods at level c obtained from level c+1 by the Hecke recursion
/// P_c(x) = K^{-1} [U_n:U_n^t][U_{n-1}:U_{n-1}^t] sum_a P_{c+1}(x + a p^c)
/// with K = kappa-hat_lambda kappa-hat_alpha, and mu_c = kappa(p^c) P_c.
struct SyntheticMeasure {
  PAdicDistribution mu;
  PAdicDistribution periods;
  InterpolationConstants constants;  // at c = 1
  std::int64_t coset_factor = 0;
};

SyntheticMeasure synthetic_measure(int n, std::int64_t p, int depth, const std::vector<PPower>& roots_pi,
                                   const std::vector<PPower>& roots_sigma, std::uint64_t seed);

}  // namespace lbirch
