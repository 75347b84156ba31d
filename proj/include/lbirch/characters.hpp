#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "lbirch/cyclotomic.hpp"
#include "lbirch/gmatrix.hpp"

namespace lbirch {

/// The standard additive character: psi(x) = exp(2 pi i {x}_p), {x}_p the
/// p-adic fractional part. Trivial exactly on Z_p.
Phase psi_phase(const Rational& x, std::int64_t p);
CyclotomicNumber psi_eval(const Rational& x, std::int64_t p);

/// prod_i psi(u_{i,i+1})^sign; throws if u is not upper unipotent.
CyclotomicNumber psi_unipotent(const GMatrix& u, int sign);

/// Generators of (Z/p^k)^x used for character tables: the smallest primitive
/// root for odd p; {-1, 5} for p = 2 (only -1 when k = 2, none when k <= 1).
std::vector<std::int64_t> unit_generators(std::int64_t p, int k);

/// A character of (Z/p^k)^x extended to Q_p^x by a free value at p.
/// Values are roots of unity of order dividing phi(p^k); exponents are
/// stored at that level.
class MultChar {
 public:
  MultChar(std::int64_t p, int k, std::vector<std::int64_t> images,
           CyclotomicNumber value_at_p = CyclotomicNumber(Rational(1)));

  std::int64_t prime() const { return p_; }
  /// Exponent k of the modulus p^k the character is defined on.
  int modulus_exponent() const { return k_; }
  std::int64_t modulus() const { return mod_; }
  /// Exact conductor exponent (<= k).
  int conductor() const { return cond_; }
  std::int64_t level() const { return level_; }
  const std::vector<std::int64_t>& images() const { return images_; }
  const CyclotomicNumber& value_at_p() const { return vp_; }
  MultChar with_value_at_p(const CyclotomicNumber& v) const;

  /// Exponent e with chi(x) = zeta_level^e for x a unit residue in [0, p^k);
  /// -1 for non-units.
  std::int64_t exponent(std::int64_t residue) const { return table_[static_cast<std::size_t>(residue)]; }
  /// chi on the unit part of x (x nonzero rational).
  Phase unit_phase(const Rational& x) const;
  CyclotomicNumber value(const Rational& x) const;

  MultChar conj() const;
  bool is_trivial() const;

  nlohmann::json to_json() const;

 private:
  std::int64_t p_;
  int k_;
  std::int64_t mod_;
  std::int64_t level_;
  std::vector<std::int64_t> gens_;
  std::vector<std::int64_t> images_;
  CyclotomicNumber vp_;
  std::vector<std::int64_t> table_;
  int cond_ = 0;
};

/// All characters of conductor exactly p^m, value at p equal to 1. Deterministic order.
std::vector<MultChar> enumerate_chars(std::int64_t p, int m);
/// All characters of (Z/p^k)^x (any conductor), deterministic order.
std::vector<MultChar> enumerate_all_chars(std::int64_t p, int k);

/// G(chi) = sum_{x mod p^m, unit} chi(x) psi(x / p^m), m the conductor (>= 1).
CyclotomicNumber gauss_sum(const MultChar& chi);

/// sum over units x mod p^L of chi(x) psi(x/g), with L = max(m, val g) when
/// L < 0 is passed. g must be a nonzero element of Z_p.
CyclotomicNumber twisted_sum(const MultChar& chi, const Rational& g, int L = -1);
/// The closed form p^{L-h} chi(g/f) G(chi) when val g = m, else 0 (h = max(m, val g)).
CyclotomicNumber twisted_sum_closed(const MultChar& chi, const Rational& g, int L = -1);

}  // namespace lbirch
