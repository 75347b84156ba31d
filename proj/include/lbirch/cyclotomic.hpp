#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "lbirch/rational.hpp"

namespace lbirch {

std::int64_t euler_phi(std::int64_t n);
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Coefficients (low degree first) of the N-th cyclotomic polynomial.
/// Computed once per N and cached; safe to call concurrently.
const std::vector<Rational>& cyclotomic_polynomial(std::int64_t n);

/// Exact element of Q(zeta_N), stored as a polynomial in zeta_N of degree
/// < phi(N) reduced modulo the N-th cyclotomic polynomial.
///
/// Binary operations lift both operands to the lcm of their levels. Equality
/// compares at the common level, so zeta_8^2 == zeta_4.
class CyclotomicNumber {
 public:
  CyclotomicNumber() : CyclotomicNumber(Rational(0)) {}
  CyclotomicNumber(const Rational& q);  // NOLINT: rationals embed at level 1
  CyclotomicNumber(long q) : CyclotomicNumber(Rational(q)) {}  // NOLINT
  CyclotomicNumber(int q) : CyclotomicNumber(Rational(q)) {}   // NOLINT

  /// The zero element at level N.
  static CyclotomicNumber zero_at(std::int64_t level);

  /// zeta_N^k.
  static CyclotomicNumber root_of_unity(std::int64_t n, std::int64_t k);

  /// sum_a counts[a] zeta_N^a for a vector of length N.
  static CyclotomicNumber from_power_sums(std::int64_t n, const std::vector<Rational>& counts);
  static CyclotomicNumber from_power_sums(std::int64_t n, const std::vector<std::int64_t>& counts);

  std::int64_t level() const { return level_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  /// Throws unless is_rational().
  Rational rational_value() const;

  CyclotomicNumber lifted(std::int64_t new_level) const;

  /// The automorphism zeta -> zeta^{-1} (complex conjugation).
  CyclotomicNumber conj() const;
  /// zeta -> zeta^a for a prime to the level.
  CyclotomicNumber galois(std::int64_t a) const;

  CyclotomicNumber inverse() const;
  CyclotomicNumber pow(std::int64_t k) const;

  /// Field norm down to Q at the stored level.
  Rational norm() const;

  /// Valuation extending val_p, normalized so val_p(p) = 1. Needs a p-power
  /// level unless the value is rational; throws on zero.
  Rational p_valuation(std::int64_t p) const;

  CyclotomicNumber& operator+=(const CyclotomicNumber& o);
  CyclotomicNumber& operator-=(const CyclotomicNumber& o);
  CyclotomicNumber& operator*=(const CyclotomicNumber& o);

  friend CyclotomicNumber operator+(CyclotomicNumber a, const CyclotomicNumber& b) { return a += b; }
  friend CyclotomicNumber operator-(CyclotomicNumber a, const CyclotomicNumber& b) { return a -= b; }
  friend CyclotomicNumber operator*(CyclotomicNumber a, const CyclotomicNumber& b) { return a *= b; }
  CyclotomicNumber operator-() const;
  friend CyclotomicNumber operator/(const CyclotomicNumber& a, const CyclotomicNumber& b) {
    return a * b.inverse();
  }

  friend bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b);

  std::string to_string() const;
  nlohmann::json to_json() const;
  static CyclotomicNumber from_json(const nlohmann::json& j);

 private:
  /// Reduce a polynomial of arbitrary length (indices taken mod level first).
  static std::vector<Rational> reduce(std::int64_t level, std::vector<Rational> poly);

  std::int64_t level_;
  std::vector<Rational> c_;
};

/// A root of unity exp(2 pi i num/den), stored as a reduced fraction in Q/Z.
struct Phase {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Phase make(std::int64_t num, std::int64_t den);
  /// Phase of a rational t in [0,1); the denominator must fit in 63 bits.
  static Phase of(const Rational& t);
  Phase operator+(const Phase& o) const;
  Phase operator-() const { return make(-num, den); }
  bool operator==(const Phase& o) const = default;
  bool is_one() const { return num == 0; }
  CyclotomicNumber value() const { return CyclotomicNumber::root_of_unity(den, num); }
};

/// Exact sum of roots of unity with integer multiplicities. The level grows
/// to the lcm of all denominators seen. Addition of two sums is commutative
/// and exact, so reductions are order independent.
class RootSum {
 public:
  RootSum() = default;
  void add(const Phase& ph, std::int64_t mult = 1);
  void merge(const RootSum& o);
  bool empty() const { return counts_.empty(); }
  std::int64_t level() const { return level_; }
  CyclotomicNumber value() const;

 private:
  void grow(std::int64_t new_level);
  std::int64_t level_ = 1;
  std::vector<std::int64_t> counts_;
};

}  // namespace lbirch
