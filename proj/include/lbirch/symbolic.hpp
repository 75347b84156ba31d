#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "lbirch/cyclotomic.hpp"

namespace lbirch {

/// Exponent data of one Laurent monomial x^a * qhalf^h. Since qhalf^2 = p is
/// absorbed into the coefficient, h is 0 or 1.
struct Monomial {
  std::vector<int> x;
  int qhalf = 0;
  auto operator<=>(const Monomial&) const = default;
};

/// Laurent polynomial in x_1..x_n and a symbol qhalf with qhalf^2 = p, with
/// coefficients in cyclotomic fields (rationals embed at level 1).
class SymbolicScalar {
 public:
  SymbolicScalar() = default;
  SymbolicScalar(int nvars, std::int64_t p) : n_(nvars), p_(p) {}
  SymbolicScalar(int nvars, std::int64_t p, const CyclotomicNumber& c);

  static SymbolicScalar variable(int nvars, std::int64_t p, int i);
  /// qhalf^k for any integer k.
  static SymbolicScalar qhalf_pow(int nvars, std::int64_t p, std::int64_t k);
  static SymbolicScalar monomial(int nvars, std::int64_t p, const std::vector<int>& exps,
                                 const CyclotomicNumber& c = CyclotomicNumber(Rational(1)));

  int nvars() const { return n_; }
  std::int64_t prime() const { return p_; }
  const std::map<Monomial, CyclotomicNumber>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  SymbolicScalar& operator+=(const SymbolicScalar& o);
  SymbolicScalar& operator-=(const SymbolicScalar& o);
  SymbolicScalar& operator*=(const SymbolicScalar& o);
  SymbolicScalar& operator*=(const CyclotomicNumber& c);
  friend SymbolicScalar operator+(SymbolicScalar a, const SymbolicScalar& b) { return a += b; }
  friend SymbolicScalar operator-(SymbolicScalar a, const SymbolicScalar& b) { return a -= b; }
  friend SymbolicScalar operator*(SymbolicScalar a, const SymbolicScalar& b) { return a *= b; }
  friend SymbolicScalar operator*(SymbolicScalar a, const CyclotomicNumber& c) { return a *= c; }
  SymbolicScalar operator-() const;
  SymbolicScalar pow(int k) const;
  friend bool operator==(const SymbolicScalar& a, const SymbolicScalar& b);

  /// Substitute x_i -> vals[i] (nonzero for negative exponents). The result
  /// has no x dependence and keeps only the qhalf part.
  SymbolicScalar eval_x(const std::vector<CyclotomicNumber>& vals) const;

  /// Invariant under every permutation of x_1..x_n.
  bool is_symmetric() const;

  /// Divide by a single term c * x^a * qhalf^h.
  SymbolicScalar divided_by_monomial(const Monomial& m, const CyclotomicNumber& c) const;

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  void add_term(const Monomial& m, const CyclotomicNumber& c);
  void adopt(const SymbolicScalar& o);

  int n_ = 0;
  std::int64_t p_ = 0;
  std::map<Monomial, CyclotomicNumber> terms_;
};

}  // namespace lbirch
