#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "lbirch/padic.hpp"
#include "lbirch/rational.hpp"

namespace lbirch {

/// Dense n x n matrix over Q, read as a matrix over Q_p for a fixed prime.
/// Indices are 0-based. n = 0 is allowed (the empty matrix, determinant 1).
class GMatrix {
 public:
  GMatrix() = default;
  GMatrix(int n, std::int64_t p) : n_(n), p_(p), a_(static_cast<std::size_t>(n) * n, Rational(0)) {}
  GMatrix(std::int64_t p, const std::vector<std::vector<Rational>>& rows);

  static GMatrix identity(int n, std::int64_t p);
  static GMatrix diagonal(std::int64_t p, const std::vector<Rational>& d);

  int n() const { return n_; }
  std::int64_t prime() const { return p_; }

  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  PAdicRational padic(int i, int j) const { return {(*this)(i, j), p_}; }
  std::int64_t val(int i, int j) const { return valuation((*this)(i, j), p_); }

  friend GMatrix operator*(const GMatrix& a, const GMatrix& b);
  friend GMatrix operator+(const GMatrix& a, const GMatrix& b);
  friend GMatrix operator-(const GMatrix& a, const GMatrix& b);
  GMatrix scaled(const Rational& c) const;
  friend bool operator==(const GMatrix& a, const GMatrix& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  GMatrix transpose() const;
  Rational det() const;
  /// Throws std::domain_error when singular.
  GMatrix inverse() const;
  bool is_invertible() const { return det() != 0; }

  /// Minimal valuation of all entries (kInfiniteValuation for the zero matrix).
  std::int64_t min_val() const;

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  int n_ = 0;
  std::int64_t p_ = 2;
  std::vector<Rational> a_;
};

/// Block embedding g -> diag(g, 1_{m-n}).
GMatrix embed(const GMatrix& g, int m);

/// Top-left (n-1) x (n-1) block.
GMatrix project(const GMatrix& g);

/// Element of the Weyl group, stored as the associated permutation sigma
/// (0-based): omega has a 1 at (i, sigma(i)), so (omega a omega^-1)_ii = a_sigma(i).
class WeylElement {
 public:
  WeylElement() = default;
  explicit WeylElement(std::vector<int> sigma);

  static WeylElement identity(int n);
  static WeylElement longest(int n);
  static std::vector<WeylElement> all(int n);
  /// Recover the Weyl element of a permutation matrix; throws otherwise.
  static WeylElement from_matrix(const GMatrix& m);

  int n() const { return static_cast<int>(sigma_.size()); }
  const std::vector<int>& sigma() const { return sigma_; }
  int operator[](int i) const { return sigma_[static_cast<std::size_t>(i)]; }
  bool is_identity() const;

  GMatrix matrix(std::int64_t p) const;
  /// Matrix product omega1 * omega2.
  friend WeylElement operator*(const WeylElement& a, const WeylElement& b);
  WeylElement inverse() const;
  int length() const;
  friend bool operator==(const WeylElement& a, const WeylElement& b) = default;
  friend auto operator<=>(const WeylElement& a, const WeylElement& b) = default;

  std::string to_string() const;

 private:
  std::vector<int> sigma_;
};

/// The permutation sigma attached to omega, and back.
std::vector<int> weyl_to_perm(const WeylElement& w);
WeylElement perm_to_weyl(const std::vector<int>& sigma);

enum class SpecialKind { D, C, A, Atilde, B, E, EinvDisplayed, BinvDisplayed, w, h, t, hf };

SpecialKind special_kind_from_string(const std::string& s);

/// Special matrices of size n (1-based formulas as usually displayed).
/// For h, t and h^(f) the size n is the full size, so h carries w_{n-1}.
/// f must be a nonzero non-unit for f-dependent kinds.
GMatrix special_matrix(SpecialKind kind, int n, const Rational& f, std::int64_t p);

/// phi_n = (f^-n, ..., f^-1)^t.
std::vector<Rational> phi_vector(int n, const Rational& f);
/// lambda_n(g) = last row of g dotted with phi_n.
Rational lambda_n(const GMatrix& g, const Rational& f);

GMatrix eps_matrix(int n, const Rational& x, std::int64_t p);
/// diag(p^{n-1}, ..., p, 1).
GMatrix t_p_matrix(int n, std::int64_t p);
/// Identity with -1 in slot i (1-based).
GMatrix d_matrix(int n, int i, std::int64_t p);
/// diag(p^e_1, ..., p^e_n).
GMatrix varpi_power(const std::vector<std::int64_t>& e, std::int64_t p);

enum class Subgroup { GLnZp, Iwahori, Unipotent, Borel, J };

/// For J, membership in the kernel of reduction mod p^{m*l}.
bool membership(const GMatrix& g, Subgroup s, int l = 0, int m = 0);

struct IdentityCheck {
  std::string name;
  bool pass;
};

/// The matrix relations between B, C, D, E, A, h^(f) and w at size n.
std::vector<IdentityCheck> verify_matrix_identities(int n, const Rational& f, std::int64_t p);

}  // namespace lbirch
