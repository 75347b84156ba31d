#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "lbirch/rational.hpp"

namespace lbirch {

/// Element of Z / p^k Z with representative in [0, p^k).
class ResidueClass {
 public:
  ResidueClass(std::int64_t rep, std::int64_t p, int k) : p_(p), k_(k), mod_(ipow(p, k)) {
    rep_ = ((rep % mod_) + mod_) % mod_;
  }
  static ResidueClass of(const Rational& x, std::int64_t p, int k) {
    return ResidueClass(residue_mod(x, p, k), p, k);
  }

  std::int64_t rep() const { return rep_; }
  std::int64_t modulus() const { return mod_; }
  std::int64_t prime() const { return p_; }
  int exponent() const { return k_; }
  bool is_unit() const { return mod_ == 1 || rep_ % p_ != 0; }

  ResidueClass operator+(const ResidueClass& o) const { check(o); return {rep_ + o.rep_, p_, k_}; }
  ResidueClass operator-(const ResidueClass& o) const { check(o); return {rep_ - o.rep_, p_, k_}; }
  ResidueClass operator-() const { return {-rep_, p_, k_}; }
  ResidueClass operator*(const ResidueClass& o) const {
    check(o);
    return {static_cast<std::int64_t>((static_cast<__int128>(rep_) * o.rep_) % mod_), p_, k_};
  }
  ResidueClass inverse() const {
    if (!is_unit()) throw std::domain_error("ResidueClass: inverse of non-unit");
    // Extended Euclid.
    std::int64_t a = rep_, m = mod_, x0 = 1, x1 = 0;
    while (m != 0) {
      std::int64_t q = a / m;
      std::int64_t t = a - q * m; a = m; m = t;
      t = x0 - q * x1; x0 = x1; x1 = t;
    }
    return {x0, p_, k_};
  }
  bool operator==(const ResidueClass& o) const { return mod_ == o.mod_ && rep_ == o.rep_; }

 private:
  void check(const ResidueClass& o) const {
    if (o.mod_ != mod_) throw std::invalid_argument("ResidueClass: modulus mismatch");
  }
  std::int64_t p_;
  int k_;
  std::int64_t mod_;
  std::int64_t rep_;
};

}  // namespace lbirch
