#pragma once

#include <cstdint>
#include <string>

#include "lbirch/rational.hpp"

namespace lbirch {

/// Exact element of Z[1/p] (or any rational) viewed in Q_p, with its
/// valuation cached.
class PAdicRational {
 public:
  PAdicRational() = default;
  PAdicRational(const Rational& v, std::int64_t p) : value_(v), p_(p), val_(valuation(v, p)) {}

  const Rational& value() const { return value_; }
  std::int64_t prime() const { return p_; }
  std::int64_t val() const { return val_; }
  bool is_zero() const { return val_ == kInfiniteValuation; }
  bool is_unit() const { return val_ == 0; }

  friend PAdicRational operator+(const PAdicRational& a, const PAdicRational& b) {
    return {a.value_ + b.value_, a.p_};
  }
  friend PAdicRational operator-(const PAdicRational& a, const PAdicRational& b) {
    return {a.value_ - b.value_, a.p_};
  }
  friend PAdicRational operator*(const PAdicRational& a, const PAdicRational& b) {
    PAdicRational r;
    r.value_ = a.value_ * b.value_;
    r.p_ = a.p_;
    r.val_ = (a.is_zero() || b.is_zero()) ? kInfiniteValuation : a.val_ + b.val_;
    return r;
  }
  PAdicRational inverse() const;
  friend bool operator==(const PAdicRational& a, const PAdicRational& b) { return a.value_ == b.value_; }

  std::string to_string() const { return value_.get_str(); }

 private:
  Rational value_ = 0;
  std::int64_t p_ = 2;
  std::int64_t val_ = kInfiniteValuation;
};

inline std::int64_t valuation(const PAdicRational& x) { return x.val(); }

}  // namespace lbirch
