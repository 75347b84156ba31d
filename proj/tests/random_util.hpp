#pragma once

#include <random>

#include "lbirch/gmatrix.hpp"

namespace lbirch::testing {

inline Rational rand_padic_integer(std::mt19937_64& rng, std::int64_t p, int digits) {
  std::uniform_int_distribution<long> d(0, ipow(p, digits) - 1);
  return Rational(d(rng));
}

inline Rational rand_unit(std::mt19937_64& rng, std::int64_t p, int digits) {
  for (;;) {
    Rational x = rand_padic_integer(rng, p, digits);
    if (valuation(x, p) == 0) return std::uniform_int_distribution<int>(0, 1)(rng) ? x : Rational(-x);
  }
}

/// Element of Z[1/p] with valuation >= lo.
inline Rational rand_zp_inv(std::mt19937_64& rng, std::int64_t p, int lo, int digits) {
  Rational x = rand_padic_integer(rng, p, digits);
  return x * rpow(p, lo);
}

inline GMatrix rand_iwahori(std::mt19937_64& rng, int n, std::int64_t p, int digits = 3) {
  GMatrix s(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) s(i, j) = rand_unit(rng, p, digits);
      else if (i > j) s(i, j) = rand_padic_integer(rng, p, digits) * p;
      else s(i, j) = rand_padic_integer(rng, p, digits);
    }
  return s;
}

inline GMatrix rand_unipotent(std::mt19937_64& rng, int n, std::int64_t p, int lo = -3, int digits = 5) {
  GMatrix u = GMatrix::identity(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) u(i, j) = rand_zp_inv(rng, p, lo, digits);
  return u;
}

inline WeylElement rand_weyl(std::mt19937_64& rng, int n) {
  auto all = WeylElement::all(n);
  return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

inline std::vector<std::int64_t> rand_exponents(std::mt19937_64& rng, int n, int lo = -3, int hi = 3) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(n));
  for (auto& x : e) x = std::uniform_int_distribution<int>(lo, hi)(rng);
  return e;
}

}  // namespace lbirch::testing
