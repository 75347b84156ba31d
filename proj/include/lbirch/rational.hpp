#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include <gmpxx.h>

namespace lbirch {

/// Exact rational number. GMP normalizes after every operation, so equality
/// is structural.
using Rational = mpq_class;
using Integer = mpz_class;

/// Valuation of zero.
inline constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();

std::int64_t valuation(const Integer& x, std::int64_t p);
std::int64_t valuation(const Rational& x, std::int64_t p);

/// p^k for k >= 0 as a machine integer; throws on overflow.
std::int64_t ipow(std::int64_t p, int k);

/// p^k as an exact rational, k of any sign.
Rational rpow(std::int64_t p, std::int64_t k);

/// Residue of x modulo p^k for x in Z_(p) (denominator prime to p).
/// Returns a value in [0, p^k).
std::int64_t residue_mod(const Rational& x, std::int64_t p, int k);

/// Canonical representative of the class x + p^c Z_p: the unique element of
/// Z[1/p] in [0, p^c) congruent to x. c may be negative.
Rational reduce_mod_power(const Rational& x, std::int64_t p, std::int64_t c);

/// Fractional part of x in Q_p / Z_p, as a rational in [0, 1) whose
/// denominator is a power of p.
Rational padic_fraction(const Rational& x, std::int64_t p);

/// x / p^{val(x)}: the p-unit part of a nonzero rational.
Rational unit_part(const Rational& x, std::int64_t p);

bool is_prime(std::int64_t p);

std::string to_string(const Rational& x);

}  // namespace lbirch
