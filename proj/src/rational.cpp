#include "lbirch/rational.hpp"

#include <stdexcept>

namespace lbirch {

std::int64_t valuation(const Integer& x, std::int64_t p) {
  if (x == 0) return kInfiniteValuation;
  Integer rest;
  Integer prime(static_cast<unsigned long>(p));
  return static_cast<std::int64_t>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t()));
}

std::int64_t valuation(const Rational& x, std::int64_t p) {
  if (x == 0) return kInfiniteValuation;
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

std::int64_t ipow(std::int64_t p, int k) {
  if (k < 0) throw std::domain_error("ipow: negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(r, p, &r)) throw std::overflow_error("ipow: overflow");
  }
  return r;
}

Rational rpow(std::int64_t p, std::int64_t k) {
  Integer base(static_cast<unsigned long>(p));
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k < 0 ? -k : k));
  if (k >= 0) return Rational(r);
  return Rational(Integer(1), r);
}

std::int64_t residue_mod(const Rational& x, std::int64_t p, int k) {
  const std::int64_t mod = ipow(p, k);
  if (mod == 1) return 0;
  Integer m(static_cast<long>(mod));
  Integer num = x.get_num() % m;
  Integer den = x.get_den() % m;
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("residue_mod: denominator divisible by p");
  Integer r = (num * inv) % m;
  if (r < 0) r += m;
  return r.get_si();
}

Rational reduce_mod_power(const Rational& x, std::int64_t p, std::int64_t c) {
  const std::int64_t v = valuation(x, p);
  if (v >= c) return Rational(0);
  // Shift so the class becomes integral: y = x p^k in Z_(p), modulus p^{c+k}.
  const std::int64_t k = v < 0 ? -v : 0;
  Rational y = x * rpow(p, k);
  Integer mod = rpow(p, c + k).get_num();
  Integer inv;
  Integer den = y.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw std::domain_error("reduce_mod_power: bad denominator");
  Integer r = (y.get_num() * inv) % mod;
  if (r < 0) r += mod;
  Rational out(r, rpow(p, k).get_num());
  out.canonicalize();
  return out;
}

Rational padic_fraction(const Rational& x, std::int64_t p) { return reduce_mod_power(x, p, 0); }

Rational unit_part(const Rational& x, std::int64_t p) {
  if (x == 0) throw std::domain_error("unit_part of zero");
  return x * rpow(p, -valuation(x, p));
}

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace lbirch
