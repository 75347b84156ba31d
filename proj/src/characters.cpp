#include "lbirch/characters.hpp"

#include <stdexcept>

namespace lbirch {

Phase psi_phase(const Rational& x, std::int64_t p) { return Phase::of(padic_fraction(x, p)); }

CyclotomicNumber psi_eval(const Rational& x, std::int64_t p) { return psi_phase(x, p).value(); }

CyclotomicNumber psi_unipotent(const GMatrix& u, int sign) {
  if (!membership(u, Subgroup::Unipotent)) throw std::invalid_argument("psi_unipotent: not upper unipotent");
  Phase total;
  for (int i = 0; i + 1 < u.n(); ++i) total = total + psi_phase(u(i, i + 1), u.prime());
  return (sign >= 0 ? total : -total).value();
}

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

std::int64_t mult_order(std::int64_t g, std::int64_t mod) {
  if (mod == 1) return 1;
  std::int64_t x = g % mod, k = 1;
  while (x != 1) {
    x = mulmod(x, g, mod);
    ++k;
  }
  return k;
}

std::int64_t posmod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

}  // namespace

std::vector<std::int64_t> unit_generators(std::int64_t p, int k) {
  if (k <= 0) return {};
  const std::int64_t mod = ipow(p, k);
  if (p == 2) {
    if (k == 1) return {};
    if (k == 2) return {mod - 1};
    return {mod - 1, 5};
  }
  const std::int64_t phi = mod / p * (p - 1);
  for (std::int64_t g = 2; g < mod; ++g)
    if (g % p != 0 && mult_order(g, mod) == phi) return {g};
  throw std::logic_error("no primitive root found");
}

MultChar::MultChar(std::int64_t p, int k, std::vector<std::int64_t> images, CyclotomicNumber value_at_p)
    : p_(p), k_(k), mod_(ipow(p, k)), level_(k == 0 ? 1 : ipow(p, k) / p * (p - 1)),
      gens_(unit_generators(p, k)), images_(std::move(images)), vp_(std::move(value_at_p)) {
  if (!is_prime(p)) throw std::invalid_argument("MultChar: p must be prime");
  if (images_.size() != gens_.size()) throw std::invalid_argument("MultChar: wrong number of generator images");
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    const std::int64_t ord = mult_order(gens_[i], mod_);
    images_[i] = posmod(images_[i], level_);
    if (mulmod(images_[i], ord, level_) != 0) throw std::invalid_argument("MultChar: image order incompatible");
  }
  // Fill the table by walking the (at most two) generator cycles.
  table_.assign(static_cast<std::size_t>(mod_), -1);
  if (mod_ == 1) {
    table_[0] = 0;
  } else if (gens_.empty()) {
    // (Z/2)^x is trivial
    table_[1] = 0;
  } else {
    const std::int64_t o0 = mult_order(gens_[0], mod_);
    const std::int64_t o1 = gens_.size() > 1 ? mult_order(gens_[1], mod_) : 1;
    std::int64_t x0 = 1;
    for (std::int64_t a = 0; a < o0; ++a) {
      std::int64_t x = x0;
      for (std::int64_t b = 0; b < o1; ++b) {
        std::int64_t e = a * images_[0] + (gens_.size() > 1 ? b * images_[1] : 0);
        table_[static_cast<std::size_t>(x)] = posmod(e, level_);
        if (gens_.size() > 1) x = mulmod(x, gens_[1], mod_);
      }
      x0 = mulmod(x0, gens_[0], mod_);
    }
  }
  // Conductor: smallest c with chi trivial on 1 + p^c (c >= 1 for p odd or for p = 2 with c >= 2).
  cond_ = k_;
  while (cond_ > 0) {
    const std::int64_t step = ipow(p_, cond_ - 1);
    bool trivial = true;
    for (std::int64_t x = 1; x < mod_ && trivial; x += step)
      if (table_[static_cast<std::size_t>(x)] != 0) trivial = false;
    if (!trivial) break;
    --cond_;
  }
  // A character trivial on 1 + 2Z_2 is trivial, so conductor 1 never occurs for p = 2.
  if (p_ == 2 && cond_ == 1) cond_ = 0;
}

MultChar MultChar::with_value_at_p(const CyclotomicNumber& v) const {
  MultChar c = *this;
  c.vp_ = v;
  return c;
}

Phase MultChar::unit_phase(const Rational& x) const {
  const std::int64_t r = residue_mod(unit_part(x, p_), p_, k_);
  const std::int64_t e = exponent(r);
  if (e < 0) throw std::logic_error("MultChar: unit part is not a unit");
  return Phase::make(e, level_);
}

CyclotomicNumber MultChar::value(const Rational& x) const {
  if (x == 0) throw std::domain_error("MultChar: value at zero");
  return vp_.pow(valuation(x, p_)) * unit_phase(x).value();
}

MultChar MultChar::conj() const {
  std::vector<std::int64_t> im = images_;
  for (auto& i : im) i = posmod(-i, level_);
  return MultChar(p_, k_, im, vp_.inverse());
}

bool MultChar::is_trivial() const {
  for (auto i : images_)
    if (i != 0) return false;
  return true;
}

nlohmann::json MultChar::to_json() const {
  return {{"p", p_},           {"m", cond_},      {"modulus_exponent", k_},
          {"generators", gens_}, {"images", images_}, {"level", level_},
          {"value_at_p", vp_.to_json()}};
}

std::vector<MultChar> enumerate_all_chars(std::int64_t p, int k) {
  const auto gens = unit_generators(p, k);
  const std::int64_t mod = ipow(p, k);
  const std::int64_t level = k == 0 ? 1 : mod / p * (p - 1);
  std::vector<MultChar> out;
  if (gens.empty()) {
    out.emplace_back(p, k, std::vector<std::int64_t>{});
    return out;
  }
  const std::int64_t o0 = mult_order(gens[0], mod);
  const std::int64_t o1 = gens.size() > 1 ? mult_order(gens[1], mod) : 1;
  for (std::int64_t a = 0; a < o0; ++a)
    for (std::int64_t b = 0; b < o1; ++b) {
      std::vector<std::int64_t> im{a * (level / o0)};
      if (gens.size() > 1) im.push_back(b * (level / o1));
      out.emplace_back(p, k, im);
    }
  return out;
}

std::vector<MultChar> enumerate_chars(std::int64_t p, int m) {
  if (m < 1) throw std::invalid_argument("enumerate_chars: m must be >= 1");
  std::vector<MultChar> out;
  for (auto& c : enumerate_all_chars(p, m))
    if (c.conductor() == m) out.push_back(std::move(c));
  return out;
}

CyclotomicNumber gauss_sum(const MultChar& chi) {
  const int m = chi.conductor();
  if (m < 1) throw std::domain_error("gauss_sum: conductor must be nontrivial");
  const std::int64_t p = chi.prime();
  const std::int64_t f = ipow(p, m);
  const std::int64_t K = chi.modulus();
  RootSum s;
  for (std::int64_t x = 1; x < f; ++x) {
    if (x % p == 0) continue;
    // chi is read off its own modulus; x < f <= K is a valid residue there.
    s.add(Phase::make(chi.exponent(x % K), chi.level()) + Phase::make(x, f));
  }
  return s.value();
}

CyclotomicNumber twisted_sum(const MultChar& chi, const Rational& g, int L) {
  const std::int64_t p = chi.prime();
  const std::int64_t vg = valuation(g, p);
  if (g == 0 || vg < 0) throw std::domain_error("twisted_sum: g must be a nonzero element of Z_p");
  const int m = chi.conductor();
  const int h = static_cast<int>(std::max<std::int64_t>(m, vg));
  if (L < 0) L = h;
  if (L < h) throw std::invalid_argument("twisted_sum: summation level below h");
  if (m > chi.modulus_exponent()) throw std::logic_error("twisted_sum: conductor above modulus");
  const std::int64_t mod = ipow(p, L);
  const std::int64_t K = chi.modulus();
  RootSum s;
  for (std::int64_t x = 1; x < mod; ++x) {
    if (x % p == 0) continue;
    s.add(Phase::make(chi.exponent(x % K), chi.level()) + psi_phase(Rational(x) / g, p));
  }
  return s.value();
}

CyclotomicNumber twisted_sum_closed(const MultChar& chi, const Rational& g, int L) {
  const std::int64_t p = chi.prime();
  const std::int64_t vg = valuation(g, p);
  const int m = chi.conductor();
  const int h = static_cast<int>(std::max<std::int64_t>(m, vg));
  if (L < 0) L = h;
  if (vg != m) return CyclotomicNumber(Rational(0));
  const Rational f = rpow(p, m);
  return CyclotomicNumber(rpow(p, L - h)) * chi.value(g / f) * gauss_sum(chi);
}

}  // namespace lbirch
