#include "lbirch/cyclotomic.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lbirch {

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      while (n % d == 0) n /= d;
      r -= r / d;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return a / std::gcd(a, b) * b; }

namespace {

// Polynomial division of x^n - 1 by the product of Phi_d over proper divisors.
std::vector<Rational> compute_cyclotomic(std::int64_t n) {
  std::vector<Rational> num(static_cast<std::size_t>(n + 1), Rational(0));
  num[0] = -1;
  num[static_cast<std::size_t>(n)] = 1;
  for (std::int64_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const auto& div = cyclotomic_polynomial(d);
    // Exact division by a monic polynomial.
    const std::size_t dn = div.size() - 1;
    std::vector<Rational> q(num.size() - dn, Rational(0));
    for (std::size_t k = num.size() - 1; k + 1 > dn; --k) {
      Rational c = num[k];
      q[k - dn] = c;
      if (c != 0)
        for (std::size_t t = 0; t <= dn; ++t) num[k - dn + t] -= c * div[t];
      if (k == dn) break;
    }
    num = std::move(q);
  }
  return num;
}

}  // namespace

const std::vector<Rational>& cyclotomic_polynomial(std::int64_t n) {
  static std::mutex mu;
  static std::map<std::int64_t, std::unique_ptr<std::vector<Rational>>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;
  }
  if (n < 1) throw std::domain_error("cyclotomic_polynomial: level must be positive");
  auto poly = std::make_unique<std::vector<Rational>>(
      n == 1 ? std::vector<Rational>{Rational(-1), Rational(1)} : compute_cyclotomic(n));
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(n, std::move(poly));
  return *it->second;
}

CyclotomicNumber CyclotomicNumber::zero_at(std::int64_t level) {
  if (level < 1) throw std::domain_error("CyclotomicNumber: level must be positive");
  CyclotomicNumber out;
  out.level_ = level;
  out.c_.assign(static_cast<std::size_t>(euler_phi(level)), Rational(0));
  return out;
}

CyclotomicNumber::CyclotomicNumber(const Rational& q) : level_(1), c_{q} {}

std::vector<Rational> CyclotomicNumber::reduce(std::int64_t level, std::vector<Rational> poly) {
  const auto n = static_cast<std::size_t>(level);
  if (poly.size() > n) {
    for (std::size_t k = n; k < poly.size(); ++k)
      if (poly[k] != 0) poly[k % n] += poly[k];
    poly.resize(n);
  } else {
    poly.resize(n, Rational(0));
  }
  const auto& phi = cyclotomic_polynomial(level);
  const std::size_t d = phi.size() - 1;
  std::vector<std::size_t> support;  // cyclotomic polynomials are sparse for prime-power-rich levels
  for (std::size_t t = 0; t <= d; ++t)
    if (phi[t] != 0) support.push_back(t);
  for (std::size_t k = n - 1; k >= d && k < n; --k) {
    if (poly[k] == 0) {
      if (k == d) break;
      continue;
    }
    Rational c = poly[k];
    for (std::size_t t : support) poly[k - d + t] -= c * phi[t];
    if (k == d) break;
  }
  poly.resize(d);
  return poly;
}

CyclotomicNumber CyclotomicNumber::root_of_unity(std::int64_t n, std::int64_t k) {
  if (n < 1) throw std::domain_error("root_of_unity: N must be positive");
  std::int64_t e = ((k % n) + n) % n;
  std::vector<Rational> poly(static_cast<std::size_t>(n), Rational(0));
  poly[static_cast<std::size_t>(e)] = 1;
  CyclotomicNumber out = zero_at(n);
  out.c_ = reduce(n, std::move(poly));
  return out;
}

CyclotomicNumber CyclotomicNumber::from_power_sums(std::int64_t n, const std::vector<Rational>& counts) {
  CyclotomicNumber out = zero_at(n);
  out.c_ = reduce(n, counts);
  return out;
}

CyclotomicNumber CyclotomicNumber::from_power_sums(std::int64_t n, const std::vector<std::int64_t>& counts) {
  // Integer long division by the (monic, integral) cyclotomic polynomial;
  // falls back to rationals on overflow.
  if (n >= 1) {
    const auto len = static_cast<std::size_t>(n);
    std::vector<std::int64_t> poly(len, 0);
    bool ok = true;
    for (std::size_t k = 0; k < counts.size() && ok; ++k) ok = !__builtin_add_overflow(poly[k % len], counts[k], &poly[k % len]);
    const auto& phi = cyclotomic_polynomial(n);
    const std::size_t d = phi.size() - 1;
    std::vector<std::pair<std::size_t, std::int64_t>> support;
    for (std::size_t t = 0; t < d; ++t)
      if (phi[t] != 0) support.emplace_back(t, phi[t].get_num().get_si());
    for (std::size_t k = len - 1; ok && k >= d && k < len; --k) {
      const std::int64_t c = poly[k];
      if (c != 0) {
        poly[k] = 0;
        for (const auto& [t, f] : support) {
          std::int64_t prod = 0;
          if (__builtin_mul_overflow(c, f, &prod) || __builtin_sub_overflow(poly[k - d + t], prod, &poly[k - d + t])) {
            ok = false;
            break;
          }
        }
      }
      if (k == d) break;
    }
    if (ok) {
      CyclotomicNumber out = zero_at(n);
      for (std::size_t i = 0; i < d; ++i) out.c_[i] = Rational(static_cast<long>(poly[i]));
      return out;
    }
  }
  std::vector<Rational> poly(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) poly[i] = Rational(static_cast<long>(counts[i]));
  return from_power_sums(n, poly);
}

bool CyclotomicNumber::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool CyclotomicNumber::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

Rational CyclotomicNumber::rational_value() const {
  if (!is_rational()) throw std::domain_error("CyclotomicNumber is not rational");
  return c_.empty() ? Rational(0) : c_[0];
}

CyclotomicNumber CyclotomicNumber::lifted(std::int64_t new_level) const {
  if (new_level == level_) return *this;
  if (new_level % level_ != 0) throw std::domain_error("lifted: level does not divide target");
  const std::int64_t step = new_level / level_;
  std::vector<Rational> poly(static_cast<std::size_t>(new_level), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i)
    poly[static_cast<std::size_t>((static_cast<std::int64_t>(i) * step) % new_level)] += c_[i];
  CyclotomicNumber out = zero_at(new_level);
  out.c_ = reduce(new_level, std::move(poly));
  return out;
}

CyclotomicNumber CyclotomicNumber::galois(std::int64_t a) const {
  if (std::gcd(a, level_) != 1) throw std::domain_error("galois: exponent not a unit");
  std::vector<Rational> poly(static_cast<std::size_t>(level_), Rational(0));
  for (std::size_t i = 0; i < c_.size(); ++i) {
    std::int64_t e = ((static_cast<std::int64_t>(i) * a) % level_ + level_) % level_;
    poly[static_cast<std::size_t>(e)] += c_[i];
  }
  CyclotomicNumber out = zero_at(level_);
  out.c_ = reduce(level_, std::move(poly));
  return out;
}

CyclotomicNumber CyclotomicNumber::conj() const { return galois(level_ - 1 == 0 ? 1 : level_ - 1); }

namespace {

// Matrix of multiplication by x in the power basis (column j = x * zeta^j).
std::vector<std::vector<Rational>> multiplication_matrix(const CyclotomicNumber& x) {
  const std::size_t d = x.coeffs().size();
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d, Rational(0)));
  for (std::size_t j = 0; j < d; ++j) {
    auto col = x * CyclotomicNumber::root_of_unity(x.level(), static_cast<std::int64_t>(j));
    auto lifted = col.lifted(x.level());
    for (std::size_t i = 0; i < d; ++i) m[i][j] = lifted.coeffs()[i];
  }
  return m;
}

}  // namespace

CyclotomicNumber CyclotomicNumber::inverse() const {
  if (is_zero()) throw std::domain_error("CyclotomicNumber: inverse of zero");
  const std::size_t d = c_.size();
  auto m = multiplication_matrix(*this);
  std::vector<Rational> rhs(d, Rational(0));
  rhs[0] = 1;
  // Gauss-Jordan on [m | rhs].
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && m[piv][col] == 0) ++piv;
    if (piv == d) throw std::domain_error("CyclotomicNumber: singular multiplication map");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    Rational inv = 1 / m[col][col];
    for (std::size_t j = col; j < d; ++j) m[col][j] *= inv;
    rhs[col] *= inv;
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t j = col; j < d; ++j) m[r][j] -= f * m[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  CyclotomicNumber out = zero_at(level_);
  out.c_ = std::move(rhs);
  return out;
}

CyclotomicNumber CyclotomicNumber::pow(std::int64_t k) const {
  if (k < 0) return inverse().pow(-k);
  CyclotomicNumber result(Rational(1));
  CyclotomicNumber base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

Rational CyclotomicNumber::norm() const {
  auto m = multiplication_matrix(*this);
  const std::size_t d = m.size();
  Rational det = 1;
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && m[piv][col] == 0) ++piv;
    if (piv == d) return Rational(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < d; ++r) {
      if (m[r][col] == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (std::size_t j = col; j < d; ++j) m[r][j] -= f * m[col][j];
    }
  }
  return det;
}

Rational CyclotomicNumber::p_valuation(std::int64_t p) const {
  if (is_zero()) throw std::domain_error("p_valuation of zero");
  std::int64_t n = level_;
  while (n % p == 0) n /= p;
  if (n != 1) {
    if (!is_rational()) throw std::domain_error("p_valuation: level is not a power of p");
    return Rational(static_cast<long>(valuation(rational_value(), p)));
  }
  Rational v(static_cast<long>(valuation(norm(), p)), static_cast<long>(c_.size()));
  v.canonicalize();
  return v;
}

CyclotomicNumber& CyclotomicNumber::operator+=(const CyclotomicNumber& o) {
  if (o.level_ != level_) {
    const std::int64_t l = lcm64(level_, o.level_);
    if (l != level_) *this = lifted(l);
    if (l != o.level_) return *this += o.lifted(l);
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CyclotomicNumber& CyclotomicNumber::operator-=(const CyclotomicNumber& o) { return *this += -o; }

CyclotomicNumber CyclotomicNumber::operator-() const {
  CyclotomicNumber out = *this;
  for (auto& c : out.c_) c = -c;
  return out;
}

CyclotomicNumber& CyclotomicNumber::operator*=(const CyclotomicNumber& o) {
  if (o.level_ == 1) {
    for (auto& c : c_) c *= o.c_[0];
    return *this;
  }
  if (level_ == 1) {
    Rational s = c_[0];
    *this = o;
    for (auto& c : c_) c *= s;
    return *this;
  }
  const std::int64_t l = lcm64(level_, o.level_);
  const CyclotomicNumber a = lifted(l);
  const CyclotomicNumber b = o.lifted(l);
  std::vector<Rational> poly(static_cast<std::size_t>(l), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j] == 0) continue;
      poly[(i + j) % static_cast<std::size_t>(l)] += a.c_[i] * b.c_[j];
    }
  }
  level_ = l;
  c_ = reduce(l, std::move(poly));
  return *this;
}

bool operator==(const CyclotomicNumber& a, const CyclotomicNumber& b) {
  if (a.level_ == b.level_) return a.c_ == b.c_;
  const std::int64_t l = lcm64(a.level_, b.level_);
  return a.lifted(l).c_ == b.lifted(l).c_;
}

std::string CyclotomicNumber::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c_[i].get_str() << ")";
    if (i > 0) os << "*z" << level_ << "^" << i;
  }
  if (first) os << "0";
  return os.str();
}

nlohmann::json CyclotomicNumber::to_json() const {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& c : c_) coeffs.push_back(c.get_str());
  return {{"level", level_}, {"coeffs", coeffs}};
}

CyclotomicNumber CyclotomicNumber::from_json(const nlohmann::json& j) {
  CyclotomicNumber out = zero_at(j.at("level").get<std::int64_t>());
  const auto& coeffs = j.at("coeffs");
  if (coeffs.size() != out.c_.size()) throw std::invalid_argument("CyclotomicNumber: bad coefficient count");
  for (std::size_t i = 0; i < coeffs.size(); ++i) out.c_[i] = Rational(coeffs[i].get<std::string>());
  return out;
}

Phase Phase::make(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::domain_error("Phase: denominator must be positive");
  num %= den;
  if (num < 0) num += den;
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = den;
  return Phase{num / g, den / g};
}

Phase Phase::of(const Rational& t) {
  if (!t.get_den().fits_slong_p() || !t.get_num().fits_slong_p())
    throw std::overflow_error("Phase: fraction too large");
  return make(t.get_num().get_si(), t.get_den().get_si());
}

Phase Phase::operator+(const Phase& o) const {
  const std::int64_t l = lcm64(den, o.den);
  return make(num * (l / den) + o.num * (l / o.den), l);
}

void RootSum::grow(std::int64_t new_level) {
  std::vector<std::int64_t> next(static_cast<std::size_t>(new_level), 0);
  const std::int64_t step = new_level / level_;
  for (std::size_t i = 0; i < counts_.size(); ++i)
    next[static_cast<std::size_t>(static_cast<std::int64_t>(i) * step)] = counts_[i];
  counts_ = std::move(next);
  level_ = new_level;
}

void RootSum::add(const Phase& ph, std::int64_t mult) {
  if (counts_.empty()) counts_.assign(static_cast<std::size_t>(level_), 0);
  if (level_ % ph.den != 0) grow(lcm64(level_, ph.den));
  counts_[static_cast<std::size_t>(ph.num * (level_ / ph.den))] += mult;
}

void RootSum::merge(const RootSum& o) {
  if (o.counts_.empty()) return;
  if (counts_.empty()) counts_.assign(static_cast<std::size_t>(level_), 0);
  const std::int64_t l = lcm64(level_, o.level_);
  if (l != level_) grow(l);
  const std::int64_t step = level_ / o.level_;
  for (std::size_t i = 0; i < o.counts_.size(); ++i)
    counts_[static_cast<std::size_t>(static_cast<std::int64_t>(i) * step)] += o.counts_[i];
}

CyclotomicNumber RootSum::value() const {
  if (counts_.empty()) return CyclotomicNumber(Rational(0));
  return CyclotomicNumber::from_power_sums(level_, counts_);
}

}  // namespace lbirch
