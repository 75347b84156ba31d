#include "lbirch/symbolic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "lbirch/padic.hpp"

namespace lbirch {

PAdicRational PAdicRational::inverse() const {
  if (is_zero()) throw std::domain_error("PAdicRational: inverse of zero");
  return {1 / value_, p_};
}

SymbolicScalar::SymbolicScalar(int nvars, std::int64_t p, const CyclotomicNumber& c) : n_(nvars), p_(p) {
  add_term(Monomial{std::vector<int>(static_cast<std::size_t>(nvars), 0), 0}, c);
}

SymbolicScalar SymbolicScalar::variable(int nvars, std::int64_t p, int i) {
  std::vector<int> e(static_cast<std::size_t>(nvars), 0);
  e.at(static_cast<std::size_t>(i)) = 1;
  return monomial(nvars, p, e);
}

SymbolicScalar SymbolicScalar::qhalf_pow(int nvars, std::int64_t p, std::int64_t k) {
  if (p <= 0) throw std::domain_error("qhalf_pow: no prime attached");
  SymbolicScalar s(nvars, p);
  // qhalf^k = p^{floor(k/2)} * qhalf^{k mod 2}
  std::int64_t h = ((k % 2) + 2) % 2;
  std::int64_t e = (k - h) / 2;
  s.add_term(Monomial{std::vector<int>(static_cast<std::size_t>(nvars), 0), static_cast<int>(h)},
             CyclotomicNumber(rpow(p, e)));
  return s;
}

SymbolicScalar SymbolicScalar::monomial(int nvars, std::int64_t p, const std::vector<int>& exps,
                                        const CyclotomicNumber& c) {
  if (static_cast<int>(exps.size()) != nvars) throw std::invalid_argument("monomial: wrong arity");
  SymbolicScalar s(nvars, p);
  s.add_term(Monomial{exps, 0}, c);
  return s;
}

void SymbolicScalar::add_term(const Monomial& m, const CyclotomicNumber& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

// Scalars built with the default constructor act as 0 of unknown shape.
void SymbolicScalar::adopt(const SymbolicScalar& o) {
  if (n_ == 0 && p_ == 0 && terms_.empty()) {
    n_ = o.n_;
    p_ = o.p_;
    return;
  }
  if (o.n_ == 0 && o.p_ == 0 && o.terms_.empty()) return;
  if (o.n_ != n_) throw std::invalid_argument("SymbolicScalar: variable count mismatch");
  if (p_ == 0) p_ = o.p_;
  if (o.p_ != 0 && o.p_ != p_) throw std::invalid_argument("SymbolicScalar: prime mismatch");
}

SymbolicScalar& SymbolicScalar::operator+=(const SymbolicScalar& o) {
  adopt(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SymbolicScalar& SymbolicScalar::operator-=(const SymbolicScalar& o) {
  adopt(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SymbolicScalar SymbolicScalar::operator-() const {
  SymbolicScalar r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

SymbolicScalar& SymbolicScalar::operator*=(const CyclotomicNumber& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

SymbolicScalar& SymbolicScalar::operator*=(const SymbolicScalar& o) {
  adopt(o);
  SymbolicScalar out(n_, p_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m;
      m.x.resize(ma.x.size());
      for (std::size_t i = 0; i < m.x.size(); ++i) m.x[i] = ma.x[i] + mb.x[i];
      int h = ma.qhalf + mb.qhalf;
      CyclotomicNumber c = ca * cb;
      if (h == 2) {
        h = 0;
        c *= CyclotomicNumber(Rational(static_cast<long>(p_)));
      }
      m.qhalf = h;
      out.add_term(m, c);
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

SymbolicScalar SymbolicScalar::pow(int k) const {
  if (k < 0) {
    // Only monomials are invertible.
    if (terms_.size() != 1) throw std::domain_error("SymbolicScalar: inverse of non-monomial");
    const auto& [m, c] = *terms_.begin();
    SymbolicScalar one(n_, p_, CyclotomicNumber(Rational(1)));
    return one.divided_by_monomial(m, c).pow(-k);
  }
  SymbolicScalar r(n_, p_, CyclotomicNumber(Rational(1)));
  for (int i = 0; i < k; ++i) r *= *this;
  return r;
}

SymbolicScalar SymbolicScalar::divided_by_monomial(const Monomial& m, const CyclotomicNumber& c) const {
  SymbolicScalar out(n_, p_);
  CyclotomicNumber inv = c.inverse();
  for (const auto& [mt, ct] : terms_) {
    Monomial r;
    r.x.resize(mt.x.size());
    for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] = mt.x[i] - m.x[i];
    CyclotomicNumber v = ct * inv;
    int h = mt.qhalf - m.qhalf;
    if (h < 0) {
      // qhalf^{-1} = qhalf / p
      h = 1;
      v *= CyclotomicNumber(Rational(1, static_cast<unsigned long>(p_)));
    }
    r.qhalf = h;
    out.add_term(r, v);
  }
  return out;
}

bool operator==(const SymbolicScalar& a, const SymbolicScalar& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  for (; ia != a.terms_.end(); ++ia, ++ib) {
    if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
  }
  return true;
}

SymbolicScalar SymbolicScalar::eval_x(const std::vector<CyclotomicNumber>& vals) const {
  if (static_cast<int>(vals.size()) != n_) throw std::invalid_argument("eval_x: wrong arity");
  SymbolicScalar out(n_, p_);
  for (const auto& [m, c] : terms_) {
    CyclotomicNumber v = c;
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (m.x[i] != 0) v *= vals[i].pow(m.x[i]);
    out.add_term(Monomial{std::vector<int>(static_cast<std::size_t>(n_), 0), m.qhalf}, v);
  }
  return out;
}

bool SymbolicScalar::is_symmetric() const {
  // Adjacent transpositions generate the symmetric group.
  for (int i = 0; i + 1 < n_; ++i) {
    for (const auto& [m, c] : terms_) {
      Monomial s = m;
      std::swap(s.x[static_cast<std::size_t>(i)], s.x[static_cast<std::size_t>(i + 1)]);
      auto it = terms_.find(s);
      if (it == terms_.end() || !(it->second == c)) return false;
    }
  }
  return true;
}

std::string SymbolicScalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "[" << c.to_string() << "]";
    for (std::size_t i = 0; i < m.x.size(); ++i)
      if (m.x[i] != 0) os << "*x" << (i + 1) << "^" << m.x[i];
    if (m.qhalf) os << "*qh";
  }
  return os.str();
}

nlohmann::json SymbolicScalar::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [m, c] : terms_)
    arr.push_back({{"x", m.x}, {"qhalf", m.qhalf}, {"coeff", c.to_json()}});
  return {{"nvars", n_}, {"p", p_}, {"terms", arr}};
}

}  // namespace lbirch
