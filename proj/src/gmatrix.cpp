#include "lbirch/gmatrix.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace lbirch {

GMatrix::GMatrix(std::int64_t p, const std::vector<std::vector<Rational>>& rows)
    : GMatrix(static_cast<int>(rows.size()), p) {
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n_)
      throw std::invalid_argument("GMatrix: rows must be square");
    for (int j = 0; j < n_; ++j) (*this)(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
}

GMatrix GMatrix::identity(int n, std::int64_t p) {
  GMatrix m(n, p);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

GMatrix GMatrix::diagonal(std::int64_t p, const std::vector<Rational>& d) {
  GMatrix m(static_cast<int>(d.size()), p);
  for (int i = 0; i < m.n_; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return m;
}

GMatrix operator*(const GMatrix& a, const GMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("GMatrix: size mismatch");
  GMatrix c(a.n_, a.p_);
  for (int i = 0; i < a.n_; ++i)
    for (int k = 0; k < a.n_; ++k) {
      const Rational& x = a(i, k);
      if (x == 0) continue;
      for (int j = 0; j < a.n_; ++j)
        if (b(k, j) != 0) c(i, j) += x * b(k, j);
    }
  return c;
}

GMatrix operator+(const GMatrix& a, const GMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("GMatrix: size mismatch");
  GMatrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] += b.a_[i];
  return c;
}

GMatrix operator-(const GMatrix& a, const GMatrix& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("GMatrix: size mismatch");
  GMatrix c = a;
  for (std::size_t i = 0; i < c.a_.size(); ++i) c.a_[i] -= b.a_[i];
  return c;
}

GMatrix GMatrix::scaled(const Rational& c) const {
  GMatrix r = *this;
  for (auto& x : r.a_) x *= c;
  return r;
}

std::vector<Rational> GMatrix::apply(const std::vector<Rational>& v) const {
  if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("GMatrix::apply: size mismatch");
  std::vector<Rational> r(v.size(), Rational(0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r[static_cast<std::size_t>(i)] += (*this)(i, j) * v[static_cast<std::size_t>(j)];
  return r;
}

GMatrix GMatrix::transpose() const {
  GMatrix t(n_, p_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Rational GMatrix::det() const {
  GMatrix m = *this;
  Rational d = 1;
  for (int c = 0; c < n_; ++c) {
    int piv = c;
    while (piv < n_ && m(piv, c) == 0) ++piv;
    if (piv == n_) return Rational(0);
    if (piv != c) {
      for (int j = 0; j < n_; ++j) std::swap(m(piv, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (int r = c + 1; r < n_; ++r) {
      if (m(r, c) == 0) continue;
      Rational f = m(r, c) / m(c, c);
      for (int j = c; j < n_; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return d;
}

GMatrix GMatrix::inverse() const {
  GMatrix m = *this;
  GMatrix inv = identity(n_, p_);
  for (int c = 0; c < n_; ++c) {
    int piv = c;
    while (piv < n_ && m(piv, c) == 0) ++piv;
    if (piv == n_) throw std::domain_error("GMatrix: singular matrix");
    if (piv != c)
      for (int j = 0; j < n_; ++j) {
        std::swap(m(piv, j), m(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    Rational s = 1 / m(c, c);
    for (int j = 0; j < n_; ++j) {
      m(c, j) *= s;
      inv(c, j) *= s;
    }
    for (int r = 0; r < n_; ++r) {
      if (r == c || m(r, c) == 0) continue;
      Rational f = m(r, c);
      for (int j = 0; j < n_; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

std::int64_t GMatrix::min_val() const {
  std::int64_t v = kInfiniteValuation;
  for (const auto& x : a_) v = std::min(v, valuation(x, p_));
  return v;
}

std::string GMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < n_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < n_; ++j) os << (j ? " " : "") << (*this)(i, j).get_str();
  }
  os << "]";
  return os.str();
}

nlohmann::json GMatrix::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < n_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < n_; ++j) row.push_back((*this)(i, j).get_str());
    rows.push_back(row);
  }
  return rows;
}

GMatrix embed(const GMatrix& g, int m) {
  if (m < g.n()) throw std::invalid_argument("embed: target smaller than source");
  GMatrix r = GMatrix::identity(m, g.prime());
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) r(i, j) = g(i, j);
  return r;
}

GMatrix project(const GMatrix& g) {
  if (g.n() == 0) throw std::invalid_argument("project: empty matrix");
  GMatrix r(g.n() - 1, g.prime());
  for (int i = 0; i + 1 < g.n(); ++i)
    for (int j = 0; j + 1 < g.n(); ++j) r(i, j) = g(i, j);
  return r;
}

// --- Weyl group ---

WeylElement::WeylElement(std::vector<int> sigma) : sigma_(std::move(sigma)) {
  std::vector<int> check = sigma_;
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < check.size(); ++i)
    if (check[i] != static_cast<int>(i)) throw std::invalid_argument("WeylElement: not a permutation");
}

WeylElement WeylElement::identity(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 0);
  return WeylElement(s);
}

WeylElement WeylElement::longest(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = n - 1 - i;
  return WeylElement(s);
}

std::vector<WeylElement> WeylElement::all(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  std::iota(s.begin(), s.end(), 0);
  std::vector<WeylElement> out;
  do out.emplace_back(s);
  while (std::next_permutation(s.begin(), s.end()));
  return out;
}

WeylElement WeylElement::from_matrix(const GMatrix& m) {
  std::vector<int> s(static_cast<std::size_t>(m.n()), -1);
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) {
      if (m(i, j) == 0) continue;
      if (m(i, j) != 1 || s[static_cast<std::size_t>(i)] != -1)
        throw std::invalid_argument("WeylElement: not a permutation matrix");
      s[static_cast<std::size_t>(i)] = j;
    }
  return WeylElement(s);
}

bool WeylElement::is_identity() const {
  for (int i = 0; i < n(); ++i)
    if (sigma_[static_cast<std::size_t>(i)] != i) return false;
  return true;
}

GMatrix WeylElement::matrix(std::int64_t p) const {
  GMatrix m(n(), p);
  for (int i = 0; i < n(); ++i) m(i, (*this)[i]) = 1;
  return m;
}

WeylElement operator*(const WeylElement& a, const WeylElement& b) {
  // (ab) has a 1 at (i, sigma_b(sigma_a(i))).
  std::vector<int> s(a.sigma_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = b.sigma_[static_cast<std::size_t>(a.sigma_[i])];
  return WeylElement(s);
}

WeylElement WeylElement::inverse() const {
  std::vector<int> s(sigma_.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[static_cast<std::size_t>(sigma_[i])] = static_cast<int>(i);
  return WeylElement(s);
}

int WeylElement::length() const {
  int l = 0;
  for (int i = 0; i < n(); ++i)
    for (int j = i + 1; j < n(); ++j)
      if ((*this)[i] > (*this)[j]) ++l;
  return l;
}

std::string WeylElement::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < n(); ++i) os << (i ? " " : "") << ((*this)[i] + 1);
  os << ")";
  return os.str();
}

std::vector<int> weyl_to_perm(const WeylElement& w) { return w.sigma(); }
WeylElement perm_to_weyl(const std::vector<int>& sigma) { return WeylElement(sigma); }

// --- special matrices ---

SpecialKind special_kind_from_string(const std::string& s) {
  static const std::pair<const char*, SpecialKind> table[] = {
      {"D", SpecialKind::D}, {"C", SpecialKind::C}, {"A", SpecialKind::A}, {"Atilde", SpecialKind::Atilde},
      {"B", SpecialKind::B}, {"E", SpecialKind::E}, {"Einv", SpecialKind::EinvDisplayed},
      {"Binv", SpecialKind::BinvDisplayed}, {"w", SpecialKind::w}, {"h", SpecialKind::h},
      {"t", SpecialKind::t}, {"hf", SpecialKind::hf}};
  for (const auto& [name, k] : table)
    if (s == name) return k;
  throw std::invalid_argument("unknown special matrix kind: " + s);
}

namespace {

Rational fpow(const Rational& f, std::int64_t k) {
  Rational r = 1;
  Rational b = k >= 0 ? f : 1 / f;
  for (std::int64_t i = 0; i < (k >= 0 ? k : -k); ++i) r *= b;
  return r;
}

}  // namespace

GMatrix special_matrix(SpecialKind kind, int n, const Rational& f, std::int64_t p) {
  if (n < 0) throw std::invalid_argument("special_matrix: negative size");
  const bool needs_f = kind != SpecialKind::w && kind != SpecialKind::h;
  if (needs_f && (f == 0 || valuation(f, p) <= 0))
    throw std::domain_error("special_matrix: f must be a nonzero non-unit");
  GMatrix m(n, p);
  switch (kind) {
    case SpecialKind::D:
      for (int i = 1; i <= n; ++i) m(i - 1, i - 1) = fpow(f, 2 * i - n - 1);
      break;
    case SpecialKind::C:
      m = GMatrix::identity(n, p);
      if (n >= 2) {
        m(n - 1, 0) = fpow(f, n - 1);
        for (int j = 2; j <= n; ++j) m(n - 1, j - 1) = -fpow(f, n - j);
      }
      break;
    case SpecialKind::A:
      m = GMatrix::identity(n, p);
      for (int i = 1; i < n; ++i) m(i - 1, i) = (i == 1 ? Rational(1) : Rational(-1)) / f;
      break;
    case SpecialKind::Atilde:
      for (int i = 1; i <= n; ++i) {
        m(i - 1, i - 1) = (i == 1 ? Rational(1) : Rational(-1)) / f;
        if (i >= 2) m(i - 1, i - 2) = 1;
      }
      break;
    case SpecialKind::B:
      if (n <= 1) return GMatrix::identity(n, p);
      return special_matrix(SpecialKind::Atilde, n, f, p).scaled(f);
    case SpecialKind::E:
      for (int i = 1; i < n; ++i)
        for (int j = 1; j <= n; ++j)
          if (i + j >= n + 1) m(i - 1, j - 1) = fpow(f, i + j - n - 1);
      if (n >= 1) {
        m(n - 1, 0) = 1;
        for (int j = 2; j <= n; ++j) m(n - 1, j - 1) = -fpow(f, j - 1);
      }
      break;
    case SpecialKind::EinvDisplayed:
      for (int i = 1; i <= n; ++i) {
        m(i - 1, n - i) = 1;
        if (n - i >= 1) m(i - 1, n - i - 1) = i == 1 ? f : -f;
      }
      break;
    case SpecialKind::BinvDisplayed:
      for (int i = 1; i <= n; ++i) {
        m(i - 1, 0) = fpow(f, i - 1);
        for (int j = 2; j <= i; ++j) m(i - 1, j - 1) = -fpow(f, i - j);
      }
      break;
    case SpecialKind::w:
      return WeylElement::longest(n).matrix(p);
    case SpecialKind::h:
      for (int i = 0; i + 1 < n; ++i) m(i, n - 2 - i) = 1;
      for (int i = 0; i < n; ++i) m(i, n - 1) = 1;
      break;
    case SpecialKind::t:
      for (int i = 1; i <= n; ++i) m(i - 1, i - 1) = fpow(f, n - i);
      break;
    case SpecialKind::hf: {
      GMatrix t = special_matrix(SpecialKind::t, n, f, p);
      return t.inverse() * special_matrix(SpecialKind::h, n, f, p) * t;
    }
  }
  return m;
}

std::vector<Rational> phi_vector(int n, const Rational& f) {
  std::vector<Rational> v(static_cast<std::size_t>(n));
  for (int nu = 1; nu <= n; ++nu) v[static_cast<std::size_t>(nu - 1)] = fpow(f, nu - n - 1);
  return v;
}

Rational lambda_n(const GMatrix& g, const Rational& f) {
  const int n = g.n();
  if (n == 0) return 0;
  Rational s = 0;
  auto phi = phi_vector(n, f);
  for (int j = 0; j < n; ++j) s += g(n - 1, j) * phi[static_cast<std::size_t>(j)];
  return s;
}

GMatrix eps_matrix(int n, const Rational& x, std::int64_t p) {
  GMatrix m = GMatrix::identity(n, p);
  if (n > 0) m(0, 0) = x;
  return m;
}

GMatrix t_p_matrix(int n, std::int64_t p) {
  GMatrix m(n, p);
  for (int i = 0; i < n; ++i) m(i, i) = rpow(p, n - 1 - i);
  return m;
}

GMatrix d_matrix(int n, int i, std::int64_t p) {
  GMatrix m = GMatrix::identity(n, p);
  m(i - 1, i - 1) = -1;
  return m;
}

GMatrix varpi_power(const std::vector<std::int64_t>& e, std::int64_t p) {
  GMatrix m(static_cast<int>(e.size()), p);
  for (int i = 0; i < m.n(); ++i) m(i, i) = rpow(p, e[static_cast<std::size_t>(i)]);
  return m;
}

bool membership(const GMatrix& g, Subgroup s, int l, int m) {
  const int n = g.n();
  const std::int64_t p = g.prime();
  switch (s) {
    case Subgroup::GLnZp:
      return g.min_val() >= 0 && valuation(g.det(), p) == 0;
    case Subgroup::Iwahori:
      if (!membership(g, Subgroup::GLnZp)) return false;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
          if (g.val(i, j) < 1) return false;
      return true;
    case Subgroup::Unipotent:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
          if (g(i, j) != (i == j ? 1 : 0)) return false;
      return true;
    case Subgroup::Borel:
      for (int i = 0; i < n; ++i) {
        if (g(i, i) == 0) return false;
        for (int j = 0; j < i; ++j)
          if (g(i, j) != 0) return false;
      }
      return true;
    case Subgroup::J: {
      const GMatrix d = g - GMatrix::identity(n, p);
      return d.min_val() >= static_cast<std::int64_t>(m) * l;
    }
  }
  return false;
}

std::vector<IdentityCheck> verify_matrix_identities(int n, const Rational& f, std::int64_t p) {
  std::vector<IdentityCheck> out;
  auto sm = [&](SpecialKind k, int size) { return special_matrix(k, size, f, p); };
  const int N = n + 1;
  const GMatrix Bn = sm(SpecialKind::B, n), BN = sm(SpecialKind::B, N);
  const GMatrix EN = sm(SpecialKind::E, N), DN = sm(SpecialKind::D, N);

  out.push_back({"B_{n+1} h^(f) E_{n+1} = D_{n+1}", BN * sm(SpecialKind::hf, N) * EN == DN});
  out.push_back({"j(B_n) B_{n+1}^-1 = C_{n+1}", embed(Bn, N) * BN.inverse() == sm(SpecialKind::C, N)});
  out.push_back({"det(B_{n+1} C_{n+1}) = det(B_n)", (BN * sm(SpecialKind::C, N)).det() == Bn.det()});
  {
    const GMatrix wN = sm(SpecialKind::w, N);
    const GMatrix conj = wN * DN.inverse() * sm(SpecialKind::A, N) * DN * wN;
    out.push_back({"w D^-1 A D w in Iwahori", membership(conj, Subgroup::Iwahori)});
    out.push_back({"E_{n+1} w_{n+1} in Iwahori", membership(EN * wN, Subgroup::Iwahori)});
  }
  if (n >= 1) {
    const GMatrix En = sm(SpecialKind::E, n);
    out.push_back({"d_1 B_n d_n E_n d_1 = -w_n",
                   d_matrix(n, 1, p) * Bn * d_matrix(n, n, p) * En * d_matrix(n, 1, p) ==
                       sm(SpecialKind::w, n).scaled(-1)});
    out.push_back({"E_n * displayed E_n^-1 = 1", En * sm(SpecialKind::EinvDisplayed, n) == GMatrix::identity(n, p)});
    out.push_back({"B_n * displayed B_n^-1 = 1", Bn * sm(SpecialKind::BinvDisplayed, n) == GMatrix::identity(n, p)});
    std::vector<Rational> want(static_cast<std::size_t>(n), Rational(0));
    want[0] = fpow(f, -n);
    out.push_back({"B_n phi_n = (f^-n, 0, ..., 0)", Bn.apply(phi_vector(n, f)) == want});
    out.push_back({"B_n in Iwahori", membership(Bn, Subgroup::Iwahori)});
  }
  return out;
}

}  // namespace lbirch
